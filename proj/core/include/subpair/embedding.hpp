#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "subpair/ops.hpp"
#include "subpair/parameter.hpp"
#include "subpair/rng.hpp"
#include "subpair/vocab.hpp"

namespace subpair {

// Vectors parsed from a text embedding file (`word v1 ... vd` per line).
// The vocab holds UNK and PAD plus the file's words; the two special rows
// are random-initialized in [-0.05, 0.05].
struct PretrainedEmbeddings {
  Vocab vocab;
  int dim = 0;
  std::vector<double> matrix;  // row-major, vocab.size() x dim

  const double* row(int id) const { return matrix.data() + static_cast<std::size_t>(id) * dim; }
};

// Throws DataError with the offending line number on ragged lines.
// Duplicate words keep the first occurrence and emit a warning to stderr.
PretrainedEmbeddings load_pretrained(const std::string& path, Rng& rng);
PretrainedEmbeddings load_pretrained(std::istream& in, Rng& rng,
                                     const std::string& name = "<stream>");

// Lookup table bound to a vocabulary; matrix is a registered parameter.
struct EmbeddingTable {
  Vocab vocab;
  Tensor matrix;  // [vocab.size() x dim]
  bool trainable = true;

  int dim() const { return matrix.dim(1); }
  Tensor embed(int id) const { return lookup_row(matrix, id); }
  Tensor embed_word(const std::string& word) const {
    return lookup_row(matrix, vocab.id(word));
  }
};

// Table over `words`. Words found in `pretrained` get the file vector;
// everything else (specials included) is drawn uniform from
// [-init_range, init_range].
EmbeddingTable make_word_table(ParameterStore& store, const std::string& name,
                               const Vocab& words, int dim,
                               const PretrainedEmbeddings* pretrained, Rng& rng,
                               bool trainable, double init_range = 0.05);

EmbeddingTable make_subword_table(ParameterStore& store, const std::string& name,
                                  const Vocab& subwords, int dim, Rng& rng,
                                  bool trainable, double init_range = 0.05);

// alpha * word + (1 - alpha) * subword; alpha in [0, 1].
Tensor combine_weighted(const Tensor& word_vec, const Tensor& subword_vec,
                        double alpha);

// Text dump in the pretrained format, for the neighbor probe.
void write_embedding_text(std::ostream& os, const Vocab& vocab,
                          const std::vector<std::vector<double>>& vectors);

}  // namespace subpair
