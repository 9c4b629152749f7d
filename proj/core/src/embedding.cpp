#include "subpair/embedding.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "subpair/errors.hpp"

namespace subpair {

PretrainedEmbeddings load_pretrained(const std::string& path, Rng& rng) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open embedding file: " + path);
  }
  return load_pretrained(in, rng, path);
}

PretrainedEmbeddings load_pretrained(std::istream& in, Rng& rng,
                                     const std::string& name) {
  PretrainedEmbeddings pre;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    std::vector<double> vec;
    double v;
    while (ls >> v) vec.push_back(v);
    if (vec.empty()) {
      throw DataError(name + ": line " + std::to_string(line_no) +
                      " has no vector values");
    }
    if (pre.dim == 0) {
      pre.dim = static_cast<int>(vec.size());
    } else if (static_cast<int>(vec.size()) != pre.dim) {
      throw DataError(name + ": line " + std::to_string(line_no) + " has " +
                      std::to_string(vec.size()) + " values, expected " +
                      std::to_string(pre.dim));
    }
    if (pre.vocab.contains(word)) {
      std::cerr << "warning: duplicate word '" << word << "' at " << name
                << ":" << line_no << ", keeping first occurrence\n";
      continue;
    }
    pre.vocab.add(word);
    rows.push_back(std::move(vec));
  }
  if (pre.dim == 0) {
    throw DataError(name + ": no embedding rows found");
  }
  pre.matrix.assign(static_cast<std::size_t>(pre.vocab.size()) * pre.dim, 0.0);
  // UNK and PAD rows are random.
  for (int id = 0; id < 2; ++id) {
    for (int j = 0; j < pre.dim; ++j) {
      pre.matrix[static_cast<std::size_t>(id) * pre.dim + j] =
          rng.uniform(-0.05, 0.05);
    }
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t id = r + 2;
    for (int j = 0; j < pre.dim; ++j) {
      pre.matrix[id * pre.dim + j] = rows[r][static_cast<std::size_t>(j)];
    }
  }
  return pre;
}

EmbeddingTable make_word_table(ParameterStore& store, const std::string& name,
                               const Vocab& words, int dim,
                               const PretrainedEmbeddings* pretrained, Rng& rng,
                               bool trainable, double init_range) {
  if (pretrained && pretrained->dim != dim) {
    throw ConfigError("pretrained dim " + std::to_string(pretrained->dim) +
                      " does not match configured word dim " +
                      std::to_string(dim));
  }
  std::vector<double> values(static_cast<std::size_t>(words.size()) * dim);
  for (int id = 0; id < words.size(); ++id) {
    const std::string& w = words.token(id);
    const bool in_file = pretrained && id >= 2 && pretrained->vocab.contains(w);
    for (int j = 0; j < dim; ++j) {
      values[static_cast<std::size_t>(id) * dim + j] =
          in_file ? pretrained->row(pretrained->vocab.id(w))[j]
                  : rng.uniform(-init_range, init_range);
    }
  }
  EmbeddingTable table;
  table.vocab = words;
  table.trainable = trainable;
  table.matrix = store.add(
      name, Tensor::from_values({words.size(), dim}, std::move(values), true),
      /*frozen=*/!trainable);
  return table;
}

EmbeddingTable make_subword_table(ParameterStore& store, const std::string& name,
                                  const Vocab& subwords, int dim, Rng& rng,
                                  bool trainable, double init_range) {
  EmbeddingTable table;
  table.vocab = subwords;
  table.trainable = trainable;
  table.matrix = store.add(
      name,
      Tensor::uniform({subwords.size(), dim}, -init_range, init_range, rng, true),
      /*frozen=*/!trainable);
  return table;
}

Tensor combine_weighted(const Tensor& word_vec, const Tensor& subword_vec,
                        double alpha) {
  if (word_vec.shape() != subword_vec.shape()) {
    throw std::invalid_argument("combine_weighted: shapes differ, " +
                                shape_str(word_vec.shape()) + " vs " +
                                shape_str(subword_vec.shape()));
  }
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("combine_weighted: alpha must be in [0,1]");
  }
  if (alpha == 1.0) return word_vec;
  if (alpha == 0.0) return subword_vec;
  return add(scale(word_vec, alpha), scale(subword_vec, 1.0 - alpha));
}

void write_embedding_text(std::ostream& os, const Vocab& vocab,
                          const std::vector<std::vector<double>>& vectors) {
  char buf[64];
  for (int id = 2; id < vocab.size(); ++id) {
    os << vocab.token(id);
    for (double v : vectors[static_cast<std::size_t>(id)]) {
      std::snprintf(buf, sizeof(buf), " %.6g", v);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace subpair
