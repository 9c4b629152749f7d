#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "subpair/data.hpp"
#include "subpair/evaluation.hpp"
#include "subpair/model.hpp"

namespace subpair {

enum class OverlapUnit { kChar1, kChar2, kWord1, kWord2 };
enum class PairFilter { kAll, kParaphraseOnly };

OverlapUnit overlap_unit_from_string(const std::string& name);
std::string to_string(OverlapUnit unit);

// Multiset of counting units for one sentence. Char units run over the
// space-joined sentence (spaces included unless disabled); word units
// over token n-grams.
std::map<std::string, int> unit_multiset(const std::vector<std::string>& tokens,
                                         OverlapUnit unit,
                                         bool include_spaces = true);

long multiset_size(const std::map<std::string, int>& ms);
long multiset_intersection_size(const std::map<std::string, int>& a,
                                const std::map<std::string, int>& b);
long multiset_union_size(const std::map<std::string, int>& a,
                         const std::map<std::string, int>& b);

struct OverlapStats {
  double mean_shorter = 0.0;  // units in the sentence with fewer of them
  double mean_longer = 0.0;
  double mean_union = 0.0;
  double mean_intersection = 0.0;
  double ratio = 0.0;  // mean intersection / mean union
  std::size_t pairs = 0;
};

// Throws when the filter selects zero pairs.
OverlapStats overlap_stats(const std::vector<SentencePairRecord>& records,
                           OverlapUnit unit, PairFilter filter,
                           bool include_spaces = true);

struct OovStats {
  std::size_t inv = 0;   // unique types found in the pretrained vocab
  std::size_t oov = 0;
  double ratio = 0.0;    // oov / (oov + inv)
};

OovStats oov_stats(const std::vector<SentencePairRecord>& records,
                   const Vocab& pretrained_vocab);

// Suffix-stripping stemmer (s/es/ed/ing/ly), applied to a fixpoint so
// stem(stem(w)) == stem(w).
std::string stem(const std::string& word);

// Jaccard overlap of unit multisets: word 1/2/3-grams, stemmed word
// 1/2/3-grams, char 1/2/3/4-grams. All in [0, 1]; empty unions give 0.
inline constexpr int kNgramFeatureCount = 10;
std::array<double, kNgramFeatureCount> ngram_overlap_features(
    const SentencePairRecord& pair);
const std::array<const char*, kNgramFeatureCount>& ngram_feature_names();

struct LrBaselineConfig {
  int epochs = 300;
  double lr = 0.5;
  double l2 = 1e-4;
};

// L2-regularized logistic regression over the overlap features, trained
// full-batch by gradient descent, scored with the F1-max protocol.
EvalReport ngram_lr_baseline(const std::vector<SentencePairRecord>& train,
                             const std::vector<SentencePairRecord>& test,
                             const LrBaselineConfig& config = {});

struct Neighbor {
  std::string word;
  double cosine = 0.0;
};

// Top-k vocabulary words by cosine against the query's composed (or
// looked-up) vector, self excluded, ties broken lexicographically.
std::vector<Neighbor> nearest_neighbors(const std::string& query,
                                        const PwiModel& model, int k);

}  // namespace subpair
