#include "subpair/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "subpair/grad_check.hpp"
#include "subpair/optimizer.hpp"
#include "subpair/ops.hpp"
#include "subpair/subword.hpp"

namespace subpair {

OverlapUnit overlap_unit_from_string(const std::string& name) {
  if (name == "char-1") return OverlapUnit::kChar1;
  if (name == "char-2") return OverlapUnit::kChar2;
  if (name == "word-1") return OverlapUnit::kWord1;
  if (name == "word-2") return OverlapUnit::kWord2;
  throw std::invalid_argument("unknown overlap unit '" + name +
                              "' (expected char-1, char-2, word-1, word-2)");
}

std::string to_string(OverlapUnit unit) {
  switch (unit) {
    case OverlapUnit::kChar1: return "char-1";
    case OverlapUnit::kChar2: return "char-2";
    case OverlapUnit::kWord1: return "word-1";
    case OverlapUnit::kWord2: return "word-2";
  }
  return "?";
}

namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string joined;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) joined += ' ';
    joined += tokens[i];
  }
  return joined;
}

void add_char_ngrams(std::map<std::string, int>& ms, const std::string& text,
                     int n) {
  const std::vector<std::string> chars = utf8_chars(text);
  if (static_cast<int>(chars.size()) < n) return;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= chars.size(); ++i) {
    std::string gram;
    for (int j = 0; j < n; ++j) gram += chars[i + static_cast<std::size_t>(j)];
    ++ms[gram];
  }
}

void add_word_ngrams(std::map<std::string, int>& ms,
                     const std::vector<std::string>& tokens, int n) {
  if (static_cast<int>(tokens.size()) < n) return;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
    std::string gram = tokens[i];
    for (int j = 1; j < n; ++j) gram += " " + tokens[i + static_cast<std::size_t>(j)];
    ++ms[gram];
  }
}

}  // namespace

std::map<std::string, int> unit_multiset(const std::vector<std::string>& tokens,
                                         OverlapUnit unit, bool include_spaces) {
  std::map<std::string, int> ms;
  switch (unit) {
    case OverlapUnit::kChar1:
    case OverlapUnit::kChar2: {
      std::string text = join_tokens(tokens);
      if (!include_spaces) {
        text.erase(std::remove(text.begin(), text.end(), ' '), text.end());
      }
      add_char_ngrams(ms, text, unit == OverlapUnit::kChar1 ? 1 : 2);
      break;
    }
    case OverlapUnit::kWord1:
      add_word_ngrams(ms, tokens, 1);
      break;
    case OverlapUnit::kWord2:
      add_word_ngrams(ms, tokens, 2);
      break;
  }
  return ms;
}

long multiset_size(const std::map<std::string, int>& ms) {
  long total = 0;
  for (const auto& [unit, count] : ms) total += count;
  return total;
}

long multiset_intersection_size(const std::map<std::string, int>& a,
                                const std::map<std::string, int>& b) {
  long total = 0;
  for (const auto& [unit, count] : a) {
    auto it = b.find(unit);
    if (it != b.end()) total += std::min(count, it->second);
  }
  return total;
}

long multiset_union_size(const std::map<std::string, int>& a,
                         const std::map<std::string, int>& b) {
  long total = 0;
  for (const auto& [unit, count] : a) {
    auto it = b.find(unit);
    total += it == b.end() ? count : std::max(count, it->second);
  }
  for (const auto& [unit, count] : b) {
    if (!a.count(unit)) total += count;
  }
  return total;
}

OverlapStats overlap_stats(const std::vector<SentencePairRecord>& records,
                           OverlapUnit unit, PairFilter filter,
                           bool include_spaces) {
  OverlapStats stats;
  double shorter = 0, longer = 0, uni = 0, inter = 0;
  for (const SentencePairRecord& rec : records) {
    if (filter == PairFilter::kParaphraseOnly && rec.label != 1) continue;
    const auto a = unit_multiset(rec.sentence1, unit, include_spaces);
    const auto b = unit_multiset(rec.sentence2, unit, include_spaces);
    const long na = multiset_size(a);
    const long nb = multiset_size(b);
    shorter += static_cast<double>(std::min(na, nb));
    longer += static_cast<double>(std::max(na, nb));
    uni += static_cast<double>(multiset_union_size(a, b));
    inter += static_cast<double>(multiset_intersection_size(a, b));
    ++stats.pairs;
  }
  if (stats.pairs == 0) {
    throw std::invalid_argument("overlap_stats: filter selected zero pairs");
  }
  const double n = static_cast<double>(stats.pairs);
  stats.mean_shorter = shorter / n;
  stats.mean_longer = longer / n;
  stats.mean_union = uni / n;
  stats.mean_intersection = inter / n;
  stats.ratio = stats.mean_union == 0.0 ? 0.0 : stats.mean_intersection / stats.mean_union;
  return stats;
}

OovStats oov_stats(const std::vector<SentencePairRecord>& records,
                   const Vocab& pretrained_vocab) {
  OovStats stats;
  for (const std::string& w : word_types(records)) {
    if (pretrained_vocab.contains(w)) ++stats.inv;
    else ++stats.oov;
  }
  const std::size_t total = stats.inv + stats.oov;
  stats.ratio = total == 0 ? 0.0
                           : static_cast<double>(stats.oov) /
                                 static_cast<double>(total);
  return stats;
}

std::string stem(const std::string& word) {
  static const char* kSuffixes[] = {"ing", "es", "ed", "ly", "s"};
  std::string w = word;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const char* suffix : kSuffixes) {
      const std::size_t len = std::char_traits<char>::length(suffix);
      if (w.size() >= len + 2 && w.compare(w.size() - len, len, suffix) == 0) {
        w.erase(w.size() - len);
        changed = true;
        break;
      }
    }
  }
  return w;
}

namespace {

double jaccard(const std::map<std::string, int>& a,
               const std::map<std::string, int>& b) {
  const long u = multiset_union_size(a, b);
  if (u == 0) return 0.0;
  return static_cast<double>(multiset_intersection_size(a, b)) /
         static_cast<double>(u);
}

std::map<std::string, int> word_ngram_multiset(
    const std::vector<std::string>& tokens, int n) {
  std::map<std::string, int> ms;
  add_word_ngrams(ms, tokens, n);
  return ms;
}

std::map<std::string, int> char_ngram_multiset(
    const std::vector<std::string>& tokens, int n) {
  std::map<std::string, int> ms;
  add_char_ngrams(ms, join_tokens(tokens), n);
  return ms;
}

}  // namespace

std::array<double, kNgramFeatureCount> ngram_overlap_features(
    const SentencePairRecord& pair) {
  std::array<double, kNgramFeatureCount> features{};
  std::size_t fi = 0;
  for (int n = 1; n <= 3; ++n) {
    features[fi++] = jaccard(word_ngram_multiset(pair.sentence1, n),
                             word_ngram_multiset(pair.sentence2, n));
  }
  std::vector<std::string> stemmed1, stemmed2;
  for (const std::string& w : pair.sentence1) stemmed1.push_back(stem(w));
  for (const std::string& w : pair.sentence2) stemmed2.push_back(stem(w));
  for (int n = 1; n <= 3; ++n) {
    features[fi++] = jaccard(word_ngram_multiset(stemmed1, n),
                             word_ngram_multiset(stemmed2, n));
  }
  for (int n = 1; n <= 4; ++n) {
    features[fi++] = jaccard(char_ngram_multiset(pair.sentence1, n),
                             char_ngram_multiset(pair.sentence2, n));
  }
  return features;
}

const std::array<const char*, kNgramFeatureCount>& ngram_feature_names() {
  static const std::array<const char*, kNgramFeatureCount> kNames = {
      "word1", "word2", "word3", "stem1", "stem2",
      "stem3", "char1", "char2", "char3", "char4"};
  return kNames;
}

EvalReport ngram_lr_baseline(const std::vector<SentencePairRecord>& train,
                             const std::vector<SentencePairRecord>& test,
                             const LrBaselineConfig& config) {
  if (train.empty() || test.empty()) {
    throw std::invalid_argument("ngram_lr_baseline: empty split");
  }
  bool has_pos = false, has_neg = false;
  for (const SentencePairRecord& r : train) {
    (r.label == 1 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw std::invalid_argument(
        "ngram_lr_baseline: training set has a single class");
  }

  std::vector<std::array<double, kNgramFeatureCount>> feats;
  feats.reserve(train.size());
  for (const SentencePairRecord& r : train) feats.push_back(ngram_overlap_features(r));

  ParameterStore store;
  const Tensor weights =
      store.add("lr.weights", Tensor::zeros({kNgramFeatureCount}, true));
  const Tensor bias = store.add("lr.bias", Tensor::zeros({1}, true));

  auto batch_loss = [&]() {
    Tensor total;
    for (std::size_t i = 0; i < train.size(); ++i) {
      const Tensor x = Tensor::from_values(
          {kNgramFeatureCount},
          std::vector<double>(feats[i].begin(), feats[i].end()));
      const Tensor score = add(sum(mul(weights, x)), bias);
      // softmax([0, s]) gives sigmoid(s) for the positive class
      const Tensor logits = concat({Tensor::zeros({1}), score}, 0);
      const Tensor ce = cross_entropy(logits, train[i].label);
      total = total.valid() ? add(total, ce) : ce;
    }
    total = scale(total, 1.0 / static_cast<double>(train.size()));
    const Tensor reg = scale(sum(mul(weights, weights)), config.l2);
    return add(total, reg);
  };

  Optimizer opt({OptimizerConfig::Kind::kSgd, config.lr});
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    store.zero_grads();
    backward(batch_loss());
    opt.step(store);
  }

  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(test.size());
  for (const SentencePairRecord& r : test) {
    const auto f = ngram_overlap_features(r);
    double s = bias.values()[0];
    for (int j = 0; j < kNgramFeatureCount; ++j)
      s += weights.values()[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(j)];
    scores.push_back(1.0 / (1.0 + std::exp(-s)));
    labels.push_back(r.label);
  }
  return evaluate_scores(scores, labels, store.trainable_count());
}

std::vector<Neighbor> nearest_neighbors(const std::string& query,
                                        const PwiModel& model, int k) {
  if (query.empty()) {
    throw std::invalid_argument("nearest_neighbors: empty query");
  }
  if (k < 1) {
    throw std::invalid_argument("nearest_neighbors: k must be >= 1");
  }
  const std::vector<double> qv = model.word_vector(query);
  double qnorm = 0.0;
  for (double v : qv) qnorm += v * v;
  qnorm = std::sqrt(qnorm);

  std::vector<Neighbor> all;
  const Vocab& words = model.lexicon().words;
  for (int id = 2; id < words.size(); ++id) {
    const std::string& w = words.token(id);
    if (w == query) continue;  // self excluded
    const std::vector<double> wv = model.word_vector(w);
    double dot = 0.0, wnorm = 0.0;
    for (std::size_t j = 0; j < wv.size(); ++j) {
      dot += qv[j] * wv[j];
      wnorm += wv[j] * wv[j];
    }
    wnorm = std::sqrt(wnorm);
    const double denom = std::max(qnorm, 1e-12) * std::max(wnorm, 1e-12);
    all.push_back({w, dot / denom});
  }
  std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.cosine != b.cosine) return a.cosine > b.cosine;
    return a.word < b.word;
  });
  if (static_cast<int>(all.size()) > k) all.resize(static_cast<std::size_t>(k));
  return all;
}

}  // namespace subpair
