// Acceptance suite: one pass/fail line per criterion, non-zero exit when
// anything fails. Criterion 8 needs the real corpora under
// SUBPAIR_DATA_ROOT and is skipped (not failed) when they are absent.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "subpair/analysis.hpp"
#include "subpair/checkpoint.hpp"
#include "subpair/grad_check.hpp"
#include "subpair/grid.hpp"
#include "subpair/train.hpp"
#include "support/fixtures.hpp"

using namespace subpair;
using subpair::testing::make_pair;
using subpair::testing::redraw_params;
using subpair::testing::synthetic_corpus;

namespace {

int g_failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %s: %s\n", pass ? "PASS" : "FAIL", id,
              detail.c_str());
  if (!pass) ++g_failures;
}

void report_skip(const char* id, const std::string& detail) {
  std::printf("[SKIP] criterion %s: %s\n", id, detail.c_str());
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

ModelConfig micro_config(InputMode input, int subword_n, Aggregation agg,
                         double gamma) {
  ModelConfig config;
  config.input = input;
  config.subword_n = subword_n;
  config.aggregation = agg;
  config.cnn_depth = 2;
  config.cnn_channels = 2;
  config.hidden = 4;
  config.word_dim = 6;
  config.subword_dim = 3;
  config.char_hidden = 3;
  config.gamma = gamma;
  config.lm_hidden = 4;
  config.lm_proj = 3;
  config.lm_min_freq = 1;
  config.seed = 5;
  return config;
}

// ---------------------------------------------------------------- 1
void criterion_gradient_integrity() {
  const auto start = std::chrono::steady_clock::now();
  const SentencePairRecord pair =
      make_pair("heavy rains pour down", "rain falls here", 1);

  struct Combo {
    InputMode input;
    int n;
  };
  const std::vector<Combo> inputs = {
      {InputMode::kWordRandomUpdated, 3}, {InputMode::kSubwordC2w, 1},
      {InputMode::kSubwordC2w, 2},        {InputMode::kSubwordC2w, 3},
      {InputMode::kSubwordCnn, 1},        {InputMode::kSubwordCnn, 2},
      {InputMode::kSubwordCnn, 3},
  };
  double worst = 0.0;
  std::string worst_name;
  int combos = 0;
  // The focus selection and the max-pool/max-over-time argmaxes make the
  // loss piecewise smooth: a probe interval that straddles a selection
  // boundary invalidates the numeric gradient at that coordinate. A
  // failing combo is therefore rechecked at two more generic points; a
  // genuine backward defect fails at every point.
  for (const Combo& combo : inputs) {
    for (Aggregation agg : {Aggregation::kDeepCnn, Aggregation::kMlp}) {
      for (double gamma : {0.0, 0.1}) {
        const ModelConfig config =
            micro_config(combo.input, combo.n, agg, gamma);
        PwiModel model = PwiModel::build(config, build_lexicon({pair}, config));
        double err = 1.0;
        for (int attempt = 0; attempt < 3; ++attempt) {
          redraw_params(model.store(), 0.6,
                        1234 + static_cast<std::uint64_t>(combos) +
                            7919u * static_cast<std::uint64_t>(attempt));
          err = grad_check([&] { return model.pair_loss(pair); },
                           model.store(), 1e-4);
          if (err < 1e-4) break;
        }
        ++combos;
        if (err > worst) {
          worst = err;
          worst_name = to_string(combo.input) + "-" + std::to_string(combo.n) +
                       "/" + to_string(agg) + "/gamma" + std::to_string(gamma);
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "gradient integrity: %d combos, max rel err %.3g (worst %s), "
                "%.1fs (budget 600s)",
                combos, worst, worst_name.c_str(), elapsed);
  report("1", worst < 1e-4 && elapsed < 600.0, detail);
}

// ---------------------------------------------------------------- 2
void criterion_learning_sanity() {
  const auto corpus = synthetic_corpus();

  // Pretrained fixture file covering half of the corpus vocabulary.
  const std::vector<std::string> types = word_types(corpus);
  std::ostringstream emb;
  {
    Rng rng(77);
    for (std::size_t i = 0; i < types.size(); i += 2) {
      emb << types[i];
      for (int j = 0; j < 12; ++j) emb << ' ' << rng.uniform(-0.5, 0.5);
      emb << '\n';
    }
  }

  const InputMode modes[] = {
      InputMode::kWordPretrainedFixed, InputMode::kWordPretrainedUpdated,
      InputMode::kWordRandomFixed,     InputMode::kWordRandomUpdated,
      InputMode::kSubwordC2w,          InputMode::kSubwordCnn,
      InputMode::kCombined,
  };
  bool all_pass = true;
  std::string detail = "learning sanity:";
  for (InputMode mode : modes) {
    const auto start = std::chrono::steady_clock::now();
    ModelConfig config;
    config.input = mode;
    config.subword_n = 3;
    config.aggregation = Aggregation::kMlp;
    config.hidden = 10;
    config.word_dim = 12;
    config.subword_dim = 6;
    config.char_hidden = 8;
    config.seed = 9;

    std::optional<PretrainedEmbeddings> pretrained;
    if (config.uses_pretrained() || mode == InputMode::kCombined) {
      std::istringstream in(emb.str());
      Rng rng(78);
      pretrained = load_pretrained(in, rng, "fixture");
    }
    PwiModel model =
        PwiModel::build(config, build_lexicon(corpus, config, pretrained));
    Optimizer optimizer({OptimizerConfig::Kind::kAdam, 0.005});
    Rng shuffle_rng(31);
    std::vector<std::size_t> order(corpus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    double best_acc = 0.0;
    int epochs_used = 0;
    for (int epoch = 1; epoch <= 200 && best_acc < 0.95; ++epoch) {
      std::shuffle(order.begin(), order.end(), shuffle_rng.engine());
      std::size_t correct = 0;
      for (std::size_t idx : order) {
        const SentencePairRecord& rec = corpus[idx];
        model.store().zero_grads();
        const PairForward fwd = model.forward_pair(rec);
        const int pred = fwd.probabilities.values()[1] >= 0.5 ? 1 : 0;
        if (pred == rec.label) ++correct;
        backward(model.loss_from_forward(fwd, rec));
        optimizer.step(model.store());
      }
      best_acc = std::max(best_acc,
                          static_cast<double>(correct) /
                              static_cast<double>(corpus.size()));
      epochs_used = epoch;
    }
    const double elapsed = seconds_since(start);
    const bool ok = best_acc >= 0.95 && elapsed < 300.0;
    all_pass = all_pass && ok;
    char part[128];
    std::snprintf(part, sizeof(part), " %s acc %.2f in %d epochs (%.1fs);",
                  to_string(mode).c_str(), best_acc, epochs_used, elapsed);
    detail += part;
  }
  report("2", all_pass, detail);
}

// ---------------------------------------------------------------- 3
void criterion_equation_identities() {
  bool ok = true;
  std::string why;
  for (std::uint64_t seed = 1; seed <= 100 && ok; ++seed) {
    Rng rng(seed);
    ParameterStore store;
    EncoderParams encoder = EncoderParams::create(store, "enc", 5, 4, rng);
    redraw_params(store, 0.5, seed);
    auto sentence = [&](int len) {
      std::vector<Tensor> vecs;
      for (int i = 0; i < len; ++i)
        vecs.push_back(Tensor::uniform({5}, -1, 1, rng, false));
      return vecs;
    };
    const int m = rng.uniform_int(1, 6);
    const int n = rng.uniform_int(1, 6);
    const EncodedSentence a = encode(sentence(m), encoder);
    const EncodedSentence b = encode(sentence(n), encoder);

    // Self-similarity: cos diagonal 1, L2 diagonal 0 on all state kinds.
    const Tensor self = interact(a, a);
    const std::size_t self_plane = static_cast<std::size_t>(m) * m;
    for (int base : {0, 3, 6, 9}) {
      for (int i = 0; i < m && ok; ++i) {
        const std::size_t diag = static_cast<std::size_t>(i) * m + i;
        if (std::fabs(self.values()[static_cast<std::size_t>(base) * self_plane + diag] -
                      1.0) > 1e-6) {
          ok = false;
          why = "cos diagonal != 1";
        }
        if (self.values()[static_cast<std::size_t>(base + 1) * self_plane + diag] != 0.0) {
          ok = false;
          why = "l2 diagonal != 0";
        }
      }
    }

    // Transpose symmetry of all non-bias slices.
    const Tensor d = interact(a, b);
    const Tensor dt = interact(b, a);
    const std::size_t plane = static_cast<std::size_t>(m) * n;
    for (int s = 0; s < 12 && ok; ++s) {
      for (int i = 0; i < m && ok; ++i) {
        for (int j = 0; j < n; ++j) {
          const double v =
              d.values()[static_cast<std::size_t>(s) * plane + static_cast<std::size_t>(i) * n + j];
          const double vt = dt.values()[static_cast<std::size_t>(s) * plane +
                                        static_cast<std::size_t>(j) * m + i];
          if (v != vt) {
            ok = false;
            why = "transpose symmetry violated";
            break;
          }
        }
      }
    }

    // Bias slice all ones.
    for (std::size_t c = 12 * plane; c < 13 * plane && ok; ++c) {
      if (d.values()[c] != 1.0) {
        ok = false;
        why = "bias slice != 1";
      }
    }

    // Focus mask is a partial matching of size min(m, n).
    const FocusMask mask = similarity_focus(d);
    std::vector<int> row_used(static_cast<std::size_t>(m), 0);
    std::vector<int> col_used(static_cast<std::size_t>(n), 0);
    int selected = 0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        const double w = mask.at(i, j);
        if (w == 1.0) {
          ++selected;
          ++row_used[static_cast<std::size_t>(i)];
          ++col_used[static_cast<std::size_t>(j)];
        } else if (w != kFocusBackground) {
          ok = false;
          why = "mask cell outside {1.0, 0.1}";
        }
      }
    }
    for (int c : row_used)
      if (c > 1) { ok = false; why = "row selected twice"; }
    for (int c : col_used)
      if (c > 1) { ok = false; why = "column selected twice"; }
    if (selected != std::min(m, n)) {
      ok = false;
      why = "selection count != min(m, n)";
    }
  }
  report("3", ok,
         ok ? "interaction identities and focus matching on 100 random models"
            : "identity violated: " + why);
}

// ---------------------------------------------------------------- 4
void criterion_max_f1_oracle() {
  Rng rng(404);
  bool ok = true;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    const int n = rng.uniform_int(2, 50);
    std::vector<double> scores;
    std::vector<int> labels;
    bool has_pos = false;
    for (int i = 0; i < n; ++i) {
      scores.push_back(rng.uniform_int(0, 12) / 12.0);
      labels.push_back(rng.uniform_int(0, 1));
      has_pos = has_pos || labels.back() == 1;
    }
    if (!has_pos) labels[static_cast<std::size_t>(rng.uniform_int(0, n - 1))] = 1;

    const MaxF1 got = max_f1(scores, labels);

    // Brute-force enumeration of every distinct threshold.
    std::set<double, std::greater<double>> thresholds(scores.begin(), scores.end());
    double best_f1 = -1.0, best_t = 0.0;
    for (double t : thresholds) {
      long tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool pred = scores[i] >= t;
        if (pred && labels[i] == 1) ++tp;
        else if (pred) ++fp;
        else if (labels[i] == 1) ++fn;
      }
      const long denom = 2 * tp + fp + fn;
      const double f1 = denom == 0 ? 0.0
                                   : 2.0 * static_cast<double>(tp) /
                                         static_cast<double>(denom);
      if (f1 > best_f1) {
        best_f1 = f1;
        best_t = t;
      }
    }
    ok = got.f1 == best_f1 && got.threshold == best_t;
  }
  report("4", ok, "max_f1 equals brute-force enumeration on 1000 instances");
}

// ---------------------------------------------------------------- 5
void criterion_joint_loss() {
  const auto corpus = synthetic_corpus();
  bool ok = true;
  std::string why;

  // gamma = 0: the joint loss IS the classification loss, bit for bit.
  {
    ModelConfig config = micro_config(InputMode::kSubwordCnn, 3,
                                      Aggregation::kMlp, 0.0);
    PwiModel model = PwiModel::build(config, build_lexicon(corpus, config));
    for (int i = 0; i < 5; ++i) {
      const SentencePairRecord& rec = corpus[static_cast<std::size_t>(i)];
      const PairForward fwd = model.forward_pair(rec);
      const double joint = model.loss_from_forward(fwd, rec).item();
      const double cls = cross_entropy(fwd.logits, rec.label).item();
      if (joint != cls) {
        ok = false;
        why = "gamma=0 joint != classification loss";
      }
    }
  }

  // gamma > 0: with the classifier path zeroed, its gradient into the
  // subword table is exactly zero, yet one optimizer step still moves
  // subword rows through the LM objective.
  if (ok) {
    ModelConfig config = micro_config(InputMode::kSubwordCnn, 3,
                                      Aggregation::kMlp, 0.1);
    PwiModel model = PwiModel::build(config, build_lexicon(corpus, config));
    for (Parameter& p : model.store().params()) {
      if (p.name.rfind("encoder.", 0) == 0 || p.name.rfind("agg.", 0) == 0) {
        for (double& v : p.tensor.mutable_values()) v = 0.0;
      }
    }
    const Tensor table = model.store().find("input.subword.table")->tensor;
    model.store().zero_grads();
    const PairForward fwd = model.forward_pair(corpus[1]);
    backward(cross_entropy(fwd.logits, corpus[1].label));
    for (double g : table.grad()) {
      if (g != 0.0) {
        ok = false;
        why = "classification gradient into subword rows not zero";
      }
    }
    if (ok) {
      const std::vector<double> before = table.values();
      model.store().zero_grads();
      backward(model.pair_loss(corpus[1]));
      Optimizer opt({OptimizerConfig::Kind::kAdam, 0.01});
      opt.step(model.store());
      if (table.values() == before) {
        ok = false;
        why = "LM objective did not move the subword rows";
      }
    }
  }
  report("5", ok,
         ok ? "gamma=0 bit-equality and LM-only subword updates on fixtures"
            : why);
}

// ---------------------------------------------------------------- 6
void criterion_overlap_analyzer() {
  bool ok = true;
  std::string why;

  // Hand-computed 3-pair fixture, word unigrams:
  //   ("a b c", "a b d")  -> |A|=3 |B|=3 inter=2 union=4
  //   ("x y", "x y")      -> 2 2 2 2
  //   ("p q r s", "p z")  -> 4 2 inter=1 union=5
  // means: shorter (3+2+2)/3, longer (3+2+4)/3, inter (2+2+1)/3,
  // union (4+2+5)/3, ratio 5/11.
  const std::vector<SentencePairRecord> fixture = {
      make_pair("a b c", "a b d", 1),
      make_pair("x y", "x y", 1),
      make_pair("p q r s", "p z", 0),
  };
  const OverlapStats stats =
      overlap_stats(fixture, OverlapUnit::kWord1, PairFilter::kAll);
  if (stats.mean_shorter != 7.0 / 3 || stats.mean_longer != 3.0 ||
      stats.mean_intersection != 5.0 / 3 || stats.mean_union != 11.0 / 3 ||
      stats.ratio != (5.0 / 3) / (11.0 / 3)) {
    ok = false;
    why = "hand-computed overlap mismatch";
  }

  // char-1 on "a b" vs "a c": chars {a,' ',b} vs {a,' ',c}: inter 2, union 4.
  if (ok) {
    const OverlapStats chars = overlap_stats({make_pair("a b", "a c", 1)},
                                             OverlapUnit::kChar1,
                                             PairFilter::kAll);
    if (chars.mean_intersection != 2.0 || chars.mean_union != 4.0 ||
        chars.ratio != 0.5) {
      ok = false;
      why = "hand-computed char overlap mismatch";
    }
  }

  // Multiset identity on 10k random string pairs.
  if (ok) {
    Rng rng(606);
    for (int trial = 0; trial < 10000 && ok; ++trial) {
      auto random_tokens = [&] {
        std::vector<std::string> tokens;
        const int n = rng.uniform_int(1, 6);
        for (int i = 0; i < n; ++i) {
          std::string w;
          const int len = rng.uniform_int(1, 6);
          for (int j = 0; j < len; ++j)
            w += static_cast<char>('a' + rng.uniform_int(0, 4));
          tokens.push_back(w);
        }
        return tokens;
      };
      const auto t1 = random_tokens();
      const auto t2 = random_tokens();
      for (OverlapUnit unit : {OverlapUnit::kChar1, OverlapUnit::kChar2,
                               OverlapUnit::kWord1, OverlapUnit::kWord2}) {
        const auto a = unit_multiset(t1, unit);
        const auto b = unit_multiset(t2, unit);
        if (multiset_intersection_size(a, b) + multiset_union_size(a, b) !=
            multiset_size(a) + multiset_size(b)) {
          ok = false;
          why = "multiset identity violated";
        }
      }
    }
  }
  report("6", ok,
         ok ? "overlap analyzer exact on fixtures, identity on 10k pairs" : why);
}

// ---------------------------------------------------------------- 7
void criterion_oov_behavior() {
  const auto corpus = synthetic_corpus();
  const std::vector<std::string> types = word_types(corpus);
  bool ok = true;
  std::string why;

  // Embedding file covering every second type.
  std::ostringstream emb;
  {
    Rng rng(707);
    for (std::size_t i = 0; i < types.size(); i += 2) {
      emb << types[i];
      for (int j = 0; j < 12; ++j) emb << ' ' << rng.uniform(-0.9, 0.9);
      emb << '\n';
    }
  }
  std::istringstream in(emb.str());
  Rng load_rng(708);
  const PretrainedEmbeddings pre = load_pretrained(in, load_rng, "fixture");

  ModelConfig config;
  config.input = InputMode::kWordPretrainedUpdated;
  config.word_dim = 12;
  config.hidden = 8;
  config.seed = 17;
  PwiModel model =
      PwiModel::build(config, build_lexicon(corpus, config, pre));
  const Tensor table = model.store().find("input.word.table")->tensor;
  const Vocab& words = model.lexicon().words;
  for (int id = 2; id < words.size() && ok; ++id) {
    const std::string& w = words.token(id);
    const bool inv = pre.vocab.contains(w);
    for (int j = 0; j < 12; ++j) {
      const double v = table.values()[static_cast<std::size_t>(id) * 12 + j];
      if (inv) {
        if (v != pre.row(pre.vocab.id(w))[j]) {
          ok = false;
          why = "INV word did not receive its file vector";
        }
      } else if (std::fabs(v) > 0.05) {
        ok = false;
        why = "OOV init outside [-0.05, 0.05]";
      }
    }
  }

  // Subword model: after training on the fixture, the spelling variant
  // pair (sista, sister) must be closer than unrelated pairs.
  if (ok) {
    TrainConfig tc;
    tc.model.input = InputMode::kSubwordCnn;
    tc.model.subword_n = 3;
    tc.model.aggregation = Aggregation::kMlp;
    tc.model.word_dim = 12;
    tc.model.hidden = 10;
    tc.model.subword_dim = 6;
    tc.model.char_hidden = 8;
    tc.model.gamma = 0.1;
    tc.model.seed = 19;
    tc.epochs = 60;
    tc.optimizer.lr = 0.005;
    tc.seed = 20;
    tc.dev_fraction = 0.0;
    const TrainResult result = train(corpus, {}, tc);

    auto cosine = [&](const std::string& a, const std::string& b) {
      const std::vector<double> va = result.model.word_vector(a);
      const std::vector<double> vb = result.model.word_vector(b);
      double dot = 0, na = 0, nb = 0;
      for (std::size_t j = 0; j < va.size(); ++j) {
        dot += va[j] * vb[j];
        na += va[j] * va[j];
        nb += vb[j] * vb[j];
      }
      return dot / (std::sqrt(na) * std::sqrt(nb));
    };
    const double variant = cosine("sista", "sister");
    const char* unrelated[] = {"police", "stocks", "airport", "match"};
    for (const char* u : unrelated) {
      const double c = cosine("sista", u);
      if (variant <= c) {
        ok = false;
        why = "cos(sista, sister) = " + std::to_string(variant) +
              " not above cos(sista, " + u + ") = " + std::to_string(c);
        break;
      }
    }
  }
  report("7", ok,
         ok ? "OOV init bounded; spelling variants closer than unrelated words"
            : why);
}

// ---------------------------------------------------------------- 8
void criterion_real_corpora() {
  const char* root = std::getenv("SUBPAIR_DATA_ROOT");
  if (!root || !*root) {
    report_skip("8", "real corpora not present (set SUBPAIR_DATA_ROOT)");
    return;
  }
  const std::string base(root);
  const std::string url_train = base + "/twitter-url/train.tsv";
  const std::string url_test = base + "/twitter-url/test.tsv";
  const std::string pit_train = base + "/pit2015/train.tsv";
  const std::string pit_test = base + "/pit2015/test.tsv";
  const std::string glove = base + "/glove/glove.twitter.27B.200d.txt";

  auto exists = [](const std::string& p) {
    std::ifstream f(p);
    return f.good();
  };
  if (!exists(url_train) || !exists(pit_train) || !exists(glove)) {
    report_skip("8", "expected files missing under " + base);
    return;
  }
  bool ok = true;
  std::string detail;
  {
    LoadOptions options;
    options.format = PairFormat::kUrl;
    auto records = load_pairs(url_train, options);
    if (exists(url_test)) {
      const auto more = load_pairs(url_test, options);
      records.insert(records.end(), more.begin(), more.end());
    }
    const OverlapStats stats =
        overlap_stats(records, OverlapUnit::kChar1, PairFilter::kAll);
    const double pct = 100.0 * stats.ratio;
    ok = ok && std::fabs(pct - 63.4) <= 0.5;
    detail += "twitter-url char-1 overlap " + std::to_string(pct) + "%; ";
  }
  {
    LoadOptions options;
    options.format = PairFormat::kPit;
    auto records = load_pairs(pit_train, options);
    if (exists(pit_test)) {
      const auto more = load_pairs(pit_test, options);
      records.insert(records.end(), more.begin(), more.end());
    }
    Rng rng(1);
    const PretrainedEmbeddings pre = load_pretrained(glove, rng);
    const OovStats stats = oov_stats(records, pre.vocab);
    const double pct = 100.0 * stats.ratio;
    ok = ok && std::fabs(pct - 13.7) <= 1.0;
    detail += "pit-2015 oov " + std::to_string(pct) + "%";
  }
  report("8", ok, detail);
}

// ---------------------------------------------------------------- 9
void criterion_determinism() {
  const auto corpus = synthetic_corpus();
  TrainConfig config;
  config.model = micro_config(InputMode::kSubwordC2w, 2, Aggregation::kMlp, 0.1);
  config.model.lm_min_freq = 2;
  config.epochs = 3;
  config.seed = 42;

  const TrainResult a = train(corpus, {}, config);
  const TrainResult b = train(corpus, {}, config);

  std::ostringstream ma, mb;
  write_metrics_jsonl(ma, a.history);
  write_metrics_jsonl(mb, b.history);
  const bool metrics_equal = ma.str() == mb.str();
  const bool best_equal = a.best_checkpoint == b.best_checkpoint;
  const bool final_equal =
      checkpoint_bytes(a.model) == checkpoint_bytes(b.model);
  report("9", metrics_equal && best_equal && final_equal,
         "identically seeded runs: metrics and checkpoints byte-identical");
}

}  // namespace

int main() {
  criterion_gradient_integrity();
  criterion_learning_sanity();
  criterion_equation_identities();
  criterion_max_f1_oracle();
  criterion_joint_loss();
  criterion_overlap_analyzer();
  criterion_oov_behavior();
  criterion_real_corpora();
  criterion_determinism();
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
