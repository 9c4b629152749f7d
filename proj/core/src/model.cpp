#include "subpair/model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "subpair/errors.hpp"
#include "subpair/ops.hpp"

namespace subpair {

InputMode input_mode_from_string(const std::string& name) {
  if (name == "word-pretrained-fixed") return InputMode::kWordPretrainedFixed;
  if (name == "word-pretrained-updated") return InputMode::kWordPretrainedUpdated;
  if (name == "word-random-fixed") return InputMode::kWordRandomFixed;
  if (name == "word-random-updated") return InputMode::kWordRandomUpdated;
  if (name == "subword-c2w") return InputMode::kSubwordC2w;
  if (name == "subword-cnn") return InputMode::kSubwordCnn;
  if (name == "combined") return InputMode::kCombined;
  throw ConfigError("unknown input mode '" + name + "'");
}

std::string to_string(InputMode mode) {
  switch (mode) {
    case InputMode::kWordPretrainedFixed: return "word-pretrained-fixed";
    case InputMode::kWordPretrainedUpdated: return "word-pretrained-updated";
    case InputMode::kWordRandomFixed: return "word-random-fixed";
    case InputMode::kWordRandomUpdated: return "word-random-updated";
    case InputMode::kSubwordC2w: return "subword-c2w";
    case InputMode::kSubwordCnn: return "subword-cnn";
    case InputMode::kCombined: return "combined";
  }
  return "?";
}

Aggregation aggregation_from_string(const std::string& name) {
  if (name == "deep-cnn") return Aggregation::kDeepCnn;
  if (name == "mlp") return Aggregation::kMlp;
  throw ConfigError("unknown aggregation '" + name +
                    "' (expected deep-cnn or mlp)");
}

std::string to_string(Aggregation agg) {
  return agg == Aggregation::kDeepCnn ? "deep-cnn" : "mlp";
}

bool ModelConfig::uses_words() const {
  switch (input) {
    case InputMode::kSubwordC2w:
    case InputMode::kSubwordCnn:
      return false;
    default:
      return true;
  }
}

bool ModelConfig::uses_subwords() const {
  switch (input) {
    case InputMode::kSubwordC2w:
    case InputMode::kSubwordCnn:
    case InputMode::kCombined:
      return true;
    default:
      return false;
  }
}

bool ModelConfig::uses_pretrained() const {
  return input == InputMode::kWordPretrainedFixed ||
         input == InputMode::kWordPretrainedUpdated;
}

bool ModelConfig::word_table_trainable() const {
  switch (input) {
    case InputMode::kWordPretrainedFixed:
    case InputMode::kWordRandomFixed:
      return false;
    default:
      return true;
  }
}

Composition ModelConfig::composition() const {
  if (input == InputMode::kSubwordC2w) return Composition::kC2w;
  if (input == InputMode::kSubwordCnn) return Composition::kCnn;
  return combined_composition;
}

void ModelConfig::validate() const {
  auto positive = [](int v, const char* name) {
    if (v <= 0)
      throw ConfigError(std::string(name) + " must be positive, got " +
                        std::to_string(v));
  };
  positive(hidden, "hidden");
  positive(word_dim, "word_dim");
  positive(subword_dim, "subword_dim");
  positive(char_hidden, "char_hidden");
  positive(lm_hidden, "lm_hidden");
  positive(lm_proj, "lm_proj");
  positive(cnn_channels, "cnn_channels");
  if (subword_n < 1 || subword_n > 3)
    throw ConfigError("subword_n must be 1, 2 or 3");
  if (aggregation == Aggregation::kDeepCnn && cnn_depth < 1)
    throw ConfigError("cnn_depth must be >= 1 for deep-cnn aggregation");
  if (gamma < 0.0) throw ConfigError("gamma must be >= 0");
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must be in [0,1]");
}

EncoderParams EncoderParams::create(ParameterStore& store,
                                    const std::string& prefix, int input_dim,
                                    int hidden, Rng& rng) {
  EncoderParams p;
  p.fwd = LstmCellParams::create(store, prefix + ".fwd", input_dim, hidden, rng);
  p.bwd = LstmCellParams::create(store, prefix + ".bwd", input_dim, hidden, rng);
  return p;
}

EncodedSentence encode(const std::vector<Tensor>& word_vecs,
                       const EncoderParams& params) {
  if (word_vecs.empty()) {
    throw std::invalid_argument("encode: empty sentence");
  }
  EncodedSentence enc;
  const std::vector<LstmState> fwd = run_lstm(word_vecs, params.fwd);
  const std::vector<LstmState> bwd = run_lstm_reversed(word_vecs, params.bwd);
  enc.fwd.reserve(word_vecs.size());
  for (std::size_t i = 0; i < word_vecs.size(); ++i) {
    enc.fwd.push_back(fwd[i].h);
    enc.bwd.push_back(bwd[i].h);
    enc.both.push_back(concat({fwd[i].h, bwd[i].h}, 0));
    enc.summed.push_back(add(fwd[i].h, bwd[i].h));
  }
  return enc;
}

Tensor interact(const EncodedSentence& a, const EncodedSentence& b) {
  if (a.length() == 0 || b.length() == 0) {
    throw std::invalid_argument("interact: empty sentence encoding");
  }
  const Tensor a_fwd = stack_rows(a.fwd);
  const Tensor a_bwd = stack_rows(a.bwd);
  const Tensor a_both = stack_rows(a.both);
  const Tensor a_sum = stack_rows(a.summed);
  const Tensor b_fwd = stack_rows(b.fwd);
  const Tensor b_bwd = stack_rows(b.bwd);
  const Tensor b_both = stack_rows(b.both);
  const Tensor b_sum = stack_rows(b.summed);
  const Tensor ones = Tensor::full({1, a.length(), b.length()}, 1.0);
  return concat({pairwise_similarity(a_fwd, b_fwd),
                 pairwise_similarity(a_bwd, b_bwd),
                 pairwise_similarity(a_both, b_both),
                 pairwise_similarity(a_sum, b_sum), ones},
                0);
}

FocusMask similarity_focus(const Tensor& interaction) {
  if (interaction.rank() != 3 || interaction.dim(0) != kInteractionSlices) {
    throw std::invalid_argument("similarity_focus: expected [13 x m x n], got " +
                                shape_str(interaction.shape()));
  }
  const int m = interaction.dim(1);
  const int n = interaction.dim(2);
  const std::size_t plane = static_cast<std::size_t>(m) * n;
  const double* ranking =
      interaction.values().data() + kFocusRankingSlice * plane;

  std::vector<int> order(plane);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (ranking[x] != ranking[y]) return ranking[x] > ranking[y];
    return x < y;  // lexicographic (i, j) tie-break
  });

  FocusMask mask;
  mask.m = m;
  mask.n = n;
  mask.cells.assign(plane, kFocusBackground);
  std::vector<bool> row_used(static_cast<std::size_t>(m), false);
  std::vector<bool> col_used(static_cast<std::size_t>(n), false);
  for (int cell : order) {
    const int i = cell / n;
    const int j = cell % n;
    if (row_used[static_cast<std::size_t>(i)] ||
        col_used[static_cast<std::size_t>(j)])
      continue;
    row_used[static_cast<std::size_t>(i)] = true;
    col_used[static_cast<std::size_t>(j)] = true;
    mask.cells[static_cast<std::size_t>(cell)] = 1.0;
  }
  return mask;
}

Tensor apply_focus(const Tensor& interaction, const FocusMask& mask) {
  const int m = mask.m, n = mask.n;
  const std::size_t plane = static_cast<std::size_t>(m) * n;
  std::vector<double> weights(static_cast<std::size_t>(kInteractionSlices) * plane);
  for (int s = 0; s < kInteractionSlices - 1; ++s) {
    std::copy(mask.cells.begin(), mask.cells.end(),
              weights.begin() + static_cast<std::ptrdiff_t>(s * plane));
  }
  std::fill(weights.begin() +
                static_cast<std::ptrdiff_t>((kInteractionSlices - 1) * plane),
            weights.end(), 1.0);
  const Tensor weight_tensor = Tensor::from_values(
      {kInteractionSlices, m, n}, std::move(weights), false);
  return mul(interaction, weight_tensor);
}

DeepCnnParams DeepCnnParams::create(ParameterStore& store,
                                    const std::string& prefix, int depth,
                                    int channels, Rng& rng) {
  DeepCnnParams p;
  int h = kAggregatorSize, w = kAggregatorSize;
  for (int layer = 0; layer < depth; ++layer) {
    const int in_ch = layer == 0 ? kInteractionSlices : channels;
    p.kernels.push_back(
        store.add(prefix + ".conv" + std::to_string(layer + 1) + ".kernels",
                  Tensor::uniform({channels, in_ch, 3, 3}, -0.05, 0.05, rng)));
    p.biases.push_back(
        store.add(prefix + ".conv" + std::to_string(layer + 1) + ".biases",
                  Tensor::zeros({channels}, true)));
    if ((layer + 1) % 2 == 0 && h >= 2 && w >= 2) {
      h /= 2;
      w /= 2;
    }
  }
  const int flat = channels * h * w;
  p.out_w = store.add(prefix + ".out.W",
                      Tensor::uniform({2, flat}, -0.05, 0.05, rng));
  p.out_b = store.add(prefix + ".out.b", Tensor::zeros({2}, true));
  return p;
}

MlpParams MlpParams::create(ParameterStore& store, const std::string& prefix,
                            Rng& rng) {
  MlpParams p;
  p.w1 = store.add(prefix + ".W1",
                   Tensor::uniform({kMlpHidden, 2 * kInteractionSlices}, -0.05,
                                   0.05, rng));
  p.b1 = store.add(prefix + ".b1", Tensor::zeros({kMlpHidden}, true));
  p.w2 = store.add(prefix + ".W2",
                   Tensor::uniform({2, kMlpHidden}, -0.05, 0.05, rng));
  p.b2 = store.add(prefix + ".b2", Tensor::zeros({2}, true));
  return p;
}

namespace {

Tensor aggregate_deep_cnn(const Tensor& masked, const DeepCnnParams& p) {
  Tensor x = pad_or_crop_hw(masked, kAggregatorSize, kAggregatorSize);
  for (std::size_t layer = 0; layer < p.kernels.size(); ++layer) {
    x = tanh(conv2d_3x3(x, p.kernels[layer], p.biases[layer]));
    if ((layer + 1) % 2 == 0 && x.dim(1) >= 2 && x.dim(2) >= 2) {
      x = max_pool2d(x);
    }
  }
  const int flat = x.dim(0) * x.dim(1) * x.dim(2);
  return affine(p.out_w, reshape(x, {flat}), p.out_b);
}

Tensor aggregate_mlp(const Tensor& masked, const MlpParams& p) {
  const double inv_cells = 1.0 / (masked.dim(1) * masked.dim(2));
  const Tensor max_pooled = max_over_axis(max_over_axis(masked, 2), 1);
  const Tensor mean_pooled =
      scale(sum_over_axis(sum_over_axis(masked, 2), 1), inv_cells);
  const Tensor pooled = concat({max_pooled, mean_pooled}, 0);
  const Tensor hidden = tanh(affine(p.w1, pooled, p.b1));
  return affine(p.w2, hidden, p.b2);
}

}  // namespace

Tensor aggregate(const Tensor& masked, const AggregatorParams& params) {
  switch (params.kind) {
    case Aggregation::kDeepCnn:
      if (!params.cnn) throw std::invalid_argument("aggregate: missing cnn params");
      return aggregate_deep_cnn(masked, *params.cnn);
    case Aggregation::kMlp:
      if (!params.mlp) throw std::invalid_argument("aggregate: missing mlp params");
      return aggregate_mlp(masked, *params.mlp);
  }
  throw std::invalid_argument("aggregate: unknown aggregation");
}

Lexicon build_lexicon(const std::vector<SentencePairRecord>& train,
                      const ModelConfig& config,
                      std::optional<PretrainedEmbeddings> pretrained) {
  Lexicon lex;
  lex.words = build_word_vocab(train);
  if (config.uses_subwords()) {
    lex.subwords = build_subword_vocab(
        word_types(train), SubwordScheme::for_ngram(config.subword_n));
  }
  if (config.gamma > 0.0) {
    lex.lm_words = build_lm_vocab(train, config.lm_min_freq);
  }
  lex.pretrained = std::move(pretrained);
  return lex;
}

PwiModel PwiModel::build(const ModelConfig& config, Lexicon lexicon,
                         bool allow_missing_pretrained) {
  config.validate();
  if (config.uses_pretrained() && !lexicon.pretrained &&
      !allow_missing_pretrained) {
    throw ConfigError("input mode " + to_string(config.input) +
                      " requires a pretrained embedding file");
  }
  PwiModel model;
  model.config_ = config;
  model.lexicon_ = std::move(lexicon);
  model.scheme_ = SubwordScheme::for_ngram(config.subword_n);
  Rng rng(config.seed);

  const Lexicon& lex = model.lexicon_;
  if (config.uses_words()) {
    const PretrainedEmbeddings* pre = nullptr;
    if (config.uses_pretrained() || config.input == InputMode::kCombined) {
      pre = lex.pretrained ? &*lex.pretrained : nullptr;
    }
    model.word_table_ =
        make_word_table(model.store_, "input.word.table", lex.words,
                        config.word_dim, pre, rng,
                        config.word_table_trainable());
  }
  if (config.uses_subwords()) {
    model.subword_table_ =
        make_subword_table(model.store_, "input.subword.table", lex.subwords,
                           config.subword_dim, rng, /*trainable=*/true);
    if (config.composition() == Composition::kC2w) {
      model.c2w_ = C2wParams::create(model.store_, "input.c2w",
                                     config.subword_dim, config.char_hidden,
                                     config.word_dim, rng);
    } else {
      model.charcnn_ = CharCnnParams::create(
          model.store_, "input.cnn", config.subword_dim, config.word_dim, rng);
    }
  }
  model.encoder_ = EncoderParams::create(model.store_, "encoder",
                                         config.word_dim, config.hidden, rng);
  model.aggregator_.kind = config.aggregation;
  if (config.aggregation == Aggregation::kDeepCnn) {
    model.aggregator_.cnn = DeepCnnParams::create(
        model.store_, "agg.cnn", config.cnn_depth, config.cnn_channels, rng);
  } else {
    model.aggregator_.mlp = MlpParams::create(model.store_, "agg.mlp", rng);
  }
  if (config.gamma > 0.0) {
    model.lm_ = LmHead::create(model.store_, "lm", config.word_dim,
                               config.lm_hidden, config.lm_proj,
                               lex.lm_words.size(), rng);
  }
  return model;
}

Tensor PwiModel::embed_word(const std::string& word) const {
  Tensor word_vec, subword_vec;
  if (config_.uses_words()) {
    word_vec = word_table_->embed_word(word);
  }
  if (config_.uses_subwords()) {
    const std::vector<int> ids =
        subword_ids(word, scheme_, subword_table_->vocab);
    subword_vec = c2w_ ? compose_c2w(ids, *subword_table_, *c2w_)
                       : compose_charcnn(ids, *subword_table_, *charcnn_);
  }
  if (config_.input == InputMode::kCombined) {
    return combine_weighted(word_vec, subword_vec, config_.alpha);
  }
  return config_.uses_subwords() ? subword_vec : word_vec;
}

std::vector<Tensor> PwiModel::embed_sentence(
    const std::vector<std::string>& tokens) const {
  if (tokens.empty()) {
    throw std::invalid_argument("embed_sentence: empty sentence");
  }
  std::vector<Tensor> vecs;
  vecs.reserve(tokens.size());
  for (const std::string& tok : tokens) vecs.push_back(embed_word(tok));
  return vecs;
}

PairForward PwiModel::forward_pair(const SentencePairRecord& pair) const {
  PairForward out;
  out.vecs1 = embed_sentence(pair.sentence1);
  out.vecs2 = embed_sentence(pair.sentence2);
  const EncodedSentence enc1 = encode(out.vecs1, encoder_);
  const EncodedSentence enc2 = encode(out.vecs2, encoder_);
  const Tensor interaction = interact(enc1, enc2);
  const FocusMask mask = similarity_focus(interaction);
  const Tensor masked = apply_focus(interaction, mask);
  out.logits = aggregate(masked, aggregator_);
  out.probabilities = softmax(out.logits);
  return out;
}

Tensor PwiModel::pair_loss(const SentencePairRecord& pair) const {
  return loss_from_forward(forward_pair(pair), pair);
}

Tensor PwiModel::loss_from_forward(const PairForward& fwd,
                                   const SentencePairRecord& pair) const {
  const Tensor cls = cross_entropy(fwd.logits, pair.label);
  if (config_.gamma == 0.0 || !lm_) {
    return cls;
  }
  auto sentence_losses = [&](const std::vector<std::string>& tokens,
                             const std::vector<Tensor>& vecs) {
    std::vector<int> targets;
    targets.reserve(tokens.size());
    for (const std::string& tok : tokens)
      targets.push_back(lexicon_.lm_words.id(tok));
    LmLosses losses = lm_losses(targets, vecs, *lm_);
    if (config_.lm_normalize) {
      const double norm =
          1.0 / std::max<std::size_t>(1, tokens.size() - 1);
      losses.fwd = scale(losses.fwd, norm);
      losses.bwd = scale(losses.bwd, norm);
    }
    return losses;
  };
  const LmLosses l1 = sentence_losses(pair.sentence1, fwd.vecs1);
  const LmLosses l2 = sentence_losses(pair.sentence2, fwd.vecs2);
  return joint_loss(cls, add(l1.fwd, l2.fwd), add(l1.bwd, l2.bwd),
                    config_.gamma);
}

double PwiModel::paraphrase_probability(const SentencePairRecord& pair) const {
  return forward_pair(pair).probabilities.values()[1];
}

std::vector<double> PwiModel::word_vector(const std::string& word) const {
  if (word.empty()) {
    throw std::invalid_argument("word_vector: empty word");
  }
  return embed_word(word).values();
}

}  // namespace subpair
