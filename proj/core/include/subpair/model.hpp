#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subpair/composition.hpp"
#include "subpair/data.hpp"
#include "subpair/embedding.hpp"
#include "subpair/lm.hpp"
#include "subpair/lstm.hpp"
#include "subpair/subword.hpp"

namespace subpair {

enum class InputMode {
  kWordPretrainedFixed,
  kWordPretrainedUpdated,
  kWordRandomFixed,
  kWordRandomUpdated,
  kSubwordC2w,
  kSubwordCnn,
  kCombined,
};

enum class Aggregation { kDeepCnn, kMlp };
enum class Composition { kC2w, kCnn };

InputMode input_mode_from_string(const std::string& name);
std::string to_string(InputMode mode);
Aggregation aggregation_from_string(const std::string& name);
std::string to_string(Aggregation agg);

struct ModelConfig {
  InputMode input = InputMode::kSubwordCnn;
  int subword_n = 3;
  Aggregation aggregation = Aggregation::kMlp;
  int cnn_depth = 4;      // conv layers in the deep aggregator
  int cnn_channels = 16;  // channel width of every conv layer
  int hidden = 32;        // encoder hidden size H
  int word_dim = 32;      // composed/looked-up word vector size d
  int subword_dim = 16;   // subword embedding size d'
  int char_hidden = 32;   // C2W bi-LSTM hidden size
  Composition combined_composition = Composition::kCnn;
  double alpha = 0.75;    // word weight in the combined mode
  double gamma = 0.0;     // LM loss weight; 0 disables the LM head
  int lm_hidden = 32;
  int lm_proj = 32;
  bool lm_normalize = true;  // per-token LM loss before weighting
  int lm_min_freq = 2;
  bool lowercase = false;
  std::uint64_t seed = 1;

  bool uses_words() const;
  bool uses_subwords() const;
  bool uses_pretrained() const;
  bool word_table_trainable() const;
  Composition composition() const;  // which subword composition applies
  void validate() const;
};

// Spatial size the interaction tensor is padded/cropped to before the
// deep CNN aggregator.
inline constexpr int kAggregatorSize = 32;
// Hidden width of the MLP aggregator.
inline constexpr int kMlpHidden = 128;
// Focus mask background weight for non-selected word pairs.
inline constexpr double kFocusBackground = 0.1;
// Slice order of the interaction tensor: (cos, l2, dot) per state kind.
inline constexpr int kInteractionSlices = 13;
inline constexpr int kFocusRankingSlice = 6;  // cos over the concat state

struct EncoderParams {
  LstmCellParams fwd, bwd;
  static EncoderParams create(ParameterStore& store, const std::string& prefix,
                              int input_dim, int hidden, Rng& rng);
};

struct EncodedSentence {
  std::vector<Tensor> fwd;     // h-forward per token  [H]
  std::vector<Tensor> bwd;     // h-backward per token [H]
  std::vector<Tensor> both;    // concat               [2H]
  std::vector<Tensor> summed;  // elementwise sum      [H]
  int length() const { return static_cast<int>(fwd.size()); }
};

EncodedSentence encode(const std::vector<Tensor>& word_vecs,
                       const EncoderParams& params);

// 13 x m x n tensor: slices 0-2 similarities over h-forward, 3-5 over
// h-backward, 6-8 over the concatenation, 9-11 over the sum, each ordered
// (cos, euclidean, dot); slice 12 is the constant bias 1.
Tensor interact(const EncodedSentence& a, const EncodedSentence& b);

// Hard attention: greedy non-conflicting selection over the cos-of-concat
// slice, ties broken lexicographically by (i, j); selected cells weigh 1.0
// and everything else kFocusBackground.
struct FocusMask {
  int m = 0, n = 0;
  std::vector<double> cells;  // m x n of {1.0, 0.1}

  double at(int i, int j) const { return cells[static_cast<std::size_t>(i) * n + j]; }
};

FocusMask similarity_focus(const Tensor& interaction);
// Multiplies the 12 non-bias slices by the mask (constant in backward).
Tensor apply_focus(const Tensor& interaction, const FocusMask& mask);

struct DeepCnnParams {
  std::vector<Tensor> kernels;  // per conv layer
  std::vector<Tensor> biases;
  Tensor out_w, out_b;
  static DeepCnnParams create(ParameterStore& store, const std::string& prefix,
                              int depth, int channels, Rng& rng);
};

struct MlpParams {
  Tensor w1, b1, w2, b2;
  static MlpParams create(ParameterStore& store, const std::string& prefix,
                          Rng& rng);
};

struct AggregatorParams {
  Aggregation kind = Aggregation::kMlp;
  std::optional<DeepCnnParams> cnn;
  std::optional<MlpParams> mlp;
};

// Two classification logits from the masked interaction tensor.
Tensor aggregate(const Tensor& masked, const AggregatorParams& params);

// Everything derived from the training split that the model needs to map
// strings to ids.
struct Lexicon {
  Vocab words;
  Vocab subwords;
  Vocab lm_words;
  std::optional<PretrainedEmbeddings> pretrained;
};

Lexicon build_lexicon(const std::vector<SentencePairRecord>& train,
                      const ModelConfig& config,
                      std::optional<PretrainedEmbeddings> pretrained = {});

struct PairForward {
  Tensor logits;         // [2]
  Tensor probabilities;  // [2], sums to 1
  std::vector<Tensor> vecs1, vecs2;  // input vectors, reused by the LM
};

class PwiModel {
 public:
  PwiModel() = default;  // empty shell; populate via build() or a checkpoint

  // allow_missing_pretrained supports checkpoint restores, where the
  // random init is overwritten with the stored values anyway.
  static PwiModel build(const ModelConfig& config, Lexicon lexicon,
                        bool allow_missing_pretrained = false);

  std::vector<Tensor> embed_sentence(const std::vector<std::string>& tokens) const;
  PairForward forward_pair(const SentencePairRecord& pair) const;
  // Joint training loss: classification cross-entropy plus gamma-weighted
  // LM losses over both sentences (per-token normalized when configured).
  Tensor pair_loss(const SentencePairRecord& pair) const;
  // Same, reusing an already-built forward pass (the trainer reads the
  // probabilities and the loss from one graph).
  Tensor loss_from_forward(const PairForward& fwd,
                           const SentencePairRecord& pair) const;
  double paraphrase_probability(const SentencePairRecord& pair) const;

  // Non-contextual vector for one word under the current parameters
  // (table row, subword composition, or their weighted mix).
  std::vector<double> word_vector(const std::string& word) const;

  const ModelConfig& config() const { return config_; }
  const Lexicon& lexicon() const { return lexicon_; }
  ParameterStore& store() { return store_; }
  const ParameterStore& store() const { return store_; }
  const std::optional<LmHead>& lm_head() const { return lm_; }

 private:

  ModelConfig config_;
  Lexicon lexicon_;
  ParameterStore store_;

  std::optional<EmbeddingTable> word_table_;
  std::optional<EmbeddingTable> subword_table_;
  std::optional<C2wParams> c2w_;
  std::optional<CharCnnParams> charcnn_;
  EncoderParams encoder_;
  AggregatorParams aggregator_;
  std::optional<LmHead> lm_;

  SubwordScheme scheme_;

  Tensor embed_word(const std::string& word) const;
};

}  // namespace subpair
