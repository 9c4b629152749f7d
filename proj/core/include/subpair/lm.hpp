#pragma once

#include <string>
#include <vector>

#include "subpair/lstm.hpp"
#include "subpair/vocab.hpp"

namespace subpair {

// Bidirectional language model head. Runs its own Bi-LSTM (separate from
// the pair encoder) over the same input vectors the classifier consumes,
// projects each hidden state through tanh(W_hm h) and scores the next
// (forward) or previous (backward) word over the LM vocabulary.
struct LmHead {
  LstmCellParams fwd, bwd;
  Tensor w_hm_f, w_hm_b;      // [proj x hidden]
  Tensor out_w_f, out_b_f;    // [vocab x proj], [vocab]
  Tensor out_w_b, out_b_b;

  int vocab_size() const { return out_w_f.dim(0); }

  static LmHead create(ParameterStore& store, const std::string& prefix,
                       int input_dim, int hidden, int proj, int vocab_size,
                       Rng& rng);
};

struct LmLosses {
  Tensor fwd, bwd;  // scalars; exact zeros when the sentence has one token
};

// Sum over t of -log P(next|state_t) and -log P(prev|state_t). Targets are
// LM-vocab ids (callers map OOV to UNK before this point).
LmLosses lm_losses(const std::vector<int>& target_ids,
                   const std::vector<Tensor>& input_vecs, const LmHead& head);

// cls + gamma * (fwd + bwd). With gamma == 0 returns `cls` itself so the
// joint loss is bit-identical to the classification loss. Rejects
// gamma < 0.
Tensor joint_loss(const Tensor& cls, const Tensor& lm_fwd, const Tensor& lm_bwd,
                  double gamma);

}  // namespace subpair
