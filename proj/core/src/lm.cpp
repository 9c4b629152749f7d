#include "subpair/lm.hpp"

#include <stdexcept>

#include "subpair/ops.hpp"

namespace subpair {

LmHead LmHead::create(ParameterStore& store, const std::string& prefix,
                      int input_dim, int hidden, int proj, int vocab_size,
                      Rng& rng) {
  LmHead head;
  head.fwd = LstmCellParams::create(store, prefix + ".fwd", input_dim, hidden, rng);
  head.bwd = LstmCellParams::create(store, prefix + ".bwd", input_dim, hidden, rng);
  head.w_hm_f = store.add(prefix + ".W_hm_f",
                          Tensor::uniform({proj, hidden}, -0.05, 0.05, rng));
  head.w_hm_b = store.add(prefix + ".W_hm_b",
                          Tensor::uniform({proj, hidden}, -0.05, 0.05, rng));
  head.out_w_f = store.add(prefix + ".out_W_f",
                           Tensor::uniform({vocab_size, proj}, -0.05, 0.05, rng));
  head.out_b_f = store.add(prefix + ".out_b_f", Tensor::zeros({vocab_size}, true));
  head.out_w_b = store.add(prefix + ".out_W_b",
                           Tensor::uniform({vocab_size, proj}, -0.05, 0.05, rng));
  head.out_b_b = store.add(prefix + ".out_b_b", Tensor::zeros({vocab_size}, true));
  return head;
}

LmLosses lm_losses(const std::vector<int>& target_ids,
                   const std::vector<Tensor>& input_vecs, const LmHead& head) {
  if (target_ids.size() != input_vecs.size()) {
    throw std::invalid_argument("lm_losses: " + std::to_string(target_ids.size()) +
                                " targets for " +
                                std::to_string(input_vecs.size()) + " vectors");
  }
  const std::size_t t_len = input_vecs.size();
  if (t_len < 2) {
    return {Tensor::scalar(0.0), Tensor::scalar(0.0)};
  }
  const std::vector<LstmState> fwd_states = run_lstm(input_vecs, head.fwd);
  Tensor fwd_loss;
  for (std::size_t t = 0; t + 1 < t_len; ++t) {
    const Tensor m = tanh(matvec(head.w_hm_f, fwd_states[t].h));
    const Tensor logits = affine(head.out_w_f, m, head.out_b_f);
    const Tensor ce = cross_entropy(logits, target_ids[t + 1]);
    fwd_loss = fwd_loss.valid() ? add(fwd_loss, ce) : ce;
  }
  const std::vector<LstmState> bwd_states = run_lstm_reversed(input_vecs, head.bwd);
  Tensor bwd_loss;
  for (std::size_t t = 1; t < t_len; ++t) {
    const Tensor m = tanh(matvec(head.w_hm_b, bwd_states[t].h));
    const Tensor logits = affine(head.out_w_b, m, head.out_b_b);
    const Tensor ce = cross_entropy(logits, target_ids[t - 1]);
    bwd_loss = bwd_loss.valid() ? add(bwd_loss, ce) : ce;
  }
  return {fwd_loss, bwd_loss};
}

Tensor joint_loss(const Tensor& cls, const Tensor& lm_fwd, const Tensor& lm_bwd,
                  double gamma) {
  if (gamma < 0.0) {
    throw std::invalid_argument("joint_loss: gamma must be >= 0, got " +
                                std::to_string(gamma));
  }
  if (cls.size() != 1 || lm_fwd.size() != 1 || lm_bwd.size() != 1) {
    throw std::invalid_argument("joint_loss: all inputs must be scalars");
  }
  if (gamma == 0.0) return cls;
  return add(cls, scale(add(lm_fwd, lm_bwd), gamma));
}

}  // namespace subpair
