#pragma once

#include <string>
#include <vector>

#include "subpair/ops.hpp"
#include "subpair/parameter.hpp"
#include "subpair/rng.hpp"

namespace subpair {

// One LSTM cell: four gates, each with input weights [h x in], recurrent
// weights [h x h] and a bias [h].
struct LstmCellParams {
  Tensor w_i, u_i, b_i;
  Tensor w_f, u_f, b_f;
  Tensor w_o, u_o, b_o;
  Tensor w_c, u_c, b_c;

  int input_dim() const { return w_i.dim(1); }
  int hidden_dim() const { return w_i.dim(0); }

  static LstmCellParams create(ParameterStore& store, const std::string& prefix,
                               int input_dim, int hidden_dim, Rng& rng,
                               bool frozen = false, double init_range = 0.05);
  void validate() const;
};

struct LstmState {
  Tensor h, c;
};

LstmState lstm_initial_state(int hidden_dim);

// Standard cell: gates through sigmoid, candidate through tanh.
LstmState lstm_step(const Tensor& x, const LstmState& prev,
                    const LstmCellParams& p);

// Left-to-right pass from a zero state; result[i] is the state after
// consuming xs[i].
std::vector<LstmState> run_lstm(const std::vector<Tensor>& xs,
                                const LstmCellParams& p);

// Right-to-left pass from a zero state; result[i] is the state at
// position i, i.e. result[0] has consumed the whole sequence.
std::vector<LstmState> run_lstm_reversed(const std::vector<Tensor>& xs,
                                         const LstmCellParams& p);

}  // namespace subpair
