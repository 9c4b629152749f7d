#include "subpair/lstm.hpp"

#include <stdexcept>

namespace subpair {

LstmCellParams LstmCellParams::create(ParameterStore& store,
                                      const std::string& prefix, int input_dim,
                                      int hidden_dim, Rng& rng, bool frozen,
                                      double init_range) {
  auto weight = [&](const std::string& name, int rows, int cols) {
    return store.add(prefix + "." + name,
                     Tensor::uniform({rows, cols}, -init_range, init_range, rng),
                     frozen);
  };
  auto bias = [&](const std::string& name) {
    return store.add(prefix + "." + name, Tensor::zeros({hidden_dim}, true),
                     frozen);
  };
  LstmCellParams p;
  p.w_i = weight("W_i", hidden_dim, input_dim);
  p.u_i = weight("U_i", hidden_dim, hidden_dim);
  p.b_i = bias("b_i");
  p.w_f = weight("W_f", hidden_dim, input_dim);
  p.u_f = weight("U_f", hidden_dim, hidden_dim);
  p.b_f = bias("b_f");
  p.w_o = weight("W_o", hidden_dim, input_dim);
  p.u_o = weight("U_o", hidden_dim, hidden_dim);
  p.b_o = bias("b_o");
  p.w_c = weight("W_c", hidden_dim, input_dim);
  p.u_c = weight("U_c", hidden_dim, hidden_dim);
  p.b_c = bias("b_c");
  return p;
}

void LstmCellParams::validate() const {
  const int h = hidden_dim();
  const int in = input_dim();
  auto check_w = [&](const Tensor& t, const char* name) {
    if (t.rank() != 2 || t.dim(0) != h || t.dim(1) != in)
      throw std::invalid_argument(std::string("lstm: bad shape for ") + name +
                                  ": " + shape_str(t.shape()));
  };
  auto check_u = [&](const Tensor& t, const char* name) {
    if (t.rank() != 2 || t.dim(0) != h || t.dim(1) != h)
      throw std::invalid_argument(std::string("lstm: bad shape for ") + name +
                                  ": " + shape_str(t.shape()));
  };
  auto check_b = [&](const Tensor& t, const char* name) {
    if (t.rank() != 1 || t.dim(0) != h)
      throw std::invalid_argument(std::string("lstm: bad shape for ") + name +
                                  ": " + shape_str(t.shape()));
  };
  check_w(w_i, "W_i"); check_u(u_i, "U_i"); check_b(b_i, "b_i");
  check_w(w_f, "W_f"); check_u(u_f, "U_f"); check_b(b_f, "b_f");
  check_w(w_o, "W_o"); check_u(u_o, "U_o"); check_b(b_o, "b_o");
  check_w(w_c, "W_c"); check_u(u_c, "U_c"); check_b(b_c, "b_c");
}

LstmState lstm_initial_state(int hidden_dim) {
  return {Tensor::zeros({hidden_dim}), Tensor::zeros({hidden_dim})};
}

LstmState lstm_step(const Tensor& x, const LstmState& prev,
                    const LstmCellParams& p) {
  if (x.rank() != 1 || x.dim(0) != p.input_dim()) {
    throw std::invalid_argument("lstm_step: input " + shape_str(x.shape()) +
                                " does not match cell input dim " +
                                std::to_string(p.input_dim()));
  }
  if (prev.h.dim(0) != p.hidden_dim() || prev.c.dim(0) != p.hidden_dim()) {
    throw std::invalid_argument("lstm_step: state dim " +
                                shape_str(prev.h.shape()) +
                                " does not match cell hidden dim " +
                                std::to_string(p.hidden_dim()));
  }
  auto gate = [&](const Tensor& w, const Tensor& u, const Tensor& b) {
    return add(add(matvec(w, x), matvec(u, prev.h)), b);
  };
  const Tensor i = sigmoid(gate(p.w_i, p.u_i, p.b_i));
  const Tensor f = sigmoid(gate(p.w_f, p.u_f, p.b_f));
  const Tensor o = sigmoid(gate(p.w_o, p.u_o, p.b_o));
  const Tensor g = tanh(gate(p.w_c, p.u_c, p.b_c));
  const Tensor c = add(mul(f, prev.c), mul(i, g));
  const Tensor h = mul(o, tanh(c));
  return {h, c};
}

std::vector<LstmState> run_lstm(const std::vector<Tensor>& xs,
                                const LstmCellParams& p) {
  std::vector<LstmState> states;
  states.reserve(xs.size());
  LstmState prev = lstm_initial_state(p.hidden_dim());
  for (const Tensor& x : xs) {
    prev = lstm_step(x, prev, p);
    states.push_back(prev);
  }
  return states;
}

std::vector<LstmState> run_lstm_reversed(const std::vector<Tensor>& xs,
                                         const LstmCellParams& p) {
  std::vector<LstmState> states(xs.size());
  LstmState prev = lstm_initial_state(p.hidden_dim());
  for (std::size_t i = xs.size(); i-- > 0;) {
    prev = lstm_step(xs[i], prev, p);
    states[i] = prev;
  }
  return states;
}

}  // namespace subpair
