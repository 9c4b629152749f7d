#include <cmath>

#include <doctest.h>

#include "subpair/grad_check.hpp"
#include "subpair/lstm.hpp"

using namespace subpair;

namespace {

LstmCellParams zero_cell(ParameterStore& store, int in, int hidden) {
  Rng rng(1);
  LstmCellParams p = LstmCellParams::create(store, "cell", in, hidden, rng);
  for (Parameter& param : store.params()) {
    for (double& v : param.tensor.mutable_values()) v = 0.0;
  }
  return p;
}

}  // namespace

TEST_CASE("zero parameters and zero state give zero outputs") {
  ParameterStore store;
  const LstmCellParams p = zero_cell(store, 3, 4);
  const Tensor x = Tensor::from_values({3}, {0.3, -0.7, 1.2});
  const LstmState out = lstm_step(x, lstm_initial_state(4), p);
  for (double v : out.c.values()) CHECK(v == 0.0);
  for (double v : out.h.values()) CHECK(v == 0.0);
}

TEST_CASE("zero parameters halve the carried cell state") {
  ParameterStore store;
  const LstmCellParams p = zero_cell(store, 3, 4);
  const Tensor x = Tensor::zeros({3});
  LstmState prev = lstm_initial_state(4);
  prev.c = Tensor::from_values({4}, {1.0, -2.0, 0.5, 4.0});
  const LstmState out = lstm_step(x, prev, p);
  for (int i = 0; i < 4; ++i) {
    const double v = prev.c.values()[static_cast<std::size_t>(i)];
    CHECK(out.c.values()[static_cast<std::size_t>(i)] ==
          doctest::Approx(0.5 * v).epsilon(1e-15));
    CHECK(out.h.values()[static_cast<std::size_t>(i)] ==
          doctest::Approx(0.5 * std::tanh(0.5 * v)).epsilon(1e-15));
  }
}

TEST_CASE("lstm gradient wrt input matches finite differences") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ParameterStore store;
    Rng rng(seed);
    const LstmCellParams p =
        LstmCellParams::create(store, "cell", 3, 4, rng);
    Parameter x{"x", Tensor::uniform({3}, -1, 1, rng), false};
    std::vector<Parameter*> params = {&x};
    for (Parameter& sp : store.params()) params.push_back(&sp);
    const double err = grad_check(
        [&] {
          const LstmState out = lstm_step(x.tensor, lstm_initial_state(4), p);
          return sum(out.h);
        },
        params);
    CHECK(err < 1e-4);
  }
}

TEST_CASE("dimension mismatches are rejected") {
  ParameterStore store;
  Rng rng(1);
  const LstmCellParams p = LstmCellParams::create(store, "cell", 3, 4, rng);
  CHECK_THROWS_AS(lstm_step(Tensor::zeros({5}), lstm_initial_state(4), p),
                  std::invalid_argument);
  CHECK_THROWS_AS(lstm_step(Tensor::zeros({3}), lstm_initial_state(2), p),
                  std::invalid_argument);
  p.validate();  // consistent shapes pass
}

TEST_CASE("reversed runner aligns states with positions") {
  ParameterStore store;
  Rng rng(9);
  const LstmCellParams p = LstmCellParams::create(store, "cell", 2, 3, rng);
  std::vector<Tensor> xs;
  for (int i = 0; i < 4; ++i) xs.push_back(Tensor::uniform({2}, -1, 1, rng, false));
  const auto states = run_lstm_reversed(xs, p);
  REQUIRE(states.size() == 4);
  // states[3] is the first step of the right-to-left pass: one plain step.
  const LstmState direct = lstm_step(xs[3], lstm_initial_state(3), p);
  CHECK(states[3].h.values() == direct.h.values());
}
