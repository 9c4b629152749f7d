#include <cmath>

#include <doctest.h>

#include "subpair/composition.hpp"
#include "subpair/grad_check.hpp"
#include "subpair/subword.hpp"

using namespace subpair;

namespace {

struct C2wFixture {
  ParameterStore store;
  EmbeddingTable table;
  C2wParams params;

  C2wFixture(int vocab_size, int d_sub, int h_char, int d_word,
             std::uint64_t seed) {
    Rng rng(seed);
    Vocab vocab;
    for (int i = 0; i < vocab_size; ++i) vocab.add("s" + std::to_string(i));
    table = make_subword_table(store, "table", vocab, d_sub, rng, true);
    params = C2wParams::create(store, "c2w", d_sub, h_char, d_word, rng);
  }
};

struct CnnFixture {
  ParameterStore store;
  EmbeddingTable table;
  CharCnnParams params;

  CnnFixture(int vocab_size, int d_sub, int d_word, std::uint64_t seed) {
    Rng rng(seed);
    Vocab vocab;
    for (int i = 0; i < vocab_size; ++i) vocab.add("s" + std::to_string(i));
    table = make_subword_table(store, "table", vocab, d_sub, rng, true);
    params = CharCnnParams::create(store, "cnn", d_sub, d_word, rng);
  }
};

void zero_all(ParameterStore& store) {
  for (Parameter& p : store.params())
    for (double& v : p.tensor.mutable_values()) v = 0.0;
}

}  // namespace

TEST_CASE("c2w with zero weights returns the bias") {
  C2wFixture fx(6, 3, 4, 5, 1);
  zero_all(fx.store);
  std::vector<double>& bias = fx.params.bias.mutable_values();
  for (int i = 0; i < 5; ++i) bias[static_cast<std::size_t>(i)] = 0.1 * (i + 1);
  const Tensor w = compose_c2w({2, 3, 4}, fx.table, fx.params);
  for (int i = 0; i < 5; ++i)
    CHECK(w.values()[static_cast<std::size_t>(i)] == bias[static_cast<std::size_t>(i)]);
}

TEST_CASE("c2w handles length-1 sequences with the right shape") {
  C2wFixture fx(6, 3, 4, 5, 2);
  const Tensor w = compose_c2w({2}, fx.table, fx.params);
  CHECK(w.shape() == Shape{5});
}

TEST_CASE("c2w gradients wrt the table match finite differences") {
  C2wFixture fx(6, 3, 4, 5, 3);
  std::vector<Parameter*> params;
  for (Parameter& p : fx.store.params()) params.push_back(&p);
  const double err = grad_check(
      [&] { return sum(compose_c2w({2, 5, 3, 4}, fx.table, fx.params)); },
      params);
  CHECK(err < 1e-4);
}

TEST_CASE("filter plan sums to the word dim with the documented split") {
  const auto plan = CharCnnParams::default_filter_plan(200);
  REQUIRE(plan.size() == 6);
  CHECK(plan[0] == std::pair<int, int>{1, 25});
  CHECK(plan[1] == std::pair<int, int>{2, 50});
  CHECK(plan[2] == std::pair<int, int>{3, 75});
  CHECK(plan[3] == std::pair<int, int>{4, 25});
  CHECK(plan[4] == std::pair<int, int>{5, 15});
  CHECK(plan[5] == std::pair<int, int>{6, 10});
  for (int d : {8, 16, 32, 50, 300}) {
    int total = 0;
    for (const auto& [w, c] : CharCnnParams::default_filter_plan(d)) total += c;
    CHECK(total == d);
  }
}

TEST_CASE("charcnn pads short sequences and keeps the output dim") {
  CnnFixture fx(10, 4, 16, 4);
  for (int len = 1; len <= 40; ++len) {
    std::vector<int> ids;
    for (int i = 0; i < len; ++i) ids.push_back(2 + (i % 8));
    const Tensor w = compose_charcnn(ids, fx.table, fx.params);
    CHECK(w.shape() == Shape{16});
  }
}

TEST_CASE("all-zero embeddings and parameters give a zero vector") {
  CnnFixture fx(10, 4, 16, 5);
  zero_all(fx.store);
  const Tensor w = compose_charcnn({2, 3, 4}, fx.table, fx.params);
  for (double v : w.values()) CHECK(v == 0.0);
}

TEST_CASE("strongly negative transform bias makes the highway carry") {
  CnnFixture fx(10, 4, 12, 6);
  const std::vector<int> ids = {2, 3, 4, 5};
  // sigmoid(-1000) underflows to exactly 0, so this run returns the raw
  // pre-highway features y.
  for (double& v : fx.params.highway_b_t.mutable_values()) v = -1000.0;
  const Tensor y = compose_charcnn(ids, fx.table, fx.params);
  // With bias -10 the gate is ~4.5e-5: carry dominates.
  for (double& v : fx.params.highway_b_t.mutable_values()) v = -10.0;
  const Tensor w = compose_charcnn(ids, fx.table, fx.params);
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(std::fabs(w.values()[i] - y.values()[i]) < 1e-4);
  }
}

TEST_CASE("charcnn gradients match finite differences") {
  CnnFixture fx(8, 3, 8, 7);
  std::vector<Parameter*> params;
  for (Parameter& p : fx.store.params()) params.push_back(&p);
  const double err = grad_check(
      [&] { return sum(compose_charcnn({2, 4, 6, 3}, fx.table, fx.params)); },
      params);
  CHECK(err < 1e-4);
}

TEST_CASE("composition output dim equals the configured word dim") {
  const SubwordScheme scheme = SubwordScheme::for_ngram(2);
  const Vocab vocab = build_subword_vocab({"alphabet", "soup"}, scheme);
  ParameterStore store;
  Rng rng(8);
  const EmbeddingTable table = make_subword_table(store, "t", vocab, 3, rng, true);
  const C2wParams c2w = C2wParams::create(store, "c2w", 3, 4, 9, rng);
  const CharCnnParams cnn = CharCnnParams::create(store, "cnn", 3, 9, rng);
  for (int len = 1; len <= 40; ++len) {
    std::vector<int> ids(static_cast<std::size_t>(len), 2);
    CHECK(compose_c2w(ids, table, c2w).dim(0) == 9);
    CHECK(compose_charcnn(ids, table, cnn).dim(0) == 9);
  }
}
