#include "subpair/composition.hpp"

#include <cmath>
#include <stdexcept>

namespace subpair {

C2wParams C2wParams::create(ParameterStore& store, const std::string& prefix,
                            int subword_dim, int char_hidden, int word_dim,
                            Rng& rng, bool frozen) {
  C2wParams p;
  p.fwd = LstmCellParams::create(store, prefix + ".fwd", subword_dim,
                                 char_hidden, rng, frozen);
  p.bwd = LstmCellParams::create(store, prefix + ".bwd", subword_dim,
                                 char_hidden, rng, frozen);
  p.w_f = store.add(prefix + ".W_f",
                    Tensor::uniform({word_dim, char_hidden}, -0.05, 0.05, rng),
                    frozen);
  p.w_b = store.add(prefix + ".W_b",
                    Tensor::uniform({word_dim, char_hidden}, -0.05, 0.05, rng),
                    frozen);
  p.bias = store.add(prefix + ".b", Tensor::zeros({word_dim}, true), frozen);
  return p;
}

Tensor compose_c2w(const std::vector<int>& ids, const EmbeddingTable& table,
                   const C2wParams& p) {
  if (ids.empty()) {
    throw std::invalid_argument("compose_c2w: empty subword sequence");
  }
  std::vector<Tensor> xs;
  xs.reserve(ids.size());
  for (int id : ids) xs.push_back(table.embed(id));
  const std::vector<LstmState> fwd = run_lstm(xs, p.fwd);
  const std::vector<LstmState> bwd = run_lstm_reversed(xs, p.bwd);
  const Tensor last_fwd = fwd.back().h;
  const Tensor first_bwd = bwd.front().h;
  return add(add(matvec(p.w_f, last_fwd), matvec(p.w_b, first_bwd)), p.bias);
}

std::vector<std::pair<int, int>> CharCnnParams::default_filter_plan(
    int word_dim) {
  static const std::pair<int, double> kFractions[] = {
      {1, 0.125}, {2, 0.25}, {3, 0.375}, {4, 0.125}, {5, 0.075}, {6, 0.05}};
  std::vector<std::pair<int, int>> plan;
  int total = 0;
  for (const auto& [width, frac] : kFractions) {
    const int count = static_cast<int>(std::lround(frac * word_dim));
    plan.emplace_back(width, count);
    total += count;
  }
  for (auto& [width, count] : plan) {
    if (width == 3) count += word_dim - total;
  }
  std::vector<std::pair<int, int>> nonzero;
  for (const auto& wc : plan)
    if (wc.second > 0) nonzero.push_back(wc);
  return nonzero;
}

CharCnnParams CharCnnParams::create(ParameterStore& store,
                                    const std::string& prefix, int subword_dim,
                                    int word_dim, Rng& rng, bool frozen) {
  CharCnnParams p;
  int total = 0;
  for (const auto& [width, count] : default_filter_plan(word_dim)) {
    FilterBank bank;
    bank.width = width;
    bank.kernels = store.add(
        prefix + ".w" + std::to_string(width) + ".kernels",
        Tensor::uniform({count, subword_dim, width}, -0.05, 0.05, rng), frozen);
    bank.biases = store.add(prefix + ".w" + std::to_string(width) + ".biases",
                            Tensor::zeros({count}, true), frozen);
    p.banks.push_back(std::move(bank));
    total += count;
  }
  if (total != word_dim) {
    throw std::logic_error("charcnn filter plan does not sum to word dim");
  }
  p.highway_w_t = store.add(prefix + ".highway.W_t",
                            Tensor::uniform({word_dim, word_dim}, -0.05, 0.05, rng),
                            frozen);
  p.highway_b_t =
      store.add(prefix + ".highway.b_t", Tensor::zeros({word_dim}, true), frozen);
  p.highway_w_h = store.add(prefix + ".highway.W_h",
                            Tensor::uniform({word_dim, word_dim}, -0.05, 0.05, rng),
                            frozen);
  p.highway_b_h =
      store.add(prefix + ".highway.b_h", Tensor::zeros({word_dim}, true), frozen);
  return p;
}

int CharCnnParams::max_width() const {
  int w = 1;
  for (const FilterBank& bank : banks) w = std::max(w, bank.width);
  return w;
}

Tensor compose_charcnn(const std::vector<int>& ids, const EmbeddingTable& table,
                       const CharCnnParams& p) {
  if (ids.empty()) {
    throw std::invalid_argument("compose_charcnn: empty subword sequence");
  }
  // Pad with PAD ids so the widest filter has a valid window.
  std::vector<int> padded = ids;
  const int width = p.max_width();
  while (static_cast<int>(padded.size()) < width) {
    if (padded.size() % 2 == 0) {
      padded.insert(padded.begin(), Vocab::kPadId);
    } else {
      padded.push_back(Vocab::kPadId);
    }
  }
  // lookup_rows gives [k x d']; the conv kernels read [d' x k].
  const Tensor rows = lookup_rows(table.matrix, padded);
  const int k = rows.dim(0);
  const int dp = rows.dim(1);
  std::vector<double> transposed(static_cast<std::size_t>(k) * dp);
  const auto& rv = rows.values();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < dp; ++j)
      transposed[static_cast<std::size_t>(j) * k + i] =
          rv[static_cast<std::size_t>(i) * dp + j];
  Tensor seq = Tensor::make_op({dp, k}, std::move(transposed), {rows});
  seq.set_backprop([k, dp](const std::vector<double>& g,
                           const std::vector<std::vector<double>*>& pg) {
    if (!pg[0]) return;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < dp; ++j)
        (*pg[0])[static_cast<std::size_t>(i) * dp + j] +=
            g[static_cast<std::size_t>(j) * k + i];
  });

  std::vector<Tensor> features;
  features.reserve(p.banks.size());
  for (const CharCnnParams::FilterBank& bank : p.banks) {
    const Tensor fmap = conv1d_bank(seq, bank.kernels, bank.biases);
    features.push_back(max_over_axis(fmap, 1));  // [count]
  }
  const Tensor y = concat(features, 0);  // [word_dim]

  const Tensor gate = sigmoid(affine(p.highway_w_t, y, p.highway_b_t));
  const Tensor cand = tanh(affine(p.highway_w_h, y, p.highway_b_h));
  const Tensor carry = sub(Tensor::full({p.output_dim()}, 1.0), gate);
  return add(mul(gate, cand), mul(carry, y));
}

}  // namespace subpair
