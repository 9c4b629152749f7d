#pragma once

#include <string>
#include <utility>
#include <vector>

#include "subpair/embedding.hpp"
#include "subpair/lstm.hpp"

namespace subpair {

// Bi-LSTM over the subword sequence; the word vector is a linear blend of
// the final forward state and the position-0 backward state plus a bias.
struct C2wParams {
  LstmCellParams fwd, bwd;
  Tensor w_f, w_b;  // [word_dim x char_hidden]
  Tensor bias;      // [word_dim]

  int word_dim() const { return bias.dim(0); }

  static C2wParams create(ParameterStore& store, const std::string& prefix,
                          int subword_dim, int char_hidden, int word_dim,
                          Rng& rng, bool frozen = false);
};

Tensor compose_c2w(const std::vector<int>& ids, const EmbeddingTable& table,
                   const C2wParams& p);

// Convolution filter bank over the subword sequence, max-over-time per
// filter, then a one-layer highway (tanh transform, sigmoid carry gate).
struct CharCnnParams {
  struct FilterBank {
    int width = 0;
    Tensor kernels;  // [count x subword_dim x width]
    Tensor biases;   // [count]
  };
  std::vector<FilterBank> banks;
  Tensor highway_w_t, highway_b_t;  // transform gate
  Tensor highway_w_h, highway_b_h;  // candidate

  int output_dim() const { return highway_b_t.dim(0); }
  int max_width() const;

  static CharCnnParams create(ParameterStore& store, const std::string& prefix,
                              int subword_dim, int word_dim, Rng& rng,
                              bool frozen = false);

  // Filter widths 1..6 with counts proportional to the word dim
  // (d=200 gives 25/50/75/25/15/10); zero-count widths are dropped and
  // rounding drift lands on the width-3 bucket.
  static std::vector<std::pair<int, int>> default_filter_plan(int word_dim);
};

// Sequences shorter than the widest filter are PAD-extended on both sides
// so every filter sees at least one window.
Tensor compose_charcnn(const std::vector<int>& ids, const EmbeddingTable& table,
                       const CharCnnParams& p);

}  // namespace subpair
