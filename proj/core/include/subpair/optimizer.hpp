#pragma once

#include <cstdint>
#include <vector>

#include "subpair/parameter.hpp"

namespace subpair {

struct OptimizerConfig {
  enum class Kind { kSgd, kAdam };
  Kind kind = Kind::kAdam;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Applies one update per step() from the grads stored on the parameters.
// Throws if a trainable parameter has no grad buffer (the trainer is
// expected to zero grads before each backward).
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config) : config_(config) {}

  void step(ParameterStore& store);

  const OptimizerConfig& config() const { return config_; }
  std::int64_t steps_taken() const { return t_; }

 private:
  OptimizerConfig config_;
  std::int64_t t_ = 0;
  std::vector<std::vector<double>> m_;  // first moments, by param index
  std::vector<std::vector<double>> v_;  // second moments
};

}  // namespace subpair
