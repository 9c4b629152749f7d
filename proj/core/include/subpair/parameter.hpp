#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "subpair/tensor.hpp"

namespace subpair {

// Named trainable tensor. Frozen parameters keep requiring gradients (the
// tape does not care) but the optimizer never writes to them.
struct Parameter {
  std::string name;
  Tensor tensor;
  bool frozen = false;
};

// Flat registry of a model's parameters. Registration order is the
// serialization and optimizer-state order, so it must be deterministic.
class ParameterStore {
 public:
  // Returns the stored handle. Throws on duplicate names.
  Tensor add(std::string name, Tensor tensor, bool frozen = false);

  Parameter* find(const std::string& name);
  const Parameter* find(const std::string& name) const;

  std::vector<Parameter>& params() { return params_; }
  const std::vector<Parameter>& params() const { return params_; }

  std::size_t trainable_count() const;  // sum of non-frozen tensor sizes
  std::size_t total_count() const;
  void zero_grads();

 private:
  std::vector<Parameter> params_;
};

}  // namespace subpair
