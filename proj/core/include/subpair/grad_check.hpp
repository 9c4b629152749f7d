#pragma once

#include <functional>
#include <vector>

#include "subpair/parameter.hpp"

namespace subpair {

// Central-difference gradient verification. `loss_fn` must rebuild the
// forward pass from the current parameter values and return a scalar;
// it is evaluated twice at the base point and must agree bit-for-bit
// (otherwise the function is non-deterministic and checking it is
// meaningless). Returns the max over all parameter coordinates of
//   |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
double grad_check(const std::function<Tensor()>& loss_fn,
                  const std::vector<Parameter*>& params, double eps = 1e-4);

// Convenience: checks every parameter in the store.
double grad_check(const std::function<Tensor()>& loss_fn,
                  ParameterStore& store, double eps = 1e-4);

}  // namespace subpair
