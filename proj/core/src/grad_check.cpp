#include "subpair/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subpair {

double grad_check(const std::function<Tensor()>& loss_fn,
                  const std::vector<Parameter*>& params, double eps) {
  const double base = loss_fn().item();
  const double again = loss_fn().item();
  if (base != again) {
    throw std::runtime_error(
        "grad_check: loss function is non-deterministic (two forward passes "
        "disagree)");
  }

  for (Parameter* p : params) p->tensor.zero_grad();
  Tensor loss = loss_fn();
  backward(loss);
  std::vector<std::vector<double>> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) {
    analytic.push_back(p->tensor.has_grad()
                           ? p->tensor.grad()
                           : std::vector<double>(p->tensor.size(), 0.0));
  }

  double worst = 0.0;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    std::vector<double>& w = params[pi]->tensor.mutable_values();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double saved = w[i];
      w[i] = saved + eps;
      const double f_plus = loss_fn().item();
      w[i] = saved - eps;
      const double f_minus = loss_fn().item();
      w[i] = saved;
      const double numeric = (f_plus - f_minus) / (2.0 * eps);
      const double a = analytic[pi][i];
      const double rel =
          std::fabs(a - numeric) /
          std::max({std::fabs(a), std::fabs(numeric), 1e-8});
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

double grad_check(const std::function<Tensor()>& loss_fn, ParameterStore& store,
                  double eps) {
  std::vector<Parameter*> ptrs;
  ptrs.reserve(store.params().size());
  for (Parameter& p : store.params()) ptrs.push_back(&p);
  return grad_check(loss_fn, ptrs, eps);
}

}  // namespace subpair
