#include "subpair/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace subpair {

Tensor ParameterStore::add(std::string name, Tensor tensor, bool frozen) {
  for (const Parameter& p : params_) {
    if (p.name == name) {
      throw std::invalid_argument("duplicate parameter name: " + name);
    }
  }
  params_.push_back(Parameter{std::move(name), tensor, frozen});
  return params_.back().tensor;
}

Parameter* ParameterStore::find(const std::string& name) {
  for (Parameter& p : params_)
    if (p.name == name) return &p;
  return nullptr;
}

const Parameter* ParameterStore::find(const std::string& name) const {
  for (const Parameter& p : params_)
    if (p.name == name) return &p;
  return nullptr;
}

std::size_t ParameterStore::trainable_count() const {
  std::size_t n = 0;
  for (const Parameter& p : params_)
    if (!p.frozen) n += p.tensor.size();
  return n;
}

std::size_t ParameterStore::total_count() const {
  std::size_t n = 0;
  for (const Parameter& p : params_) n += p.tensor.size();
  return n;
}

void ParameterStore::zero_grads() {
  for (Parameter& p : params_) p.tensor.zero_grad();
}

void Optimizer::step(ParameterStore& store) {
  auto& params = store.params();
  if (m_.size() != params.size()) {
    m_.resize(params.size());
    v_.resize(params.size());
  }
  ++t_;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = params[pi];
    if (p.frozen) continue;
    if (!p.tensor.has_grad()) {
      throw std::runtime_error("optimizer: parameter '" + p.name +
                               "' has no gradient");
    }
    const std::vector<double>& g = p.tensor.grad();
    std::vector<double>& w = p.tensor.mutable_values();
    switch (config_.kind) {
      case OptimizerConfig::Kind::kSgd:
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= config_.lr * g[i];
        break;
      case OptimizerConfig::Kind::kAdam: {
        std::vector<double>& m = m_[pi];
        std::vector<double>& v = v_[pi];
        if (m.size() != w.size()) {
          m.assign(w.size(), 0.0);
          v.assign(w.size(), 0.0);
        }
        const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
        for (std::size_t i = 0; i < w.size(); ++i) {
          m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
          v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
          const double mhat = m[i] / bc1;
          const double vhat = v[i] / bc2;
          w[i] -= config_.lr * mhat / (std::sqrt(vhat) + config_.eps);
        }
        break;
      }
    }
  }
}

}  // namespace subpair
