#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "subpair/rng.hpp"

namespace subpair {

class Tensor;

using Shape = std::vector<int>;

std::size_t shape_size(const Shape& shape);
std::string shape_str(const Shape& shape);

namespace detail {

struct Node;

// Receives the gradient w.r.t. this node's output plus one accumulation
// buffer per parent (nullptr when that parent does not need a gradient).
using BackpropFn =
    std::function<void(const std::vector<double>& out_grad,
                       const std::vector<std::vector<double>*>& parent_grads)>;

struct Node {
  Shape shape;
  std::vector<double> values;
  bool requires_grad = false;
  std::vector<double> grad;      // empty until first backward / zero_grad
  std::vector<Tensor> parents;   // keeps the upstream graph alive
  BackpropFn backprop;           // unset for leaves and constants

  ~Node();
};

}  // namespace detail

// Dense row-major tensor of doubles participating in a reverse-mode tape.
// Handles are cheap to copy and share one node. Values are fixed once a
// tensor is created; only the grad buffer mutates (and parameter values,
// via mutable_values, between optimizer steps when no graph is alive).
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  static Tensor from_values(Shape shape, std::vector<double> values,
                            bool requires_grad = false);
  static Tensor uniform(Shape shape, double lo, double hi, Rng& rng,
                        bool requires_grad = true);

  bool valid() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  int rank() const { return static_cast<int>(node_->shape.size()); }
  int dim(int axis) const { return node_->shape[static_cast<std::size_t>(axis)]; }
  std::size_t size() const { return node_->values.size(); }
  bool requires_grad() const { return node_->requires_grad; }

  const std::vector<double>& values() const { return node_->values; }
  // For parameter updates only; never call while a graph referencing this
  // tensor is still going to be used.
  std::vector<double>& mutable_values() { return node_->values; }

  // Value of a scalar (size-1) tensor.
  double item() const;

  bool has_grad() const { return !node_->grad.empty(); }
  const std::vector<double>& grad() const;
  void zero_grad();

  // Graph internals, used by the op library.
  detail::Node* node() const { return node_.get(); }
  static Tensor make_op(Shape shape, std::vector<double> values,
                        std::vector<Tensor> parents);
  void set_backprop(detail::BackpropFn fn) { node_->backprop = std::move(fn); }

 private:
  friend struct detail::Node;
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<detail::Node> node_;
};

// Reverse-mode sweep from a scalar loss. Accumulates into the persistent
// grad buffer of every reachable tensor that requires a gradient; calling
// backward twice without zeroing doubles the grads.
void backward(const Tensor& loss);

}  // namespace subpair
