#include "subpair/tensor.hpp"

#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace subpair {

std::size_t shape_size(const Shape& shape) {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << "x";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

namespace detail {

// Iterative teardown: a long op chain must not unwind through recursive
// shared_ptr destructors. Backprop lambdas capture raw Node pointers only,
// so clearing `parents` is the sole release point for upstream nodes.
Node::~Node() {
  std::vector<std::shared_ptr<Node>> pending;
  for (Tensor& p : parents) pending.push_back(std::move(p.node_));
  parents.clear();
  while (!pending.empty()) {
    std::shared_ptr<Node> n = std::move(pending.back());
    pending.pop_back();
    if (n && n.use_count() == 1) {
      for (Tensor& p : n->parents) pending.push_back(std::move(p.node_));
      n->parents.clear();
    }
  }
}

}  // namespace detail

static void validate_shape(const Shape& shape) {
  for (int d : shape) {
    if (d <= 0) {
      throw std::invalid_argument("tensor shape has non-positive dim " +
                                  shape_str(shape));
    }
  }
  if (shape.empty()) {
    throw std::invalid_argument("tensor shape must have at least one dim");
  }
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  validate_shape(shape);
  auto node = std::make_shared<detail::Node>();
  node->values.assign(shape_size(shape), 0.0);
  node->shape = std::move(shape);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  Tensor t = zeros(std::move(shape), requires_grad);
  for (double& v : t.node_->values) v = value;
  return t;
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return full({1}, value, requires_grad);
}

Tensor Tensor::from_values(Shape shape, std::vector<double> values,
                           bool requires_grad) {
  validate_shape(shape);
  if (values.size() != shape_size(shape)) {
    throw std::invalid_argument("value count " + std::to_string(values.size()) +
                                " does not match shape " + shape_str(shape));
  }
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->values = std::move(values);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::uniform(Shape shape, double lo, double hi, Rng& rng,
                       bool requires_grad) {
  Tensor t = zeros(std::move(shape), requires_grad);
  for (double& v : t.node_->values) v = rng.uniform(lo, hi);
  return t;
}

double Tensor::item() const {
  if (size() != 1) {
    throw std::invalid_argument("item() on non-scalar tensor of shape " +
                                shape_str(shape()));
  }
  return node_->values[0];
}

const std::vector<double>& Tensor::grad() const {
  if (node_->grad.empty()) {
    throw std::runtime_error("tensor has no gradient (no backward ran, "
                             "or requires_grad is false)");
  }
  return node_->grad;
}

void Tensor::zero_grad() {
  node_->grad.assign(node_->values.size(), 0.0);
}

Tensor Tensor::make_op(Shape shape, std::vector<double> values,
                       std::vector<Tensor> parents) {
  Tensor t = from_values(std::move(shape), std::move(values), false);
  for (const Tensor& p : parents) {
    if (p.requires_grad()) {
      t.node_->requires_grad = true;
      break;
    }
  }
  t.node_->parents = std::move(parents);
  return t;
}

void backward(const Tensor& loss) {
  if (!loss.valid() || loss.size() != 1) {
    throw std::invalid_argument(
        "backward: loss must be a scalar, got shape " +
        (loss.valid() ? shape_str(loss.shape()) : std::string("<empty>")));
  }
  if (!loss.requires_grad()) return;

  // Post-order DFS over grad-requiring nodes, iterative on purpose.
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> seen;
  struct Frame {
    detail::Node* node;
    std::size_t next;
  };
  std::vector<Frame> stack;
  stack.push_back({loss.node(), 0});
  seen.insert(loss.node());
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < f.node->parents.size()) {
      detail::Node* p = f.node->parents[f.next++].node();
      if (p->requires_grad && !seen.count(p)) {
        seen.insert(p);
        stack.push_back({p, 0});
      }
    } else {
      order.push_back(f.node);
      stack.pop_back();
    }
  }

  std::unordered_map<detail::Node*, std::vector<double>> flow;
  flow[loss.node()] = {1.0};
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node* n = *it;
    auto fit = flow.find(n);
    if (fit == flow.end()) continue;  // no gradient reached this node
    std::vector<double>& g = fit->second;
    if (n->grad.empty()) n->grad.assign(n->values.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) n->grad[i] += g[i];
    if (!n->backprop) continue;
    std::vector<std::vector<double>*> parent_grads(n->parents.size(), nullptr);
    for (std::size_t i = 0; i < n->parents.size(); ++i) {
      detail::Node* p = n->parents[i].node();
      if (!p->requires_grad) continue;
      auto [pit, inserted] = flow.try_emplace(p);
      if (inserted) pit->second.assign(p->values.size(), 0.0);
      parent_grads[i] = &pit->second;
    }
    n->backprop(g, parent_grads);
  }
}

}  // namespace subpair
