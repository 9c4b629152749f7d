#include "subpair/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace subpair {

namespace {

using detail::Node;

[[noreturn]] void shape_error(const std::string& op, const Shape& a,
                              const Shape& b) {
  throw std::invalid_argument(op + ": incompatible shapes " + shape_str(a) +
                              " and " + shape_str(b));
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
    shape_error("matmul", a.shape(), b.shape());
  }
  const int m = a.dim(0), k = a.dim(1), n = b.dim(1);
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> out(static_cast<std::size_t>(m) * n, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int t = 0; t < k; ++t) {
      const double ait = av[static_cast<std::size_t>(i) * k + t];
      if (ait == 0.0) continue;
      const std::size_t brow = static_cast<std::size_t>(t) * n;
      const std::size_t orow = static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) out[orow + j] += ait * bv[brow + j];
    }
  }
  Tensor c = Tensor::make_op({m, n}, std::move(out), {a, b});
  const Node* an = a.node();
  const Node* bn = b.node();
  c.set_backprop([an, bn, m, k, n](const std::vector<double>& g,
                                   const std::vector<std::vector<double>*>& pg) {
    if (pg[0]) {  // dA = g . B^T
      std::vector<double>& da = *pg[0];
      for (int i = 0; i < m; ++i)
        for (int t = 0; t < k; ++t) {
          double acc = 0.0;
          for (int j = 0; j < n; ++j)
            acc += g[static_cast<std::size_t>(i) * n + j] *
                   bn->values[static_cast<std::size_t>(t) * n + j];
          da[static_cast<std::size_t>(i) * k + t] += acc;
        }
    }
    if (pg[1]) {  // dB = A^T . g
      std::vector<double>& db = *pg[1];
      for (int t = 0; t < k; ++t)
        for (int j = 0; j < n; ++j) {
          double acc = 0.0;
          for (int i = 0; i < m; ++i)
            acc += an->values[static_cast<std::size_t>(i) * k + t] *
                   g[static_cast<std::size_t>(i) * n + j];
          db[static_cast<std::size_t>(t) * n + j] += acc;
        }
    }
  });
  return c;
}

Tensor matvec(const Tensor& w, const Tensor& x) {
  if (w.rank() != 2 || x.rank() != 1 || w.dim(1) != x.dim(0)) {
    shape_error("matvec", w.shape(), x.shape());
  }
  const int m = w.dim(0), k = w.dim(1);
  const auto& wv = w.values();
  const auto& xv = x.values();
  std::vector<double> out(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    const std::size_t row = static_cast<std::size_t>(i) * k;
    for (int t = 0; t < k; ++t) acc += wv[row + t] * xv[t];
    out[static_cast<std::size_t>(i)] = acc;
  }
  Tensor c = Tensor::make_op({m}, std::move(out), {w, x});
  const Node* wn = w.node();
  const Node* xn = x.node();
  c.set_backprop([wn, xn, m, k](const std::vector<double>& g,
                                const std::vector<std::vector<double>*>& pg) {
    if (pg[0]) {
      std::vector<double>& dw = *pg[0];
      for (int i = 0; i < m; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * k;
        for (int t = 0; t < k; ++t) dw[row + t] += g[i] * xn->values[t];
      }
    }
    if (pg[1]) {
      std::vector<double>& dx = *pg[1];
      for (int i = 0; i < m; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * k;
        for (int t = 0; t < k; ++t) dx[t] += g[i] * wn->values[row + t];
      }
    }
  });
  return c;
}

namespace {

enum class Broadcast { kNone, kLeftScalar, kRightScalar };

Broadcast classify(const std::string& op, const Tensor& a, const Tensor& b) {
  if (a.shape() == b.shape()) return Broadcast::kNone;
  if (b.size() == 1) return Broadcast::kRightScalar;
  if (a.size() == 1) return Broadcast::kLeftScalar;
  shape_error(op, a.shape(), b.shape());
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  const Broadcast bc = classify("add", a, b);
  const auto& av = a.values();
  const auto& bv = b.values();
  const std::size_t n = std::max(av.size(), bv.size());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = bc == Broadcast::kLeftScalar ? av[0] : av[i];
    const double y = bc == Broadcast::kRightScalar ? bv[0] : bv[i];
    out[i] = x + y;
  }
  Shape shape = bc == Broadcast::kLeftScalar ? b.shape() : a.shape();
  Tensor c = Tensor::make_op(std::move(shape), std::move(out), {a, b});
  c.set_backprop([bc, n](const std::vector<double>& g,
                         const std::vector<std::vector<double>*>& pg) {
    if (pg[0]) {
      if (bc == Broadcast::kLeftScalar) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += g[i];
        (*pg[0])[0] += acc;
      } else {
        for (std::size_t i = 0; i < n; ++i) (*pg[0])[i] += g[i];
      }
    }
    if (pg[1]) {
      if (bc == Broadcast::kRightScalar) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += g[i];
        (*pg[1])[0] += acc;
      } else {
        for (std::size_t i = 0; i < n; ++i) (*pg[1])[i] += g[i];
      }
    }
  });
  return c;
}

Tensor add(const Tensor& a, double cval) {
  std::vector<double> out(a.values());
  for (double& v : out) v += cval;
  Tensor c = Tensor::make_op(a.shape(), std::move(out), {a});
  c.set_backprop([](const std::vector<double>& g,
                    const std::vector<std::vector<double>*>& pg) {
    if (pg[0])
      for (std::size_t i = 0; i < g.size(); ++i) (*pg[0])[i] += g[i];
  });
  return c;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  const Broadcast bc = classify("sub", a, b);
  const auto& av = a.values();
  const auto& bv = b.values();
  const std::size_t n = std::max(av.size(), bv.size());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = bc == Broadcast::kLeftScalar ? av[0] : av[i];
    const double y = bc == Broadcast::kRightScalar ? bv[0] : bv[i];
    out[i] = x - y;
  }
  Shape shape = bc == Broadcast::kLeftScalar ? b.shape() : a.shape();
  Tensor c = Tensor::make_op(std::move(shape), std::move(out), {a, b});
  c.set_backprop([bc, n](const std::vector<double>& g,
                         const std::vector<std::vector<double>*>& pg) {
    if (pg[0]) {
      if (bc == Broadcast::kLeftScalar) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += g[i];
        (*pg[0])[0] += acc;
      } else {
        for (std::size_t i = 0; i < n; ++i) (*pg[0])[i] += g[i];
      }
    }
    if (pg[1]) {
      if (bc == Broadcast::kRightScalar) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += g[i];
        (*pg[1])[0] -= acc;
      } else {
        for (std::size_t i = 0; i < n; ++i) (*pg[1])[i] -= g[i];
      }
    }
  });
  return c;
}

Tensor mul(const Tensor& a, const Tensor& b) {
  const Broadcast bc = classify("mul", a, b);
  const auto& av = a.values();
  const auto& bv = b.values();
  const std::size_t n = std::max(av.size(), bv.size());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = bc == Broadcast::kLeftScalar ? av[0] : av[i];
    const double y = bc == Broadcast::kRightScalar ? bv[0] : bv[i];
    out[i] = x * y;
  }
  Shape shape = bc == Broadcast::kLeftScalar ? b.shape() : a.shape();
  Tensor c = Tensor::make_op(std::move(shape), std::move(out), {a, b});
  const Node* an = a.node();
  const Node* bn = b.node();
  c.set_backprop([an, bn, bc, n](const std::vector<double>& g,
                                 const std::vector<std::vector<double>*>& pg) {
    if (pg[0]) {
      if (bc == Broadcast::kLeftScalar) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += g[i] * bn->values[i];
        (*pg[0])[0] += acc;
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          const double y =
              bc == Broadcast::kRightScalar ? bn->values[0] : bn->values[i];
          (*pg[0])[i] += g[i] * y;
        }
      }
    }
    if (pg[1]) {
      if (bc == Broadcast::kRightScalar) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += g[i] * an->values[i];
        (*pg[1])[0] += acc;
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          const double x =
              bc == Broadcast::kLeftScalar ? an->values[0] : an->values[i];
          (*pg[1])[i] += g[i] * x;
        }
      }
    }
  });
  return c;
}

Tensor scale(const Tensor& a, double cval) {
  std::vector<double> out(a.values());
  for (double& v : out) v *= cval;
  Tensor c = Tensor::make_op(a.shape(), std::move(out), {a});
  c.set_backprop([cval](const std::vector<double>& g,
                        const std::vector<std::vector<double>*>& pg) {
    if (pg[0])
      for (std::size_t i = 0; i < g.size(); ++i) (*pg[0])[i] += cval * g[i];
  });
  return c;
}

Tensor tanh(const Tensor& a) {
  std::vector<double> out(a.values());
  for (double& v : out) v = std::tanh(v);
  Tensor c = Tensor::make_op(a.shape(), std::move(out), {a});
  const Node* cn = c.node();
  c.set_backprop([cn](const std::vector<double>& g,
                      const std::vector<std::vector<double>*>& pg) {
    if (pg[0])
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double y = cn->values[i];
        (*pg[0])[i] += g[i] * (1.0 - y * y);
      }
  });
  return c;
}

Tensor sigmoid(const Tensor& a) {
  std::vector<double> out(a.values());
  for (double& v : out) v = 1.0 / (1.0 + std::exp(-v));
  Tensor c = Tensor::make_op(a.shape(), std::move(out), {a});
  const Node* cn = c.node();
  c.set_backprop([cn](const std::vector<double>& g,
                      const std::vector<std::vector<double>*>& pg) {
    if (pg[0])
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double y = cn->values[i];
        (*pg[0])[i] += g[i] * y * (1.0 - y);
      }
  });
  return c;
}

Tensor concat(const std::vector<Tensor>& parts, int axis) {
  require(!parts.empty(), "concat: no inputs");
  const int rank = parts[0].rank();
  require(axis >= 0 && axis < rank, "concat: axis out of range");
  Shape shape = parts[0].shape();
  int total_axis = 0;
  for (const Tensor& p : parts) {
    if (p.rank() != rank) shape_error("concat", parts[0].shape(), p.shape());
    for (int d = 0; d < rank; ++d) {
      if (d != axis && p.dim(d) != shape[static_cast<std::size_t>(d)]) {
        shape_error("concat", parts[0].shape(), p.shape());
      }
    }
    total_axis += p.dim(axis);
  }
  shape[static_cast<std::size_t>(axis)] = total_axis;

  std::size_t outer = 1, inner = 1;
  for (int d = 0; d < axis; ++d) outer *= static_cast<std::size_t>(parts[0].dim(d));
  for (int d = axis + 1; d < rank; ++d)
    inner *= static_cast<std::size_t>(parts[0].dim(d));

  std::vector<double> out(shape_size(shape));
  std::vector<std::size_t> blocks;  // per-part contiguous block length
  blocks.reserve(parts.size());
  for (const Tensor& p : parts)
    blocks.push_back(static_cast<std::size_t>(p.dim(axis)) * inner);
  const std::size_t out_stride = static_cast<std::size_t>(total_axis) * inner;

  for (std::size_t o = 0; o < outer; ++o) {
    std::size_t off = o * out_stride;
    for (std::size_t pi = 0; pi < parts.size(); ++pi) {
      const auto& pv = parts[pi].values();
      const std::size_t blk = blocks[pi];
      std::copy_n(pv.begin() + static_cast<std::ptrdiff_t>(o * blk), blk,
                  out.begin() + static_cast<std::ptrdiff_t>(off));
      off += blk;
    }
  }

  Tensor c = Tensor::make_op(std::move(shape), std::move(out), parts);
  c.set_backprop([outer, out_stride, blocks](
                     const std::vector<double>& g,
                     const std::vector<std::vector<double>*>& pg) {
    for (std::size_t o = 0; o < outer; ++o) {
      std::size_t off = o * out_stride;
      for (std::size_t pi = 0; pi < blocks.size(); ++pi) {
        const std::size_t blk = blocks[pi];
        if (pg[pi]) {
          std::vector<double>& dst = *pg[pi];
          for (std::size_t i = 0; i < blk; ++i) dst[o * blk + i] += g[off + i];
        }
        off += blk;
      }
    }
  });
  return c;
}

Tensor stack_rows(const std::vector<Tensor>& rows) {
  require(!rows.empty(), "stack_rows: no inputs");
  const int d = rows[0].dim(0);
  for (const Tensor& r : rows) {
    if (r.rank() != 1 || r.dim(0) != d)
      shape_error("stack_rows", rows[0].shape(), r.shape());
  }
  const int k = static_cast<int>(rows.size());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k) * d);
  for (const Tensor& r : rows)
    out.insert(out.end(), r.values().begin(), r.values().end());
  Tensor c = Tensor::make_op({k, d}, std::move(out), rows);
  c.set_backprop([k, d](const std::vector<double>& g,
                        const std::vector<std::vector<double>*>& pg) {
    for (int i = 0; i < k; ++i) {
      if (!pg[static_cast<std::size_t>(i)]) continue;
      std::vector<double>& dst = *pg[static_cast<std::size_t>(i)];
      const std::size_t off = static_cast<std::size_t>(i) * d;
      for (int j = 0; j < d; ++j) dst[static_cast<std::size_t>(j)] += g[off + j];
    }
  });
  return c;
}

Tensor reshape(const Tensor& a, Shape shape) {
  if (shape_size(shape) != a.size())
    shape_error("reshape", a.shape(), shape);
  Tensor c = Tensor::make_op(std::move(shape), a.values(), {a});
  c.set_backprop([](const std::vector<double>& g,
                    const std::vector<std::vector<double>*>& pg) {
    if (pg[0])
      for (std::size_t i = 0; i < g.size(); ++i) (*pg[0])[i] += g[i];
  });
  return c;
}

Tensor sum(const Tensor& a) {
  double acc = 0.0;
  for (double v : a.values()) acc += v;
  Tensor c = Tensor::make_op({1}, {acc}, {a});
  const std::size_t n = a.size();
  c.set_backprop([n](const std::vector<double>& g,
                     const std::vector<std::vector<double>*>& pg) {
    if (pg[0])
      for (std::size_t i = 0; i < n; ++i) (*pg[0])[i] += g[0];
  });
  return c;
}

namespace {

// Decomposes shape around `axis` into outer/len/inner strides.
struct AxisView {
  std::size_t outer, len, inner;
};

AxisView axis_view(const Tensor& a, int axis, const char* op) {
  require(axis >= 0 && axis < a.rank(), std::string(op) + ": axis out of range");
  AxisView v{1, static_cast<std::size_t>(a.dim(axis)), 1};
  for (int d = 0; d < axis; ++d) v.outer *= static_cast<std::size_t>(a.dim(d));
  for (int d = axis + 1; d < a.rank(); ++d)
    v.inner *= static_cast<std::size_t>(a.dim(d));
  return v;
}

Shape drop_axis(const Shape& s, int axis) {
  Shape out;
  for (int d = 0; d < static_cast<int>(s.size()); ++d)
    if (d != axis) out.push_back(s[static_cast<std::size_t>(d)]);
  if (out.empty()) out.push_back(1);
  return out;
}

}  // namespace

Tensor sum_over_axis(const Tensor& a, int axis) {
  const AxisView v = axis_view(a, axis, "sum_over_axis");
  const auto& av = a.values();
  std::vector<double> out(v.outer * v.inner, 0.0);
  for (std::size_t o = 0; o < v.outer; ++o)
    for (std::size_t t = 0; t < v.len; ++t)
      for (std::size_t i = 0; i < v.inner; ++i)
        out[o * v.inner + i] += av[(o * v.len + t) * v.inner + i];
  Tensor c = Tensor::make_op(drop_axis(a.shape(), axis), std::move(out), {a});
  c.set_backprop([v](const std::vector<double>& g,
                     const std::vector<std::vector<double>*>& pg) {
    if (!pg[0]) return;
    std::vector<double>& da = *pg[0];
    for (std::size_t o = 0; o < v.outer; ++o)
      for (std::size_t t = 0; t < v.len; ++t)
        for (std::size_t i = 0; i < v.inner; ++i)
          da[(o * v.len + t) * v.inner + i] += g[o * v.inner + i];
  });
  return c;
}

Tensor max_over_axis(const Tensor& a, int axis) {
  const AxisView v = axis_view(a, axis, "max_over_axis");
  const auto& av = a.values();
  std::vector<double> out(v.outer * v.inner);
  std::vector<std::size_t> argmax(v.outer * v.inner);
  for (std::size_t o = 0; o < v.outer; ++o) {
    for (std::size_t i = 0; i < v.inner; ++i) {
      std::size_t best = (o * v.len) * v.inner + i;
      double best_v = av[best];
      for (std::size_t t = 1; t < v.len; ++t) {
        const std::size_t idx = (o * v.len + t) * v.inner + i;
        if (av[idx] > best_v) {  // strict: ties keep the lowest index
          best_v = av[idx];
          best = idx;
        }
      }
      out[o * v.inner + i] = best_v;
      argmax[o * v.inner + i] = best;
    }
  }
  Tensor c = Tensor::make_op(drop_axis(a.shape(), axis), std::move(out), {a});
  c.set_backprop([argmax](const std::vector<double>& g,
                          const std::vector<std::vector<double>*>& pg) {
    if (!pg[0]) return;
    for (std::size_t i = 0; i < g.size(); ++i) (*pg[0])[argmax[i]] += g[i];
  });
  return c;
}

Tensor softmax(const Tensor& a) {
  const int last = a.rank() - 1;
  const std::size_t cols = static_cast<std::size_t>(a.dim(last));
  const std::size_t rows = a.size() / cols;
  const auto& av = a.values();
  std::vector<double> out(a.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t off = r * cols;
    double mx = av[off];
    for (std::size_t j = 1; j < cols; ++j) mx = std::max(mx, av[off + j]);
    double denom = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      out[off + j] = std::exp(av[off + j] - mx);
      denom += out[off + j];
    }
    for (std::size_t j = 0; j < cols; ++j) out[off + j] /= denom;
  }
  Tensor c = Tensor::make_op(a.shape(), std::move(out), {a});
  const Node* cn = c.node();
  c.set_backprop([cn, rows, cols](const std::vector<double>& g,
                                  const std::vector<std::vector<double>*>& pg) {
    if (!pg[0]) return;
    std::vector<double>& da = *pg[0];
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t off = r * cols;
      double dot = 0.0;
      for (std::size_t j = 0; j < cols; ++j) dot += g[off + j] * cn->values[off + j];
      for (std::size_t j = 0; j < cols; ++j) {
        const double s = cn->values[off + j];
        da[off + j] += s * (g[off + j] - dot);
      }
    }
  });
  return c;
}

Tensor cross_entropy(const Tensor& logits, int target) {
  require(logits.rank() == 1,
          "cross_entropy: logits must be 1-D, got " + shape_str(logits.shape()));
  const int v = logits.dim(0);
  if (target < 0 || target >= v) {
    throw std::invalid_argument("cross_entropy: class " + std::to_string(target) +
                                " out of range for " + std::to_string(v) +
                                " logits");
  }
  const auto& lv = logits.values();
  double mx = lv[0];
  for (int j = 1; j < v; ++j) mx = std::max(mx, lv[static_cast<std::size_t>(j)]);
  double denom = 0.0;
  for (int j = 0; j < v; ++j) denom += std::exp(lv[static_cast<std::size_t>(j)] - mx);
  const double loss = std::log(denom) - (lv[static_cast<std::size_t>(target)] - mx);
  Tensor c = Tensor::make_op({1}, {loss}, {logits});
  const Node* ln = logits.node();
  c.set_backprop([ln, v, target, mx, denom](
                     const std::vector<double>& g,
                     const std::vector<std::vector<double>*>& pg) {
    if (!pg[0]) return;
    std::vector<double>& dl = *pg[0];
    for (int j = 0; j < v; ++j) {
      const double p = std::exp(ln->values[static_cast<std::size_t>(j)] - mx) / denom;
      dl[static_cast<std::size_t>(j)] += g[0] * (p - (j == target ? 1.0 : 0.0));
    }
  });
  return c;
}

Tensor lookup_row(const Tensor& table, int row) {
  require(table.rank() == 2, "lookup_row: table must be 2-D");
  const int v = table.dim(0), d = table.dim(1);
  require(row >= 0 && row < v,
          "lookup_row: row " + std::to_string(row) + " out of range " +
              std::to_string(v));
  const std::size_t off = static_cast<std::size_t>(row) * d;
  std::vector<double> out(table.values().begin() + static_cast<std::ptrdiff_t>(off),
                          table.values().begin() +
                              static_cast<std::ptrdiff_t>(off + d));
  Tensor c = Tensor::make_op({d}, std::move(out), {table});
  c.set_backprop([off, d](const std::vector<double>& g,
                          const std::vector<std::vector<double>*>& pg) {
    if (!pg[0]) return;
    for (int j = 0; j < d; ++j)
      (*pg[0])[off + static_cast<std::size_t>(j)] += g[static_cast<std::size_t>(j)];
  });
  return c;
}

Tensor lookup_rows(const Tensor& table, const std::vector<int>& rows) {
  require(table.rank() == 2, "lookup_rows: table must be 2-D");
  require(!rows.empty(), "lookup_rows: empty id list");
  const int v = table.dim(0), d = table.dim(1);
  std::vector<double> out;
  out.reserve(rows.size() * static_cast<std::size_t>(d));
  for (int r : rows) {
    require(r >= 0 && r < v,
            "lookup_rows: row " + std::to_string(r) + " out of range " +
                std::to_string(v));
    const std::size_t off = static_cast<std::size_t>(r) * d;
    out.insert(out.end(), table.values().begin() + static_cast<std::ptrdiff_t>(off),
               table.values().begin() + static_cast<std::ptrdiff_t>(off + d));
  }
  Tensor c = Tensor::make_op({static_cast<int>(rows.size()), d}, std::move(out),
                             {table});
  c.set_backprop([rows, d](const std::vector<double>& g,
                           const std::vector<std::vector<double>*>& pg) {
    if (!pg[0]) return;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::size_t dst = static_cast<std::size_t>(rows[i]) * d;
      const std::size_t src = i * static_cast<std::size_t>(d);
      for (int j = 0; j < d; ++j)
        (*pg[0])[dst + static_cast<std::size_t>(j)] +=
            g[src + static_cast<std::size_t>(j)];
    }
  });
  return c;
}

namespace {

// Shared forward/backward for single filters and filter banks.
// seq [dp x k], kernels [c x dp x l], biases [c] -> tanh conv [c x (k-l+1)].
Tensor conv_bank_impl(const Tensor& seq, const Tensor& kernels,
                      const Tensor& biases, int c, int dp, int l) {
  require(seq.rank() == 2, "conv1d: sequence must be 2-D, got " +
                               shape_str(seq.shape()));
  require(seq.dim(0) == dp, "conv1d: sequence rows " + shape_str(seq.shape()) +
                                " do not match filter depth " +
                                std::to_string(dp));
  const int k = seq.dim(1);
  if (l > k) {
    throw std::invalid_argument(
        "conv1d: filter width " + std::to_string(l) +
        " exceeds sequence length " + std::to_string(k) +
        "; pad the sequence first");
  }
  const int span = k - l + 1;
  const auto& sv = seq.values();
  const auto& kv = kernels.values();
  const auto& bv = biases.values();
  std::vector<double> out(static_cast<std::size_t>(c) * span);
  for (int f = 0; f < c; ++f) {
    const std::size_t koff = static_cast<std::size_t>(f) * dp * l;
    for (int j = 0; j < span; ++j) {
      double acc = bv[static_cast<std::size_t>(f)];
      for (int r = 0; r < dp; ++r)
        for (int t = 0; t < l; ++t)
          acc += sv[static_cast<std::size_t>(r) * k + j + t] *
                 kv[koff + static_cast<std::size_t>(r) * l + t];
      out[static_cast<std::size_t>(f) * span + j] = std::tanh(acc);
    }
  }
  Tensor result = Tensor::make_op({c, span}, std::move(out),
                                  {seq, kernels, biases});
  const Node* sn = seq.node();
  const Node* kn = kernels.node();
  const Node* rn = result.node();
  result.set_backprop([sn, kn, rn, c, dp, l, k, span](
                          const std::vector<double>& g,
                          const std::vector<std::vector<double>*>& pg) {
    for (int f = 0; f < c; ++f) {
      const std::size_t koff = static_cast<std::size_t>(f) * dp * l;
      for (int j = 0; j < span; ++j) {
        const std::size_t oi = static_cast<std::size_t>(f) * span + j;
        const double y = rn->values[oi];
        const double du = g[oi] * (1.0 - y * y);
        if (du == 0.0) continue;
        if (pg[2]) (*pg[2])[static_cast<std::size_t>(f)] += du;
        for (int r = 0; r < dp; ++r) {
          for (int t = 0; t < l; ++t) {
            const std::size_t si = static_cast<std::size_t>(r) * k + j + t;
            const std::size_t ki = koff + static_cast<std::size_t>(r) * l + t;
            if (pg[0]) (*pg[0])[si] += du * kn->values[ki];
            if (pg[1]) (*pg[1])[ki] += du * sn->values[si];
          }
        }
      }
    }
  });
  return result;
}

}  // namespace

Tensor conv1d(const Tensor& seq, const Tensor& filter, const Tensor& bias) {
  require(filter.rank() == 2, "conv1d: filter must be 2-D, got " +
                                  shape_str(filter.shape()));
  require(bias.size() == 1, "conv1d: bias must be a scalar");
  const int dp = filter.dim(0), l = filter.dim(1);
  const Tensor kernels = reshape(filter, {1, dp, l});
  const Tensor banked = conv_bank_impl(seq, kernels, bias, 1, dp, l);
  return reshape(banked, {banked.dim(1)});
}

Tensor conv1d_bank(const Tensor& seq, const Tensor& kernels,
                   const Tensor& biases) {
  require(kernels.rank() == 3, "conv1d_bank: kernels must be [c x d' x l]");
  const int c = kernels.dim(0), dp = kernels.dim(1), l = kernels.dim(2);
  require(biases.rank() == 1 && biases.dim(0) == c,
          "conv1d_bank: biases must be [c]");
  return conv_bank_impl(seq, kernels, biases, c, dp, l);
}

Tensor pairwise_similarity(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(1)) {
    shape_error("pairwise_similarity", a.shape(), b.shape());
  }
  constexpr double kNormFloor = 1e-12;
  const int m = a.dim(0), n = b.dim(0), h = a.dim(1);
  const auto& av = a.values();
  const auto& bv = b.values();

  std::vector<double> na(static_cast<std::size_t>(m));
  std::vector<double> nb(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int t = 0; t < h; ++t) {
      const double x = av[static_cast<std::size_t>(i) * h + t];
      s += x * x;
    }
    na[static_cast<std::size_t>(i)] = std::sqrt(s);
  }
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int t = 0; t < h; ++t) {
      const double x = bv[static_cast<std::size_t>(j) * h + t];
      s += x * x;
    }
    nb[static_cast<std::size_t>(j)] = std::sqrt(s);
  }

  const std::size_t plane = static_cast<std::size_t>(m) * n;
  std::vector<double> out(3 * plane);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double dot = 0.0, dist2 = 0.0;
      for (int t = 0; t < h; ++t) {
        const double x = av[static_cast<std::size_t>(i) * h + t];
        const double y = bv[static_cast<std::size_t>(j) * h + t];
        dot += x * y;
        const double dxy = x - y;
        dist2 += dxy * dxy;
      }
      const std::size_t cell = static_cast<std::size_t>(i) * n + j;
      const double denom = std::max(na[static_cast<std::size_t>(i)], kNormFloor) *
                           std::max(nb[static_cast<std::size_t>(j)], kNormFloor);
      out[cell] = dot / denom;                    // cosine
      out[plane + cell] = std::sqrt(dist2);       // euclidean
      out[2 * plane + cell] = dot;                // dot product
    }
  }

  Tensor c = Tensor::make_op({3, m, n}, std::move(out), {a, b});
  const Node* an = a.node();
  const Node* bn = b.node();
  const Node* cn = c.node();
  c.set_backprop([an, bn, cn, na, nb, m, n, h, plane](
                     const std::vector<double>& g,
                     const std::vector<std::vector<double>*>& pg) {
    for (int i = 0; i < m; ++i) {
      const double nai = na[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) {
        const std::size_t cell = static_cast<std::size_t>(i) * n + j;
        const double g_cos = g[cell];
        const double g_l2 = g[plane + cell];
        const double g_dot = g[2 * plane + cell];
        if (g_cos == 0.0 && g_l2 == 0.0 && g_dot == 0.0) continue;
        const double nbj = nb[static_cast<std::size_t>(j)];
        const double cos_v = cn->values[cell];
        const double l2_v = cn->values[plane + cell];
        const bool cos_ok = nai > kNormFloor && nbj > kNormFloor;
        const bool l2_ok = l2_v > kNormFloor;
        for (int t = 0; t < h; ++t) {
          const double x = an->values[static_cast<std::size_t>(i) * h + t];
          const double y = bn->values[static_cast<std::size_t>(j) * h + t];
          double dx = g_dot * y;
          double dy = g_dot * x;
          if (cos_ok) {
            dx += g_cos * (y / (nai * nbj) - cos_v * x / (nai * nai));
            dy += g_cos * (x / (nai * nbj) - cos_v * y / (nbj * nbj));
          }
          if (l2_ok) {
            dx += g_l2 * (x - y) / l2_v;
            dy -= g_l2 * (x - y) / l2_v;
          }
          if (pg[0]) (*pg[0])[static_cast<std::size_t>(i) * h + t] += dx;
          if (pg[1]) (*pg[1])[static_cast<std::size_t>(j) * h + t] += dy;
        }
      }
    }
  });
  return c;
}

Tensor conv2d_3x3(const Tensor& x, const Tensor& kernels, const Tensor& bias) {
  require(x.rank() == 3, "conv2d: input must be [c x h x w]");
  require(kernels.rank() == 4 && kernels.dim(2) == 3 && kernels.dim(3) == 3,
          "conv2d: kernels must be [co x ci x 3 x 3]");
  const int ci = x.dim(0), hh = x.dim(1), ww = x.dim(2);
  const int co = kernels.dim(0);
  if (kernels.dim(1) != ci) shape_error("conv2d", x.shape(), kernels.shape());
  require(bias.rank() == 1 && bias.dim(0) == co, "conv2d: bias must be [co]");

  const auto& xv = x.values();
  const auto& kv = kernels.values();
  const auto& bv = bias.values();
  const std::size_t in_plane = static_cast<std::size_t>(hh) * ww;
  std::vector<double> out(static_cast<std::size_t>(co) * in_plane);
  for (int f = 0; f < co; ++f) {
    for (int r = 0; r < hh; ++r) {
      for (int cc = 0; cc < ww; ++cc) {
        double acc = bv[static_cast<std::size_t>(f)];
        for (int ic = 0; ic < ci; ++ic) {
          const std::size_t kbase =
              ((static_cast<std::size_t>(f) * ci + ic) * 3) * 3;
          for (int dr = -1; dr <= 1; ++dr) {
            const int rr = r + dr;
            if (rr < 0 || rr >= hh) continue;
            for (int dc = -1; dc <= 1; ++dc) {
              const int c2 = cc + dc;
              if (c2 < 0 || c2 >= ww) continue;
              acc += xv[static_cast<std::size_t>(ic) * in_plane + rr * ww + c2] *
                     kv[kbase + static_cast<std::size_t>(dr + 1) * 3 + (dc + 1)];
            }
          }
        }
        out[static_cast<std::size_t>(f) * in_plane + r * ww + cc] = acc;
      }
    }
  }
  Tensor c = Tensor::make_op({co, hh, ww}, std::move(out), {x, kernels, bias});
  const Node* xn = x.node();
  const Node* kn = kernels.node();
  c.set_backprop([xn, kn, ci, co, hh, ww, in_plane](
                     const std::vector<double>& g,
                     const std::vector<std::vector<double>*>& pg) {
    for (int f = 0; f < co; ++f) {
      for (int r = 0; r < hh; ++r) {
        for (int cc = 0; cc < ww; ++cc) {
          const double go = g[static_cast<std::size_t>(f) * in_plane + r * ww + cc];
          if (go == 0.0) continue;
          if (pg[2]) (*pg[2])[static_cast<std::size_t>(f)] += go;
          for (int ic = 0; ic < ci; ++ic) {
            const std::size_t kbase =
                ((static_cast<std::size_t>(f) * ci + ic) * 3) * 3;
            for (int dr = -1; dr <= 1; ++dr) {
              const int rr = r + dr;
              if (rr < 0 || rr >= hh) continue;
              for (int dc = -1; dc <= 1; ++dc) {
                const int c2 = cc + dc;
                if (c2 < 0 || c2 >= ww) continue;
                const std::size_t xi =
                    static_cast<std::size_t>(ic) * in_plane + rr * ww + c2;
                const std::size_t ki =
                    kbase + static_cast<std::size_t>(dr + 1) * 3 + (dc + 1);
                if (pg[0]) (*pg[0])[xi] += go * kn->values[ki];
                if (pg[1]) (*pg[1])[ki] += go * xn->values[xi];
              }
            }
          }
        }
      }
    }
  });
  return c;
}

Tensor max_pool2d(const Tensor& x) {
  require(x.rank() == 3, "max_pool2d: input must be [c x h x w]");
  const int c = x.dim(0), hh = x.dim(1), ww = x.dim(2);
  const int oh = hh / 2, ow = ww / 2;
  require(oh >= 1 && ow >= 1, "max_pool2d: input too small to pool");
  const auto& xv = x.values();
  const std::size_t in_plane = static_cast<std::size_t>(hh) * ww;
  const std::size_t out_plane = static_cast<std::size_t>(oh) * ow;
  std::vector<double> out(static_cast<std::size_t>(c) * out_plane);
  std::vector<std::size_t> argmax(out.size());
  for (int ch = 0; ch < c; ++ch) {
    for (int r = 0; r < oh; ++r) {
      for (int cc = 0; cc < ow; ++cc) {
        std::size_t best = static_cast<std::size_t>(ch) * in_plane +
                           static_cast<std::size_t>(2 * r) * ww + 2 * cc;
        double best_v = xv[best];
        for (int dr = 0; dr < 2; ++dr) {
          for (int dc = 0; dc < 2; ++dc) {
            const std::size_t idx = static_cast<std::size_t>(ch) * in_plane +
                                    static_cast<std::size_t>(2 * r + dr) * ww +
                                    2 * cc + dc;
            if (xv[idx] > best_v) {
              best_v = xv[idx];
              best = idx;
            }
          }
        }
        const std::size_t oi =
            static_cast<std::size_t>(ch) * out_plane + r * ow + cc;
        out[oi] = best_v;
        argmax[oi] = best;
      }
    }
  }
  Tensor result = Tensor::make_op({c, oh, ow}, std::move(out), {x});
  result.set_backprop([argmax](const std::vector<double>& g,
                               const std::vector<std::vector<double>*>& pg) {
    if (!pg[0]) return;
    for (std::size_t i = 0; i < g.size(); ++i) (*pg[0])[argmax[i]] += g[i];
  });
  return result;
}

Tensor pad_or_crop_hw(const Tensor& x, int out_h, int out_w) {
  require(x.rank() == 3, "pad_or_crop_hw: input must be [c x h x w]");
  require(out_h >= 1 && out_w >= 1, "pad_or_crop_hw: bad target size");
  const int c = x.dim(0), hh = x.dim(1), ww = x.dim(2);
  // Copy region with source offsets (crop is centered; padding anchors
  // the content at the top-left).
  const int copy_h = std::min(hh, out_h);
  const int copy_w = std::min(ww, out_w);
  const int src_r0 = hh > out_h ? (hh - out_h) / 2 : 0;
  const int src_c0 = ww > out_w ? (ww - out_w) / 2 : 0;
  const auto& xv = x.values();
  const std::size_t in_plane = static_cast<std::size_t>(hh) * ww;
  const std::size_t out_plane = static_cast<std::size_t>(out_h) * out_w;
  std::vector<double> out(static_cast<std::size_t>(c) * out_plane, 0.0);
  for (int ch = 0; ch < c; ++ch)
    for (int r = 0; r < copy_h; ++r)
      for (int cc = 0; cc < copy_w; ++cc)
        out[static_cast<std::size_t>(ch) * out_plane + r * out_w + cc] =
            xv[static_cast<std::size_t>(ch) * in_plane +
               static_cast<std::size_t>(src_r0 + r) * ww + src_c0 + cc];
  Tensor result = Tensor::make_op({c, out_h, out_w}, std::move(out), {x});
  result.set_backprop([c, hh, ww, out_h, out_w, copy_h, copy_w, src_r0, src_c0,
                       in_plane, out_plane](
                          const std::vector<double>& g,
                          const std::vector<std::vector<double>*>& pg) {
    if (!pg[0]) return;
    for (int ch = 0; ch < c; ++ch)
      for (int r = 0; r < copy_h; ++r)
        for (int cc = 0; cc < copy_w; ++cc)
          (*pg[0])[static_cast<std::size_t>(ch) * in_plane +
                   static_cast<std::size_t>(src_r0 + r) * ww + src_c0 + cc] +=
              g[static_cast<std::size_t>(ch) * out_plane + r * out_w + cc];
  });
  return result;
}

Tensor affine(const Tensor& w, const Tensor& x, const Tensor& b) {
  return add(matvec(w, x), b);
}

}  // namespace subpair
