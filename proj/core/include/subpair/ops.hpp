#pragma once

#include <vector>

#include "subpair/tensor.hpp"

namespace subpair {

// Primitive tensor ops. Each builds one tape node; gradients flow through
// backward() in tensor.hpp. Elementwise binary ops accept identical shapes
// or a size-1 tensor on either side (tensor-scalar broadcast); anything
// else is a shape error naming both shapes.

Tensor matmul(const Tensor& a, const Tensor& b);  // [m x k] . [k x n]
Tensor matvec(const Tensor& w, const Tensor& x);  // [m x k] . [k]

Tensor add(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, double c);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double c);

Tensor tanh(const Tensor& a);
Tensor sigmoid(const Tensor& a);

// Concatenate along `axis`; all other dims must agree.
Tensor concat(const std::vector<Tensor>& parts, int axis);
// k vectors of dim d -> [k x d].
Tensor stack_rows(const std::vector<Tensor>& rows);
Tensor reshape(const Tensor& a, Shape shape);

Tensor sum(const Tensor& a);                       // -> scalar
Tensor sum_over_axis(const Tensor& a, int axis);
// Gradient goes to the argmax only; ties break to the lowest index.
Tensor max_over_axis(const Tensor& a, int axis);

// Softmax over the last axis (rows for 2-D input). Rows sum to 1.
Tensor softmax(const Tensor& a);
// -log softmax(logits)[target] for 1-D logits. Always >= 0.
Tensor cross_entropy(const Tensor& logits, int target);

Tensor lookup_row(const Tensor& table, int row);
Tensor lookup_rows(const Tensor& table, const std::vector<int>& rows);

// f_j = tanh(<seq[:, j:j+l-1], filter> + bias), valid windows only,
// so the output length is k-l+1. Requires l <= k.
Tensor conv1d(const Tensor& seq, const Tensor& filter, const Tensor& bias);
// Same contract for a bank of c filters sharing one width: [c x (k-l+1)].
Tensor conv1d_bank(const Tensor& seq, const Tensor& kernels,
                   const Tensor& biases);

// Row-wise similarities between a [m x h] and b [n x h]:
// slice 0 cosine, slice 1 euclidean distance, slice 2 dot -> [3 x m x n].
// Zero-norm vectors get cosine 0 and a zero gradient instead of NaN.
Tensor pairwise_similarity(const Tensor& a, const Tensor& b);

// 3x3 same-padded convolution, x [ci x h x w], kernels [co x ci x 3 x 3],
// bias [co] -> [co x h x w]. Linear; apply tanh separately.
Tensor conv2d_3x3(const Tensor& x, const Tensor& kernels, const Tensor& bias);
// 2x2 stride-2 max pool; odd trailing row/col is dropped.
Tensor max_pool2d(const Tensor& x);
// Zero-pad bottom/right when smaller than (out_h, out_w); center-crop
// when larger.
Tensor pad_or_crop_hw(const Tensor& x, int out_h, int out_w);

// matvec(w, x) + b.
Tensor affine(const Tensor& w, const Tensor& x, const Tensor& b);

}  // namespace subpair
