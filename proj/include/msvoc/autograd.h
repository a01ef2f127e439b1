// msvoc/autograd.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_AUTOGRAD_H_
#define MSVOC_AUTOGRAD_H_

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

namespace msvoc {
namespace ag {

// Reverse-mode autodiff over dense matrices. Every value in the graph is a
// 2-D matrix: column vectors are [n x 1], scalars are [1 x 1], sequences are
// [channels x time]. Nodes whose inputs carry no gradient are folded into
// constants, so inference builds no tape.

using Mat = Eigen::MatrixXd;

struct Node {
  Mat value;
  Mat grad;  // empty until backward() reaches this node
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward_fn;
};

using Var = std::shared_ptr<Node>;

Var constant(Mat v);
Var param(Mat v);  // trainable leaf

// Generic op constructor; drops the tape when no parent needs gradients.
Var make_op(Mat value, std::vector<Var> parents,
            std::function<void(Node&)> backward_fn);

// Adds g into n.grad, allocating zeros on first touch.
void accumulate(Node& n, const Mat& g);

// Backpropagate from a scalar root. Clears stale gradients of every
// reachable node first, so repeated calls do not accumulate across steps.
void backward(const Var& root);

// ---- elementwise / scalar ----
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var neg(const Var& a);
Var smul(const Var& a, double s);
Var sadd(const Var& a, double s);
Var tanh_(const Var& a);
Var sigmoid_(const Var& a);
Var relu_(const Var& a);
Var leaky_relu(const Var& a, double alpha);
Var exp_(const Var& a);
Var sqrt_(const Var& a);
Var abs_(const Var& a);
// log(max(a, eps)); zero gradient where the floor is active.
Var log_floor(const Var& a, double eps);
// a / s where s is a [1 x 1] scalar node.
Var div_by_scalar(const Var& a, const Var& s);

// ---- reductions ----
Var sum(const Var& a);
Var mean(const Var& a);

// ---- shape ----
Var rows(const Var& a, Eigen::Index r0, Eigen::Index n);
Var cols(const Var& a, Eigen::Index c0, Eigen::Index n);
Var vcat(const Var& a, const Var& b);
Var hcat(const std::vector<Var>& parts);
Var pad_cols(const Var& a, Eigen::Index left, Eigen::Index right);

// ---- linear algebra ----
Var matmul(const Var& a, const Var& b);
// Broadcast-add a column vector v [R x 1] to every column of m [R x C].
Var add_colvec(const Var& m, const Var& v);

// ---- sequence ops (matrices are [channels x time]) ----

// 1-D convolution via im2col. x: [Cin x T], w: [Cout x Cin*k],
// b: [Cout x 1] or null Var. Output time length is
// T + pad_left + pad_right - dilation*(k-1).
Var conv1d(const Var& x, const Var& w, const Var& b, int k, int dilation,
           int pad_left, int pad_right);

Var downsample_cols(const Var& a, int factor);
// Zero-insertion upsampling, each sample scaled by gain.
Var upsample_zero_cols(const Var& a, int factor, double gain);
// Nearest-frame repetition.
Var repeat_cols(const Var& a, int factor);
// Strided average pooling with implicit zero padding on the right;
// output length ceil(T / stride).
Var avg_pool1d(const Var& a, int kernel, int stride);

}  // namespace ag
}  // namespace msvoc

#endif  // MSVOC_AUTOGRAD_H_
