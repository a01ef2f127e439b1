// msvoc/autograd.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/autograd.h"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace msvoc {
namespace ag {

Var constant(Mat v) {
  auto n = std::make_shared<Node>();
  n->value = std::move(v);
  return n;
}

Var param(Mat v) {
  auto n = std::make_shared<Node>();
  n->value = std::move(v);
  n->requires_grad = true;
  return n;
}

Var make_op(Mat value, std::vector<Var> parents,
            std::function<void(Node&)> backward_fn) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  bool rg = false;
  for (const auto& p : parents)
    if (p && p->requires_grad) rg = true;
  if (rg) {
    n->requires_grad = true;
    n->parents = std::move(parents);
    n->backward_fn = std::move(backward_fn);
  }
  return n;
}

void accumulate(Node& n, const Mat& g) {
  if (n.grad.size() == 0)
    n.grad = Mat::Zero(n.value.rows(), n.value.cols());
  n.grad += g;
}

namespace {

void topo_visit(const Var& v, std::unordered_set<Node*>& seen,
                std::vector<Node*>& order) {
  // Iterative DFS; graphs from long sequences overflow the stack otherwise.
  struct Frame {
    Node* node;
    std::size_t next_parent;
  };
  if (seen.count(v.get())) return;
  std::vector<Frame> stack{{v.get(), 0}};
  seen.insert(v.get());
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next_parent < f.node->parents.size()) {
      Node* p = f.node->parents[f.next_parent++].get();
      if (p && p->requires_grad && !seen.count(p)) {
        seen.insert(p);
        stack.push_back({p, 0});
      }
    } else {
      order.push_back(f.node);
      stack.pop_back();
    }
  }
}

}  // namespace

void backward(const Var& root) {
  if (!root || root->value.size() != 1)
    throw std::invalid_argument("backward: root must be a scalar");
  if (!root->requires_grad) return;
  std::unordered_set<Node*> seen;
  std::vector<Node*> order;  // parents before children
  topo_visit(root, seen, order);
  for (Node* n : order) n->grad.resize(0, 0);
  root->grad = Mat::Ones(1, 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->grad.size() == 0) continue;  // unreachable from root's gradient
    if (n->backward_fn) n->backward_fn(*n);
  }
}

// ---------------------------------------------------------------------------

Var add(const Var& a, const Var& b) {
  return make_op(a->value + b->value, {a, b}, [](Node& n) {
    if (n.parents[0]->requires_grad) accumulate(*n.parents[0], n.grad);
    if (n.parents[1]->requires_grad) accumulate(*n.parents[1], n.grad);
  });
}

Var sub(const Var& a, const Var& b) {
  return make_op(a->value - b->value, {a, b}, [](Node& n) {
    if (n.parents[0]->requires_grad) accumulate(*n.parents[0], n.grad);
    if (n.parents[1]->requires_grad) accumulate(*n.parents[1], -n.grad);
  });
}

Var mul(const Var& a, const Var& b) {
  return make_op(a->value.cwiseProduct(b->value), {a, b}, [](Node& n) {
    if (n.parents[0]->requires_grad)
      accumulate(*n.parents[0], n.grad.cwiseProduct(n.parents[1]->value));
    if (n.parents[1]->requires_grad)
      accumulate(*n.parents[1], n.grad.cwiseProduct(n.parents[0]->value));
  });
}

Var neg(const Var& a) {
  return make_op(-a->value, {a},
                 [](Node& n) { accumulate(*n.parents[0], -n.grad); });
}

Var smul(const Var& a, double s) {
  return make_op(a->value * s, {a},
                 [s](Node& n) { accumulate(*n.parents[0], n.grad * s); });
}

Var sadd(const Var& a, double s) {
  return make_op(a->value.array() + s, {a},
                 [](Node& n) { accumulate(*n.parents[0], n.grad); });
}

Var tanh_(const Var& a) {
  Mat y = a->value.array().tanh();
  return make_op(y, {a}, [y](Node& n) {
    accumulate(*n.parents[0],
               (n.grad.array() * (1.0 - y.array().square())).matrix());
  });
}

Var sigmoid_(const Var& a) {
  Mat y = (1.0 / (1.0 + (-a->value.array()).exp())).matrix();
  return make_op(y, {a}, [y](Node& n) {
    accumulate(*n.parents[0],
               (n.grad.array() * y.array() * (1.0 - y.array())).matrix());
  });
}

Var relu_(const Var& a) {
  Mat y = a->value.cwiseMax(0.0);
  return make_op(y, {a}, [](Node& n) {
    Mat mask = (n.parents[0]->value.array() > 0.0).cast<double>();
    accumulate(*n.parents[0], n.grad.cwiseProduct(mask));
  });
}

Var leaky_relu(const Var& a, double alpha) {
  Mat y = a->value.cwiseMax(a->value * alpha);
  return make_op(y, {a}, [alpha](Node& n) {
    const Mat& x = n.parents[0]->value;
    Mat g = (x.array() > 0.0).select(n.grad, n.grad * alpha);
    accumulate(*n.parents[0], g);
  });
}

Var exp_(const Var& a) {
  Mat y = a->value.array().exp();
  return make_op(y, {a}, [y](Node& n) {
    accumulate(*n.parents[0], n.grad.cwiseProduct(y));
  });
}

Var sqrt_(const Var& a) {
  Mat y = a->value.cwiseMax(0.0).cwiseSqrt();
  return make_op(y, {a}, [y](Node& n) {
    Mat denom = y.cwiseMax(1e-300);
    accumulate(*n.parents[0],
               (n.grad.array() * 0.5 / denom.array()).matrix());
  });
}

Var abs_(const Var& a) {
  return make_op(a->value.cwiseAbs(), {a}, [](Node& n) {
    const auto& x = n.parents[0]->value.array();
    Mat sign = (x > 0.0).cast<double>() - (x < 0.0).cast<double>();
    accumulate(*n.parents[0], n.grad.cwiseProduct(sign));
  });
}

Var log_floor(const Var& a, double eps) {
  Mat clamped = a->value.cwiseMax(eps);
  Mat y = clamped.array().log();
  return make_op(y, {a}, [eps, clamped](Node& n) {
    Mat mask = (n.parents[0]->value.array() > eps).cast<double>();
    accumulate(*n.parents[0],
               (n.grad.array() * mask.array() / clamped.array()).matrix());
  });
}

Var div_by_scalar(const Var& a, const Var& s) {
  if (s->value.size() != 1)
    throw std::invalid_argument("div_by_scalar: divisor must be [1 x 1]");
  const double sv = s->value(0, 0);
  return make_op(a->value / sv, {a, s}, [](Node& n) {
    const double sv = n.parents[1]->value(0, 0);
    if (n.parents[0]->requires_grad)
      accumulate(*n.parents[0], n.grad / sv);
    if (n.parents[1]->requires_grad) {
      Mat g(1, 1);
      g(0, 0) = -(n.grad.cwiseProduct(n.parents[0]->value)).sum() / (sv * sv);
      accumulate(*n.parents[1], g);
    }
  });
}

Var sum(const Var& a) {
  Mat y(1, 1);
  y(0, 0) = a->value.sum();
  return make_op(y, {a}, [](Node& n) {
    accumulate(*n.parents[0],
               Mat::Constant(n.parents[0]->value.rows(),
                             n.parents[0]->value.cols(), n.grad(0, 0)));
  });
}

Var mean(const Var& a) {
  const double inv = 1.0 / static_cast<double>(a->value.size());
  Mat y(1, 1);
  y(0, 0) = a->value.sum() * inv;
  return make_op(y, {a}, [inv](Node& n) {
    accumulate(*n.parents[0],
               Mat::Constant(n.parents[0]->value.rows(),
                             n.parents[0]->value.cols(), n.grad(0, 0) * inv));
  });
}

Var rows(const Var& a, Eigen::Index r0, Eigen::Index n) {
  return make_op(a->value.middleRows(r0, n), {a}, [r0, n](Node& nd) {
    Mat g = Mat::Zero(nd.parents[0]->value.rows(), nd.parents[0]->value.cols());
    g.middleRows(r0, n) = nd.grad;
    accumulate(*nd.parents[0], g);
  });
}

Var cols(const Var& a, Eigen::Index c0, Eigen::Index n) {
  return make_op(a->value.middleCols(c0, n), {a}, [c0, n](Node& nd) {
    Mat g = Mat::Zero(nd.parents[0]->value.rows(), nd.parents[0]->value.cols());
    g.middleCols(c0, n) = nd.grad;
    accumulate(*nd.parents[0], g);
  });
}

Var vcat(const Var& a, const Var& b) {
  Mat y(a->value.rows() + b->value.rows(), a->value.cols());
  y << a->value, b->value;
  return make_op(y, {a, b}, [](Node& n) {
    const Eigen::Index ra = n.parents[0]->value.rows();
    const Eigen::Index rb = n.parents[1]->value.rows();
    if (n.parents[0]->requires_grad)
      accumulate(*n.parents[0], n.grad.topRows(ra));
    if (n.parents[1]->requires_grad)
      accumulate(*n.parents[1], n.grad.bottomRows(rb));
  });
}

Var hcat(const std::vector<Var>& parts) {
  if (parts.empty()) throw std::invalid_argument("hcat: empty");
  Eigen::Index total = 0;
  for (const auto& p : parts) {
    if (p->value.rows() != parts[0]->value.rows())
      throw std::invalid_argument("hcat: row count mismatch");
    total += p->value.cols();
  }
  Mat y(parts[0]->value.rows(), total);
  Eigen::Index off = 0;
  for (const auto& p : parts) {
    y.middleCols(off, p->value.cols()) = p->value;
    off += p->value.cols();
  }
  return make_op(y, parts, [](Node& n) {
    Eigen::Index off = 0;
    for (auto& p : n.parents) {
      const Eigen::Index w = p->value.cols();
      if (p->requires_grad) accumulate(*p, n.grad.middleCols(off, w));
      off += w;
    }
  });
}

Var pad_cols(const Var& a, Eigen::Index left, Eigen::Index right) {
  Mat y = Mat::Zero(a->value.rows(), a->value.cols() + left + right);
  y.middleCols(left, a->value.cols()) = a->value;
  return make_op(y, {a}, [left](Node& n) {
    accumulate(*n.parents[0],
               n.grad.middleCols(left, n.parents[0]->value.cols()));
  });
}

Var matmul(const Var& a, const Var& b) {
  return make_op(a->value * b->value, {a, b}, [](Node& n) {
    if (n.parents[0]->requires_grad)
      accumulate(*n.parents[0], n.grad * n.parents[1]->value.transpose());
    if (n.parents[1]->requires_grad)
      accumulate(*n.parents[1], n.parents[0]->value.transpose() * n.grad);
  });
}

Var add_colvec(const Var& m, const Var& v) {
  Mat y = m->value.colwise() + Eigen::VectorXd(v->value.col(0));
  return make_op(y, {m, v}, [](Node& n) {
    if (n.parents[0]->requires_grad) accumulate(*n.parents[0], n.grad);
    if (n.parents[1]->requires_grad)
      accumulate(*n.parents[1], n.grad.rowwise().sum());
  });
}

// ---------------------------------------------------------------------------
// conv1d

namespace {

// Xc[(ci*k + kk), t] = xpad(ci, t + kk*dil)
Mat im2col(const Mat& x, int k, int dil, int pl, int pr) {
  const Eigen::Index cin = x.rows();
  const Eigen::Index t_in = x.cols();
  const Eigen::Index t_pad = t_in + pl + pr;
  const Eigen::Index t_out = t_pad - static_cast<Eigen::Index>(dil) * (k - 1);
  Mat xc = Mat::Zero(cin * k, t_out);
  for (Eigen::Index ci = 0; ci < cin; ++ci) {
    for (int kk = 0; kk < k; ++kk) {
      // padded index range [kk*dil, kk*dil + t_out) intersected with the
      // real sample range [pl, pl + t_in)
      const Eigen::Index p0 = kk * static_cast<Eigen::Index>(dil);
      Eigen::Index lo = std::max<Eigen::Index>(p0, pl);
      Eigen::Index hi = std::min<Eigen::Index>(p0 + t_out, pl + t_in);
      if (lo >= hi) continue;
      xc.row(ci * k + kk).segment(lo - p0, hi - lo) =
          x.row(ci).segment(lo - pl, hi - lo);
    }
  }
  return xc;
}

void col2im_add(Mat& dx, const Mat& dxc, int k, int dil, int pl) {
  const Eigen::Index cin = dx.rows();
  const Eigen::Index t_in = dx.cols();
  const Eigen::Index t_out = dxc.cols();
  for (Eigen::Index ci = 0; ci < cin; ++ci) {
    for (int kk = 0; kk < k; ++kk) {
      const Eigen::Index p0 = kk * static_cast<Eigen::Index>(dil);
      Eigen::Index lo = std::max<Eigen::Index>(p0, pl);
      Eigen::Index hi = std::min<Eigen::Index>(p0 + t_out, pl + t_in);
      if (lo >= hi) continue;
      dx.row(ci).segment(lo - pl, hi - lo) +=
          dxc.row(ci * k + kk).segment(lo - p0, hi - lo);
    }
  }
}

}  // namespace

Var conv1d(const Var& x, const Var& w, const Var& b, int k, int dilation,
           int pad_left, int pad_right) {
  if (w->value.cols() != x->value.rows() * k)
    throw std::invalid_argument("conv1d: weight/input channel mismatch");
  Mat xc = im2col(x->value, k, dilation, pad_left, pad_right);
  Mat y = w->value * xc;
  if (b) y.colwise() += Eigen::VectorXd(b->value.col(0));
  std::vector<Var> parents = b ? std::vector<Var>{x, w, b}
                               : std::vector<Var>{x, w};
  // im2col is rebuilt in the backward pass instead of captured; holding it
  // for every block of a deep stack dominates memory otherwise.
  return make_op(std::move(y), std::move(parents),
                 [k, dilation, pad_left, pad_right](Node& n) {
                   const Var& x = n.parents[0];
                   const Var& w = n.parents[1];
                   if (n.parents.size() > 2 && n.parents[2]->requires_grad)
                     accumulate(*n.parents[2], n.grad.rowwise().sum());
                   if (w->requires_grad) {
                     Mat xc =
                         im2col(x->value, k, dilation, pad_left, pad_right);
                     accumulate(*w, n.grad * xc.transpose());
                   }
                   if (x->requires_grad) {
                     Mat dxc = w->value.transpose() * n.grad;
                     Mat dx = Mat::Zero(x->value.rows(), x->value.cols());
                     col2im_add(dx, dxc, k, dilation, pad_left);
                     accumulate(*x, dx);
                   }
                 });
}

Var downsample_cols(const Var& a, int factor) {
  const Eigen::Index t_out = a->value.cols() / factor;
  Mat y(a->value.rows(), t_out);
  for (Eigen::Index t = 0; t < t_out; ++t) y.col(t) = a->value.col(t * factor);
  return make_op(y, {a}, [factor](Node& n) {
    Mat g = Mat::Zero(n.parents[0]->value.rows(), n.parents[0]->value.cols());
    for (Eigen::Index t = 0; t < n.grad.cols(); ++t)
      g.col(t * factor) = n.grad.col(t);
    accumulate(*n.parents[0], g);
  });
}

Var upsample_zero_cols(const Var& a, int factor, double gain) {
  Mat y = Mat::Zero(a->value.rows(), a->value.cols() * factor);
  for (Eigen::Index t = 0; t < a->value.cols(); ++t)
    y.col(t * factor) = a->value.col(t) * gain;
  return make_op(y, {a}, [factor, gain](Node& n) {
    Mat g(n.parents[0]->value.rows(), n.parents[0]->value.cols());
    for (Eigen::Index t = 0; t < g.cols(); ++t)
      g.col(t) = n.grad.col(t * factor) * gain;
    accumulate(*n.parents[0], g);
  });
}

Var repeat_cols(const Var& a, int factor) {
  Mat y(a->value.rows(), a->value.cols() * factor);
  for (Eigen::Index t = 0; t < a->value.cols(); ++t)
    for (int r = 0; r < factor; ++r) y.col(t * factor + r) = a->value.col(t);
  return make_op(y, {a}, [factor](Node& n) {
    Mat g = Mat::Zero(n.parents[0]->value.rows(), n.parents[0]->value.cols());
    for (Eigen::Index t = 0; t < g.cols(); ++t)
      for (int r = 0; r < factor; ++r) g.col(t) += n.grad.col(t * factor + r);
    accumulate(*n.parents[0], g);
  });
}

Var avg_pool1d(const Var& a, int kernel, int stride) {
  const Eigen::Index t_in = a->value.cols();
  const Eigen::Index t_out = (t_in + stride - 1) / stride;
  Mat y = Mat::Zero(a->value.rows(), t_out);
  const double inv = 1.0 / kernel;
  for (Eigen::Index t = 0; t < t_out; ++t) {
    for (int kk = 0; kk < kernel; ++kk) {
      const Eigen::Index src = t * stride + kk;
      if (src < t_in) y.col(t) += a->value.col(src) * inv;
    }
  }
  return make_op(y, {a}, [kernel, stride](Node& n) {
    const double inv = 1.0 / kernel;
    Mat g = Mat::Zero(n.parents[0]->value.rows(), n.parents[0]->value.cols());
    for (Eigen::Index t = 0; t < n.grad.cols(); ++t) {
      for (int kk = 0; kk < kernel; ++kk) {
        const Eigen::Index src = t * stride + kk;
        if (src < g.cols()) g.col(src) += n.grad.col(t) * inv;
      }
    }
    accumulate(*n.parents[0], g);
  });
}

}  // namespace ag
}  // namespace msvoc
