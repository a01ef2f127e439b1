// msvoc/model/layers.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/model/layers.h"

#include <cmath>
#include <stdexcept>

namespace msvoc {
namespace model {

ag::Var ParamStore::create(const std::string& name, Eigen::Index rows,
                           Eigen::Index cols, double init_scale, Rng& rng) {
  if (params_.count(name))
    throw std::invalid_argument("ParamStore: duplicate parameter " + name);
  ag::Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = init_scale * rng.gaussian();
  return params_[name] = ag::param(std::move(m));
}

ag::Var ParamStore::create_zeros(const std::string& name, Eigen::Index rows,
                                 Eigen::Index cols) {
  if (params_.count(name))
    throw std::invalid_argument("ParamStore: duplicate parameter " + name);
  return params_[name] = ag::param(ag::Mat::Zero(rows, cols));
}

ag::Var ParamStore::at(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end())
    throw std::out_of_range("ParamStore: no parameter named " + name);
  return it->second;
}

void ParamStore::load_values(const std::map<std::string, ag::Mat>& values) {
  for (auto& [name, var] : params_) {
    auto it = values.find(name);
    if (it == values.end())
      throw std::runtime_error("checkpoint is missing parameter " + name);
    if (it->second.rows() != var->value.rows() ||
        it->second.cols() != var->value.cols())
      throw std::runtime_error("checkpoint shape mismatch for " + name);
    var->value = it->second;
  }
}

std::map<std::string, ag::Mat> ParamStore::dump_values() const {
  std::map<std::string, ag::Mat> out;
  for (const auto& [name, var] : params_) out[name] = var->value;
  return out;
}

bool ParamStore::any_nonfinite() const {
  for (const auto& [name, var] : params_)
    if (!var->value.allFinite()) return true;
  return false;
}

void ParamStore::set_trainable(bool trainable) {
  for (auto& [name, var] : params_) var->requires_grad = trainable;
}

Conv1dLayer::Conv1dLayer(ParamStore& store, const std::string& prefix, int cin,
                         int cout, int kernel, int dilation, Rng& rng)
    : kernel(kernel), dilation(dilation) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(cin * kernel));
  w = store.create(prefix + ".w", cout, cin * kernel, scale, rng);
  b = store.create_zeros(prefix + ".b", cout, 1);
}

ag::Var Conv1dLayer::same(const ag::Var& x) const {
  const int pad = dilation * (kernel - 1) / 2;
  return ag::conv1d(x, w, b, kernel, dilation, pad, pad);
}

LinearLayer::LinearLayer(ParamStore& store, const std::string& prefix, int in,
                         int out, Rng& rng) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(in));
  w = store.create(prefix + ".w", out, in, scale, rng);
  b = store.create_zeros(prefix + ".b", out, 1);
}

ag::Var LinearLayer::apply(const ag::Var& x) const {
  return ag::add_colvec(ag::matmul(w, x), b);
}

LstmLayer::LstmLayer(ParamStore& store, const std::string& prefix, int in,
                     int hidden, Rng& rng)
    : hidden(hidden) {
  const double sx = 1.0 / std::sqrt(static_cast<double>(in));
  const double sh = 1.0 / std::sqrt(static_cast<double>(hidden));
  wx = store.create(prefix + ".wx", 4 * hidden, in, sx, rng);
  wh = store.create(prefix + ".wh", 4 * hidden, hidden, sh, rng);
  b = store.create_zeros(prefix + ".b", 4 * hidden, 1);
}

ag::Var LstmLayer::forward(const ag::Var& x) const {
  const Eigen::Index t_len = x->value.cols();
  if (t_len == 0) throw std::invalid_argument("LstmLayer: empty sequence");
  ag::Var h = ag::constant(ag::Mat::Zero(hidden, 1));
  ag::Var c = ag::constant(ag::Mat::Zero(hidden, 1));
  std::vector<ag::Var> hs;
  hs.reserve(t_len);
  for (Eigen::Index t = 0; t < t_len; ++t) {
    ag::Var xt = ag::cols(x, t, 1);
    ag::Var pre =
        ag::add(ag::add(ag::matmul(wx, xt), ag::matmul(wh, h)), b);
    ag::Var i = ag::sigmoid_(ag::rows(pre, 0, hidden));
    ag::Var f = ag::sigmoid_(ag::rows(pre, hidden, hidden));
    ag::Var g = ag::tanh_(ag::rows(pre, 2 * hidden, hidden));
    ag::Var o = ag::sigmoid_(ag::rows(pre, 3 * hidden, hidden));
    c = ag::add(ag::mul(f, c), ag::mul(i, g));
    h = ag::mul(o, ag::tanh_(c));
    hs.push_back(h);
  }
  return ag::hcat(hs);
}

}  // namespace model
}  // namespace msvoc
