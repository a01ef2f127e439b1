// msvoc/train/optimizer.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/train/optimizer.h"

#include <cmath>
#include <stdexcept>

namespace msvoc {
namespace train {

void RAdam::step(model::ParamStore& store) {
  ++t_;
  const double b1 = cfg_.beta1, b2 = cfg_.beta2;
  const double b1t = std::pow(b1, static_cast<double>(t_));
  const double b2t = std::pow(b2, static_cast<double>(t_));
  const double rho_inf = 2.0 / (1.0 - b2) - 1.0;
  const double rho_t = rho_inf - 2.0 * t_ * b2t / (1.0 - b2t);

  for (auto& [name, p] : store.params()) {
    if (!p->requires_grad || p->grad.size() == 0) continue;
    Eigen::MatrixXd g = p->grad;
    if (cfg_.weight_decay > 0.0) g += cfg_.weight_decay * p->value;

    auto mi = m_.find(name);
    if (mi == m_.end()) {
      m_[name] = Eigen::MatrixXd::Zero(g.rows(), g.cols());
      v_[name] = Eigen::MatrixXd::Zero(g.rows(), g.cols());
      mi = m_.find(name);
    }
    Eigen::MatrixXd& m = mi->second;
    Eigen::MatrixXd& v = v_[name];
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);

    const Eigen::MatrixXd m_hat = m / (1.0 - b1t);
    if (rho_t > 4.0) {
      const double r_t = std::sqrt(((rho_t - 4.0) * (rho_t - 2.0) * rho_inf) /
                                   ((rho_inf - 4.0) * (rho_inf - 2.0) * rho_t));
      const Eigen::MatrixXd v_hat = (v / (1.0 - b2t)).cwiseSqrt();
      p->value -=
          cfg_.lr * r_t * (m_hat.array() / (v_hat.array() + cfg_.eps)).matrix();
    } else {
      p->value -= cfg_.lr * m_hat;  // un-adapted momentum warmup
    }
  }
}

std::map<std::string, Eigen::MatrixXd> RAdam::dump_state() const {
  std::map<std::string, Eigen::MatrixXd> out;
  for (const auto& [name, m] : m_) out["m." + name] = m;
  for (const auto& [name, v] : v_) out["v." + name] = v;
  out["t"] = Eigen::MatrixXd::Constant(1, 1, static_cast<double>(t_));
  return out;
}

void RAdam::load_state(const std::map<std::string, Eigen::MatrixXd>& state) {
  m_.clear();
  v_.clear();
  t_ = 0;
  for (const auto& [name, mat] : state) {
    if (name == "t") {
      t_ = static_cast<std::uint64_t>(mat(0, 0));
    } else if (name.rfind("m.", 0) == 0) {
      m_[name.substr(2)] = mat;
    } else if (name.rfind("v.", 0) == 0) {
      v_[name.substr(2)] = mat;
    } else {
      throw std::runtime_error("optimizer state: unknown key " + name);
    }
  }
}

}  // namespace train
}  // namespace msvoc
