// msvoc/train/optimizer.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_TRAIN_OPTIMIZER_H_
#define MSVOC_TRAIN_OPTIMIZER_H_

#include <cstdint>
#include <map>
#include <string>

#include "msvoc/model/layers.h"

namespace msvoc {
namespace train {

struct OptimizerConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

// Rectified adaptive-moment optimizer: during the early steps where the
// variance estimate is untrustworthy (rectification term rho_t <= 4) the
// update falls back to un-adapted momentum; afterwards the variance-rescaled
// step is multiplied by the rectification factor r_t.
class RAdam {
 public:
  explicit RAdam(const OptimizerConfig& cfg) : cfg_(cfg) {}

  // Applies one update from the accumulated gradients; parameters without a
  // gradient (frozen or unreached) are skipped.
  void step(model::ParamStore& store);

  std::uint64_t steps() const { return t_; }
  const OptimizerConfig& config() const { return cfg_; }

  // Moments keyed by parameter name with "m." / "v." prefixes, plus the
  // step count, so checkpoints can resume bit-identically.
  std::map<std::string, Eigen::MatrixXd> dump_state() const;
  void load_state(const std::map<std::string, Eigen::MatrixXd>& state);

 private:
  OptimizerConfig cfg_;
  std::uint64_t t_ = 0;
  std::map<std::string, Eigen::MatrixXd> m_;
  std::map<std::string, Eigen::MatrixXd> v_;
};

}  // namespace train
}  // namespace msvoc

#endif  // MSVOC_TRAIN_OPTIMIZER_H_
