// msvoc/model/discriminator.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_MODEL_DISCRIMINATOR_H_
#define MSVOC_MODEL_DISCRIMINATOR_H_

#include <memory>
#include <vector>

#include "msvoc/model/layers.h"

namespace msvoc {
namespace model {

// Ten non-causal dilated 1-D convolutions, stride 1, kernel 5, 64 channels,
// dilations 1,1,2,3,4,5,6,7,8,1 (linear 1..8 on interior layers). Emits raw
// per-timestep scores; the least-squares objective consumes them directly.
class UncondDiscriminator {
 public:
  static constexpr int kLayers = 10;
  static constexpr int kChannels = 64;
  static constexpr int kKernel = 5;
  static constexpr int kReceptiveField = 153;

  explicit UncondDiscriminator(Rng& rng);

  // wave: [1 x T], T >= kReceptiveField -> scores [1 x T]
  ag::Var forward(const ag::Var& wave) const;

  static const std::vector<int>& dilations();

  ParamStore& params() { return store_; }
  const ParamStore& params() const { return store_; }

 private:
  ParamStore store_;
  std::vector<Conv1dLayer> layers_;
};

// 256x downsampling block (strided average pooling, kernel 4, in 4 stages
// of 8x, 8x, 2x, 2x, interleaved with convolutions raising channels to
// 256), an LSTM over the resulting 256-d sequence, then a linear + ReLU
// head on (last hidden state + singer embedding).
class CondDiscriminator {
 public:
  static constexpr int kEmbeddingDim = 256;
  static constexpr int kDownsampleFactor = 256;

  explicit CondDiscriminator(Rng& rng);

  // wave: [1 x T] (zero-padded up to a multiple of 256), embedding:
  // [256 x 1] -> nonnegative scalar score [1 x 1]
  ag::Var forward(const ag::Var& wave, const ag::Var& embedding) const;

  ParamStore& params() { return store_; }
  const ParamStore& params() const { return store_; }

 private:
  ParamStore store_;
  std::vector<int> pool_strides_;
  std::vector<Conv1dLayer> convs_;
  LstmLayer lstm_;
  LinearLayer head_;
};

}  // namespace model
}  // namespace msvoc

#endif  // MSVOC_MODEL_DISCRIMINATOR_H_
