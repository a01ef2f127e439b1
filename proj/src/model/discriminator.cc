// msvoc/model/discriminator.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/model/discriminator.h"

#include <stdexcept>
#include <string>

namespace msvoc {
namespace model {

namespace {
constexpr double kLeakySlope = 0.2;
}

const std::vector<int>& UncondDiscriminator::dilations() {
  static const std::vector<int> d{1, 1, 2, 3, 4, 5, 6, 7, 8, 1};
  return d;
}

UncondDiscriminator::UncondDiscriminator(Rng& rng) {
  const auto& dils = dilations();
  for (int i = 0; i < kLayers; ++i) {
    const int cin = (i == 0) ? 1 : kChannels;
    const int cout = (i == kLayers - 1) ? 1 : kChannels;
    layers_.emplace_back(store_, "d.layer" + std::to_string(i), cin, cout,
                         kKernel, dils[i], rng);
  }
}

ag::Var UncondDiscriminator::forward(const ag::Var& wave) const {
  if (wave->value.rows() != 1)
    throw std::invalid_argument("UncondDiscriminator: expected [1 x T]");
  if (wave->value.cols() < kReceptiveField)
    throw std::invalid_argument(
        "UncondDiscriminator: input shorter than the receptive field");
  ag::Var x = wave;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    x = layers_[i].same(x);
    if (i + 1 < layers_.size()) x = ag::leaky_relu(x, kLeakySlope);
  }
  return x;
}

CondDiscriminator::CondDiscriminator(Rng& rng)
    : pool_strides_{8, 8, 2, 2} {
  const int channels[5] = {1, 64, 128, 256, kEmbeddingDim};
  for (int i = 0; i < 4; ++i)
    convs_.emplace_back(store_, "ds.conv" + std::to_string(i), channels[i],
                        channels[i + 1], 3, 1, rng);
  lstm_ = LstmLayer(store_, "ds.lstm", kEmbeddingDim, kEmbeddingDim, rng);
  head_ = LinearLayer(store_, "ds.head", kEmbeddingDim, 1, rng);
}

ag::Var CondDiscriminator::forward(const ag::Var& wave,
                                   const ag::Var& embedding) const {
  if (wave->value.rows() != 1)
    throw std::invalid_argument("CondDiscriminator: expected [1 x T]");
  if (embedding->value.rows() != kEmbeddingDim ||
      embedding->value.cols() != 1)
    throw std::invalid_argument(
        "CondDiscriminator: embedding must be [256 x 1]");
  ag::Var x = wave;
  const Eigen::Index rem = x->value.cols() % kDownsampleFactor;
  if (x->value.cols() < kDownsampleFactor || rem != 0)
    x = ag::pad_cols(x, 0,
                     x->value.cols() < kDownsampleFactor
                         ? kDownsampleFactor - x->value.cols()
                         : kDownsampleFactor - rem);
  for (int i = 0; i < 4; ++i) {
    x = ag::avg_pool1d(x, 4, pool_strides_[i]);
    x = ag::leaky_relu(convs_[i].same(x), kLeakySlope);
  }
  ag::Var states = lstm_.forward(x);  // [256 x T/256]
  ag::Var last = ag::cols(states, states->value.cols() - 1, 1);
  return ag::relu_(head_.apply(ag::add(last, embedding)));
}

}  // namespace model
}  // namespace msvoc
