// msvoc/model/generator.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/model/generator.h"

#include <algorithm>
#include <stdexcept>

namespace msvoc {
namespace model {

int SubGeneratorConfig::receptive_field() const {
  int sum = 0;
  for (int d : dilations) sum += d;
  return 1 + (kernel_size - 1) * sum;
}

std::vector<int> dilation_cycle(int cycle, int repeats) {
  std::vector<int> out;
  for (int r = 0; r < repeats; ++r)
    for (int i = 0; i < cycle; ++i) out.push_back(1 << i);
  return out;
}

WaveNetBlock::WaveNetBlock(ParamStore& store, const std::string& prefix,
                           const SubGeneratorConfig& cfg, int dilation,
                           Rng& rng)
    : gate_channels(cfg.gate_channels) {
  if (cfg.gate_channels % 2 != 0)
    throw std::invalid_argument("gate_channels must be even");
  dilated = Conv1dLayer(store, prefix + ".dilated", cfg.residual_channels,
                        cfg.gate_channels, cfg.kernel_size, dilation, rng);
  cond = Conv1dLayer(store, prefix + ".cond", cfg.conditioning_channels,
                     cfg.gate_channels, 1, 1, rng);
  skip_proj = Conv1dLayer(store, prefix + ".skip", cfg.gate_channels / 2,
                          cfg.skip_channels, 1, 1, rng);
  res_proj = Conv1dLayer(store, prefix + ".res", cfg.gate_channels / 2,
                         cfg.residual_channels, 1, 1, rng);
}

WaveNetBlock::Out WaveNetBlock::forward(const ag::Var& x,
                                        const ag::Var& cond_seq) const {
  if (x->value.cols() != cond_seq->value.cols())
    throw std::invalid_argument("WaveNetBlock: input/conditioning length mismatch");
  const int half = gate_channels / 2;
  ag::Var xc = dilated.same(x);
  ag::Var sc = cond.same(cond_seq);
  ag::Var xa = ag::rows(xc, 0, half);
  ag::Var xb = ag::rows(xc, half, half);
  ag::Var sa = ag::rows(sc, 0, half);
  ag::Var sb = ag::rows(sc, half, half);
  ag::Var z = ag::mul(ag::tanh_(ag::add(xa, sa)), ag::sigmoid_(ag::add(xb, sb)));
  return {skip_proj.same(z), ag::add(x, res_proj.same(z))};
}

SubGenerator::SubGenerator(ParamStore& store, const std::string& prefix,
                           SubGeneratorConfig cfg, Rng& rng)
    : cfg_(std::move(cfg)) {
  input_ = Conv1dLayer(store, prefix + ".input", 1, cfg_.residual_channels, 1,
                       1, rng);
  for (int i = 0; i < cfg_.num_blocks(); ++i)
    blocks_.emplace_back(store, prefix + ".block" + std::to_string(i), cfg_,
                         cfg_.dilations[i], rng);
  post1_ = Conv1dLayer(store, prefix + ".post1", cfg_.skip_channels,
                       cfg_.skip_channels, 1, 1, rng);
  post2_ = Conv1dLayer(store, prefix + ".post2", cfg_.skip_channels,
                       cfg_.out_channels, 1, 1, rng);
}

ag::Var SubGenerator::forward(const ag::Var& noise,
                              const ag::Var& cond) const {
  if (noise->value.rows() != 1)
    throw std::invalid_argument("SubGenerator: noise must be [1 x T]");
  if (noise->value.cols() != cond->value.cols())
    throw std::invalid_argument("SubGenerator: noise/conditioning length mismatch");
  ag::Var x = input_.same(noise);
  ag::Var skip_sum;
  for (const auto& block : blocks_) {
    auto out = block.forward(x, cond);
    x = out.residual;
    skip_sum = skip_sum ? ag::add(skip_sum, out.skip) : out.skip;
  }
  ag::Var h = ag::relu_(skip_sum);
  h = ag::relu_(post1_.same(h));
  return ag::tanh_(post2_.same(h));
}

GeneratorConfig GeneratorConfig::defaults() {
  GeneratorConfig cfg;
  cfg.low.dilations = dilation_cycle(10, 2);  // 20 blocks, up to dilation 512
  cfg.high.dilations = dilation_cycle(5, 2);  // 10 blocks, up to dilation 16
  return cfg;
}

MultiBandGenerator::MultiBandGenerator(const GeneratorConfig& cfg, Rng& rng)
    : cfg_(cfg),
      pqmf_(dsp::design_pqmf(cfg.num_bands, cfg.pqmf_taps, cfg.pqmf_cutoff,
                             cfg.pqmf_beta)) {
  if (cfg_.low.out_channels != 2 || cfg_.high.out_channels != 2)
    throw std::invalid_argument("each sub-generator must emit 2 sub-bands");
  if (cfg_.hop_size % cfg_.num_bands != 0)
    throw std::invalid_argument("hop_size must be divisible by num_bands");
  low_ = std::make_unique<SubGenerator>(store_, "g.low", cfg_.low, rng);
  high_ = std::make_unique<SubGenerator>(store_, "g.high", cfg_.high, rng);
}

ag::Var MultiBandGenerator::forward(const ag::Var& noise,
                                    const ag::Var& mel) const {
  const Eigen::Index frames = mel->value.cols();
  const Eigen::Index sub_len = frames * cfg_.upsample_factor();
  if (noise->value.cols() != sub_len)
    throw std::invalid_argument(
        "generator: noise length must equal frames * hop / num_bands");
  ag::Var cond = ag::repeat_cols(mel, cfg_.upsample_factor());
  ag::Var low_bands = low_->forward(noise, cond);    // bands 0-1
  ag::Var high_bands = high_->forward(noise, cond);  // bands 2-3
  ag::Var subbands = ag::vcat(low_bands, high_bands);
  return dsp::ag_pqmf_synthesis(subbands, pqmf_);
}

dsp::AudioSignal MultiBandGenerator::generate(const dsp::MelSpectrogram& mel,
                                              Rng& noise_rng,
                                              int sample_rate) const {
  const Eigen::Index frames = mel.frames();
  const Eigen::Index sub_len = frames * cfg_.upsample_factor();
  ag::Mat noise(1, sub_len);
  for (Eigen::Index i = 0; i < sub_len; ++i) noise(0, i) = noise_rng.gaussian();
  ag::Var wave =
      forward(ag::constant(noise), ag::constant(mel.values.transpose()));
  dsp::AudioSignal out;
  out.sample_rate = sample_rate;
  out.samples.resize(wave->value.cols());
  for (Eigen::Index i = 0; i < wave->value.cols(); ++i)
    out.samples[i] = std::clamp(wave->value(0, i), -1.0, 1.0);
  return out;
}

FullBandGenerator::FullBandGenerator(SubGeneratorConfig cfg, int hop_size,
                                     Rng& rng)
    : hop_size_(hop_size) {
  cfg.out_channels = 1;
  stack_ = std::make_unique<SubGenerator>(store_, "g.full", cfg, rng);
}

ag::Var FullBandGenerator::forward(const ag::Var& noise,
                                   const ag::Var& mel) const {
  if (noise->value.cols() != mel->value.cols() * hop_size_)
    throw std::invalid_argument(
        "generator: noise length must equal frames * hop");
  ag::Var cond = ag::repeat_cols(mel, hop_size_);
  return stack_->forward(noise, cond);
}

dsp::AudioSignal FullBandGenerator::generate(const dsp::MelSpectrogram& mel,
                                             Rng& noise_rng,
                                             int sample_rate) const {
  const Eigen::Index len = mel.frames() * hop_size_;
  ag::Mat noise(1, len);
  for (Eigen::Index i = 0; i < len; ++i) noise(0, i) = noise_rng.gaussian();
  ag::Var wave =
      forward(ag::constant(noise), ag::constant(mel.values.transpose()));
  dsp::AudioSignal out;
  out.sample_rate = sample_rate;
  out.samples.resize(wave->value.cols());
  for (Eigen::Index i = 0; i < wave->value.cols(); ++i)
    out.samples[i] = std::clamp(wave->value(0, i), -1.0, 1.0);
  return out;
}

}  // namespace model
}  // namespace msvoc
