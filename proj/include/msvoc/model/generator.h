// msvoc/model/generator.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_MODEL_GENERATOR_H_
#define MSVOC_MODEL_GENERATOR_H_

#include <memory>
#include <string>
#include <vector>

#include "msvoc/dsp/mel.h"
#include "msvoc/dsp/pqmf.h"
#include "msvoc/model/layers.h"

namespace msvoc {
namespace model {

struct SubGeneratorConfig {
  std::vector<int> dilations;  // one entry per WaveNet block
  int residual_channels = 64;
  int skip_channels = 64;
  int gate_channels = 128;  // split in half for the tanh/sigmoid gates
  int conditioning_channels = 80;
  int kernel_size = 3;
  int out_channels = 2;

  int num_blocks() const { return static_cast<int>(dilations.size()); }
  int receptive_field() const;
};

// Dilations [1,2,4,...,2^(cycle-1)] repeated `repeats` times.
std::vector<int> dilation_cycle(int cycle, int repeats);

// Gated dilated-convolution unit: the dilated conv output and the
// conditioning projection are each split in half, combined as
// z = tanh(xa + sa) * sigmoid(xb + sb), and projected to a skip output and
// a residual output added back onto the block input.
struct WaveNetBlock {
  Conv1dLayer dilated;
  Conv1dLayer cond;
  Conv1dLayer skip_proj;
  Conv1dLayer res_proj;
  int gate_channels = 0;

  WaveNetBlock() = default;
  WaveNetBlock(ParamStore& store, const std::string& prefix,
               const SubGeneratorConfig& cfg, int dilation, Rng& rng);

  struct Out {
    ag::Var skip;
    ag::Var residual;
  };
  Out forward(const ag::Var& x, const ag::Var& cond_seq) const;
};

// WaveNet-block stack mapping (noise, upsampled mel) to out_channels
// sub-band signals with a final tanh.
class SubGenerator {
 public:
  SubGenerator(ParamStore& store, const std::string& prefix,
               SubGeneratorConfig cfg, Rng& rng);

  // noise: [1 x T], cond: [conditioning_channels x T] -> [out_channels x T]
  ag::Var forward(const ag::Var& noise, const ag::Var& cond) const;

  const SubGeneratorConfig& config() const { return cfg_; }

 private:
  SubGeneratorConfig cfg_;
  Conv1dLayer input_;
  std::vector<WaveNetBlock> blocks_;
  Conv1dLayer post1_;
  Conv1dLayer post2_;
};

struct GeneratorConfig {
  SubGeneratorConfig low;   // sub-bands 0-1, long receptive field
  SubGeneratorConfig high;  // sub-bands 2-3
  int hop_size = 128;
  int num_bands = 4;
  int pqmf_taps = 62;
  double pqmf_cutoff = 0.142;
  double pqmf_beta = 9.0;

  static GeneratorConfig defaults();
  int upsample_factor() const { return hop_size / num_bands; }
};

// Two frequency-adapted sub-generators plus PQMF merge. Both consume the
// same conditioning, upsampled to the sub-band rate by nearest-frame
// repetition.
class MultiBandGenerator {
 public:
  MultiBandGenerator(const GeneratorConfig& cfg, Rng& rng);

  // noise: [1 x F*hop/4], mel: [80 x F] -> waveform [1 x F*hop]
  ag::Var forward(const ag::Var& noise, const ag::Var& mel) const;

  // Inference convenience: seeded noise, no tape.
  dsp::AudioSignal generate(const dsp::MelSpectrogram& mel, Rng& noise_rng,
                            int sample_rate = dsp::kDefaultSampleRate) const;

  ParamStore& params() { return store_; }
  const ParamStore& params() const { return store_; }
  const GeneratorConfig& config() const { return cfg_; }
  const dsp::PqmfBank& pqmf() const { return pqmf_; }

 private:
  GeneratorConfig cfg_;
  ParamStore store_;
  dsp::PqmfBank pqmf_;
  std::unique_ptr<SubGenerator> low_;
  std::unique_ptr<SubGenerator> high_;
};

// Single-stack full-rate ablation generator; used to benchmark the
// multi-band speedup at a matched block budget.
class FullBandGenerator {
 public:
  FullBandGenerator(SubGeneratorConfig cfg, int hop_size, Rng& rng);

  // noise: [1 x F*hop], mel: [80 x F] -> waveform [1 x F*hop]
  ag::Var forward(const ag::Var& noise, const ag::Var& mel) const;
  dsp::AudioSignal generate(const dsp::MelSpectrogram& mel, Rng& noise_rng,
                            int sample_rate = dsp::kDefaultSampleRate) const;

  ParamStore& params() { return store_; }

 private:
  int hop_size_;
  ParamStore store_;
  std::unique_ptr<SubGenerator> stack_;
};

}  // namespace model
}  // namespace msvoc

#endif  // MSVOC_MODEL_GENERATOR_H_
