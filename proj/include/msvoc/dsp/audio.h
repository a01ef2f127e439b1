// msvoc/dsp/audio.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_DSP_AUDIO_H_
#define MSVOC_DSP_AUDIO_H_

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace msvoc {
namespace dsp {

constexpr int kDefaultSampleRate = 24000;

// Mono waveform. Samples nominally in [-1, 1]; finiteness is checked where
// an operation's contract requires it rather than on every construction.
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;

  std::size_t size() const { return samples.size(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

void check_finite(const AudioSignal& sig);

}  // namespace dsp
}  // namespace msvoc

#endif  // MSVOC_DSP_AUDIO_H_
