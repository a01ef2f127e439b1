// msvoc/data/pitch.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_DATA_PITCH_H_
#define MSVOC_DATA_PITCH_H_

#include <vector>

#include "msvoc/dsp/audio.h"

namespace msvoc {
namespace data {

// Per-frame fundamental frequency; 0 marks an unvoiced frame. Voiced values
// stay within the [fmin, fmax] search band.
struct PitchTrack {
  std::vector<double> f0_hz;
  double hop_ms = 10.0;
};

// Normalized-autocorrelation F0 with parabolic peak interpolation. A frame
// is unvoiced when the best normalized peak falls below `clarity` (0.3) or
// the frame carries no energy.
PitchTrack extract_f0(const dsp::AudioSignal& signal, double fmin = 50.0,
                      double fmax = 1100.0, double hop_ms = 10.0,
                      double clarity = 0.3);

}  // namespace data
}  // namespace msvoc

#endif  // MSVOC_DATA_PITCH_H_
