// msvoc/dsp/pqmf.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_DSP_PQMF_H_
#define MSVOC_DSP_PQMF_H_

#include <Eigen/Dense>
#include <vector>

#include "msvoc/autograd.h"
#include "msvoc/dsp/audio.h"

namespace msvoc {
namespace dsp {

// Near-perfect-reconstruction pseudo-QMF bank: a Kaiser-windowed lowpass
// prototype, cosine-modulated into analysis/synthesis filters with
// alternating-sign phase offsets of pi/4. Immutable after design.
struct PqmfBank {
  int num_bands = 4;
  Eigen::VectorXd prototype;         // even length, even-symmetric
  Eigen::MatrixXd analysis_filters;  // num_bands x taps
  Eigen::MatrixXd synthesis_filters;

  int taps() const { return static_cast<int>(prototype.size()); }
  // Round-trip (analysis + synthesis) delay in samples; each filter
  // contributes the prototype delay (taps - 1) / 2.
  int round_trip_delay() const { return taps() - 1; }
};

// 4 quarter-rate signals, band 0 lowest in frequency. `padding` records how
// many zeros were appended to make the input length divisible by num_bands.
struct SubbandSignals {
  std::vector<std::vector<double>> bands;
  int sample_rate = kDefaultSampleRate;
  int padding = 0;
};

PqmfBank design_pqmf(int num_bands = 4, int taps = 62,
                     double cutoff_ratio = 0.142, double kaiser_beta = 9.0);

SubbandSignals pqmf_analysis(const AudioSignal& signal, const PqmfBank& bank);
AudioSignal pqmf_synthesis(const SubbandSignals& subbands,
                           const PqmfBank& bank);

// Differentiable synthesis: subbands is [num_bands x T/num_bands],
// result is [1 x T].
ag::Var ag_pqmf_synthesis(const ag::Var& subbands, const PqmfBank& bank);

}  // namespace dsp
}  // namespace msvoc

#endif  // MSVOC_DSP_PQMF_H_
