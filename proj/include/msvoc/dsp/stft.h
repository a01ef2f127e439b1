// msvoc/dsp/stft.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_DSP_STFT_H_
#define MSVOC_DSP_STFT_H_

#include <Eigen/Dense>

#include "msvoc/autograd.h"
#include "msvoc/dsp/audio.h"

namespace msvoc {
namespace dsp {

struct StftConfig {
  int fft_size;
  int hop_size;
  int window_size;
};

// frames x bins, bins == fft_size/2 + 1. Center-padded (reflect) framing,
// frame count = floor(len / hop) + 1, Hann window zero-padded to fft_size.
struct MagnitudeSpectrogram {
  Eigen::MatrixXd values;
  StftConfig config;
};

// Windowed DFT as a pair of dense [bins x window] matrices. Magnitude is
// then two matmuls plus a pointwise modulus, which is what lets the same
// transform run inside the training graph with an exact adjoint.
struct StftBasis {
  StftConfig config;
  Eigen::MatrixXd cos_basis;  // window already folded in
  Eigen::MatrixXd sin_basis;
};

const StftBasis& stft_basis(const StftConfig& cfg);

MagnitudeSpectrogram stft_magnitude(const AudioSignal& signal,
                                    const StftConfig& cfg);

// Differentiable variant: x is [1 x T], result is [bins x frames].
ag::Var ag_stft_magnitude(const ag::Var& x, const StftConfig& cfg);

}  // namespace dsp
}  // namespace msvoc

#endif  // MSVOC_DSP_STFT_H_
