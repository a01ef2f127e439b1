// msvoc/dsp/mel.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_DSP_MEL_H_
#define MSVOC_DSP_MEL_H_

#include <Eigen/Dense>

#include "msvoc/autograd.h"
#include "msvoc/dsp/audio.h"
#include "msvoc/dsp/stft.h"

namespace msvoc {
namespace dsp {

struct MelParams {
  int fft_size = 512;
  int hop_size = 128;
  int window_size = 512;
  int sample_rate = 24000;
  int num_mels = 80;
  double fmin = 0.0;
  double fmax = 12000.0;  // sample_rate / 2
  double log_floor = 1e-5;

  StftConfig stft() const { return {fft_size, hop_size, window_size}; }
};

// frames x num_mels, natural-log mel energies floored at log(log_floor).
struct MelSpectrogram {
  Eigen::MatrixXd values;
  MelParams params;

  Eigen::Index frames() const { return values.rows(); }
};

// Triangular filterbank with HTK mel spacing, [num_mels x bins].
Eigen::MatrixXd mel_filterbank(const MelParams& p);

MelSpectrogram mel_spectrogram(const AudioSignal& signal,
                               const MelParams& p = MelParams{});

// Differentiable variant: x is [1 x T], result is [num_mels x frames].
ag::Var ag_mel_spectrogram(const ag::Var& x, const MelParams& p = MelParams{});

}  // namespace dsp
}  // namespace msvoc

#endif  // MSVOC_DSP_MEL_H_
