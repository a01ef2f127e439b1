// msvoc/dsp/mel.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/dsp/mel.h"

#include <cmath>
#include <stdexcept>

namespace msvoc {
namespace dsp {

namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

}  // namespace

Eigen::MatrixXd mel_filterbank(const MelParams& p) {
  const int bins = p.fft_size / 2 + 1;
  const double mel_lo = hz_to_mel(p.fmin);
  const double mel_hi = hz_to_mel(p.fmax);
  // num_mels + 2 edge frequencies
  Eigen::VectorXd edges(p.num_mels + 2);
  for (int i = 0; i < p.num_mels + 2; ++i)
    edges(i) =
        mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (p.num_mels + 1));

  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(p.num_mels, bins);
  for (int m = 0; m < p.num_mels; ++m) {
    const double lo = edges(m), mid = edges(m + 1), hi = edges(m + 2);
    for (int b = 0; b < bins; ++b) {
      const double f = static_cast<double>(b) * p.sample_rate / p.fft_size;
      double w = 0.0;
      if (f > lo && f < mid)
        w = (f - lo) / (mid - lo);
      else if (f >= mid && f < hi)
        w = (hi - f) / (hi - mid);
      fb(m, b) = w;
    }
  }
  return fb;
}

MelSpectrogram mel_spectrogram(const AudioSignal& signal, const MelParams& p) {
  if (signal.sample_rate != p.sample_rate)
    throw std::invalid_argument("mel_spectrogram: sample rate mismatch");
  MagnitudeSpectrogram mag = stft_magnitude(signal, p.stft());
  Eigen::MatrixXd fb = mel_filterbank(p);
  MelSpectrogram out;
  out.params = p;
  out.values = (mag.values * fb.transpose())
                   .cwiseMax(p.log_floor)
                   .array()
                   .log()
                   .matrix();
  return out;
}

ag::Var ag_mel_spectrogram(const ag::Var& x, const MelParams& p) {
  ag::Var mag = ag_stft_magnitude(x, p.stft());  // [bins x frames]
  ag::Var fb = ag::constant(mel_filterbank(p));
  return ag::log_floor(ag::matmul(fb, mag), p.log_floor);
}

}  // namespace dsp
}  // namespace msvoc
