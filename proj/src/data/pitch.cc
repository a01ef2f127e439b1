// msvoc/data/pitch.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/data/pitch.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msvoc {
namespace data {

PitchTrack extract_f0(const dsp::AudioSignal& signal, double fmin,
                      double fmax, double hop_ms, double clarity) {
  if (signal.sample_rate <= 0)
    throw std::invalid_argument("extract_f0: unknown sample rate");
  if (fmin <= 0.0 || fmax <= fmin)
    throw std::invalid_argument("extract_f0: bad search band");

  const double sr = signal.sample_rate;
  const std::size_t hop = static_cast<std::size_t>(sr * hop_ms / 1000.0);
  const int lag_min = std::max(2, static_cast<int>(sr / fmax));
  const int lag_max = static_cast<int>(sr / fmin);
  // two periods of the lowest searchable pitch per analysis window
  const std::size_t win = static_cast<std::size_t>(2 * lag_max);

  PitchTrack track;
  track.hop_ms = hop_ms;
  if (signal.samples.size() < win) return track;

  for (std::size_t start = 0; start + win <= signal.samples.size();
       start += hop) {
    const double* x = signal.samples.data() + start;
    const std::size_t n = win - static_cast<std::size_t>(lag_max);

    double e0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) e0 += x[i] * x[i];
    if (e0 <= 1e-12) {
      track.f0_hz.push_back(0.0);
      continue;
    }

    // normalized cross-correlation r(tau) over the fixed-length window head
    std::vector<double> r(lag_max + 1, 0.0);
    for (int tau = lag_min - 1; tau <= lag_max; ++tau) {
      double num = 0.0, et = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        num += x[i] * x[i + tau];
        et += x[i + tau] * x[i + tau];
      }
      r[tau] = et > 0.0 ? num / std::sqrt(e0 * et) : 0.0;
    }

    double rmax = r[lag_min];
    for (int tau = lag_min; tau <= lag_max; ++tau) rmax = std::max(rmax, r[tau]);

    // smallest-lag local peak near the global maximum; integer-multiple
    // lags of a periodic frame score equally, and this picks the
    // fundamental rather than a subharmonic
    int best = -1;
    for (int tau = lag_min; tau <= lag_max; ++tau) {
      const bool local_peak = (tau == lag_min || r[tau] >= r[tau - 1]) &&
                              (tau == lag_max || r[tau] >= r[tau + 1]);
      if (local_peak && r[tau] >= 0.98 * rmax) {
        best = tau;
        break;
      }
    }

    if (best < 0 || r[best] < clarity) {
      track.f0_hz.push_back(0.0);
      continue;
    }

    // parabolic refinement around the integer peak
    double lag = best;
    if (best > lag_min && best < lag_max) {
      const double a = r[best - 1], b = r[best], c = r[best + 1];
      const double denom = a - 2.0 * b + c;
      if (std::abs(denom) > 1e-12) {
        const double shift = 0.5 * (a - c) / denom;
        if (std::abs(shift) < 1.0) lag += shift;
      }
    }
    const double f0 = sr / lag;
    track.f0_hz.push_back(std::clamp(f0, fmin, fmax));
  }
  return track;
}

}  // namespace data
}  // namespace msvoc
