// msvoc/dsp/pqmf.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/dsp/pqmf.h"

#include <cmath>
#include <stdexcept>

namespace msvoc {
namespace dsp {

namespace {

// Zeroth-order modified Bessel function, power series.
double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double x2 = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= x2 / (k * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

// Causal convolution y[t] = sum_n f[n] x[t-n], output length == input length.
std::vector<double> causal_conv(const std::vector<double>& x,
                                const Eigen::VectorXd& f) {
  const int taps = static_cast<int>(f.size());
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t t = 0; t < x.size(); ++t) {
    const int nmax = std::min<int>(taps - 1, static_cast<int>(t));
    double acc = 0.0;
    for (int n = 0; n <= nmax; ++n) acc += f(n) * x[t - n];
    y[t] = acc;
  }
  return y;
}

}  // namespace

PqmfBank design_pqmf(int num_bands, int taps, double cutoff_ratio,
                     double kaiser_beta) {
  if (num_bands != 4)
    throw std::invalid_argument("design_pqmf: num_bands is fixed at 4");
  if (taps % 2 != 0 || taps <= 0)
    throw std::invalid_argument("design_pqmf: taps must be a positive even count");
  if (cutoff_ratio <= 0.0 || cutoff_ratio >= 0.5)
    throw std::invalid_argument("design_pqmf: cutoff_ratio must be in (0, 0.5)");

  // Kaiser-windowed sinc lowpass; cutoff_ratio is relative to Nyquist.
  // With even taps the center (taps-1)/2 falls between samples, so the
  // sinc never hits its removable singularity.
  const double center = (taps - 1) / 2.0;
  const double i0_beta = bessel_i0(kaiser_beta);
  Eigen::VectorXd p(taps);
  for (int n = 0; n < taps; ++n) {
    const double m = n - center;
    const double sinc = std::sin(M_PI * cutoff_ratio * m) / (M_PI * m);
    const double r = 2.0 * n / (taps - 1.0) - 1.0;
    const double win = bessel_i0(kaiser_beta * std::sqrt(1.0 - r * r)) / i0_beta;
    p(n) = sinc * win;
  }
  p /= p.sum();  // unit DC gain

  PqmfBank bank;
  bank.num_bands = num_bands;
  bank.prototype = p;
  bank.analysis_filters.resize(num_bands, taps);
  bank.synthesis_filters.resize(num_bands, taps);
  for (int k = 0; k < num_bands; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    for (int n = 0; n < taps; ++n) {
      const double arg =
          (2.0 * k + 1.0) * M_PI / (2.0 * num_bands) * (n - center);
      bank.analysis_filters(k, n) =
          2.0 * p(n) * std::cos(arg + sign * M_PI / 4.0);
      bank.synthesis_filters(k, n) =
          2.0 * p(n) * std::cos(arg - sign * M_PI / 4.0);
    }
  }
  return bank;
}

SubbandSignals pqmf_analysis(const AudioSignal& signal, const PqmfBank& bank) {
  const int k = bank.num_bands;
  std::vector<double> x = signal.samples;
  SubbandSignals out;
  out.sample_rate = signal.sample_rate;
  out.padding = static_cast<int>((k - x.size() % k) % k);
  x.resize(x.size() + out.padding, 0.0);

  const std::size_t sub_len = x.size() / k;
  out.bands.resize(k);
  for (int b = 0; b < k; ++b) {
    std::vector<double> filtered = causal_conv(x, bank.analysis_filters.row(b));
    out.bands[b].resize(sub_len);
    for (std::size_t m = 0; m < sub_len; ++m)
      out.bands[b][m] = filtered[m * k];
  }
  return out;
}

AudioSignal pqmf_synthesis(const SubbandSignals& subbands,
                           const PqmfBank& bank) {
  const int k = bank.num_bands;
  if (static_cast<int>(subbands.bands.size()) != k)
    throw std::invalid_argument("pqmf_synthesis: expected exactly 4 sub-bands");
  const std::size_t sub_len = subbands.bands[0].size();
  for (const auto& b : subbands.bands)
    if (b.size() != sub_len)
      throw std::invalid_argument("pqmf_synthesis: sub-band lengths differ");

  AudioSignal out;
  out.sample_rate = subbands.sample_rate;
  out.samples.assign(sub_len * k, 0.0);
  std::vector<double> up(sub_len * k);
  for (int b = 0; b < k; ++b) {
    std::fill(up.begin(), up.end(), 0.0);
    for (std::size_t m = 0; m < sub_len; ++m)
      up[m * k] = subbands.bands[b][m] * k;  // compensate zero insertion
    std::vector<double> filtered = causal_conv(up, bank.synthesis_filters.row(b));
    for (std::size_t t = 0; t < filtered.size(); ++t)
      out.samples[t] += filtered[t];
  }
  return out;
}

ag::Var ag_pqmf_synthesis(const ag::Var& subbands, const PqmfBank& bank) {
  const int k = bank.num_bands;
  if (subbands->value.rows() != k)
    throw std::invalid_argument("ag_pqmf_synthesis: expected [num_bands x T/4]");
  const int taps = bank.taps();
  // One correlation over all bands: weight row holds the time-reversed
  // synthesis filters so conv1d's correlation computes true convolution.
  Eigen::MatrixXd w(1, k * taps);
  for (int b = 0; b < k; ++b)
    for (int n = 0; n < taps; ++n)
      w(0, b * taps + n) = bank.synthesis_filters(b, taps - 1 - n);
  ag::Var up = ag::upsample_zero_cols(subbands, k, static_cast<double>(k));
  return ag::conv1d(up, ag::constant(w), nullptr, taps, 1, taps - 1, 0);
}

}  // namespace dsp
}  // namespace msvoc
