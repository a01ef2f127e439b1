// msvoc/dsp/stft.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/dsp/stft.h"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace msvoc {
namespace dsp {

namespace {

void check_config(const StftConfig& cfg) {
  if (cfg.fft_size < cfg.window_size)
    throw std::invalid_argument("stft: fft_size must be >= window_size");
  if (cfg.hop_size < 1) throw std::invalid_argument("stft: hop_size must be >= 1");
  if (cfg.window_size < 1)
    throw std::invalid_argument("stft: window_size must be >= 1");
}

// Reflect index into [0, len), mirroring around the edges without
// repeating them (librosa-style 'reflect').
Eigen::Index reflect_index(Eigen::Index i, Eigen::Index len) {
  if (len == 1) return 0;
  const Eigen::Index period = 2 * (len - 1);
  i = ((i % period) + period) % period;
  return i < len ? i : period - i;
}

// [window x frames] matrix of center-padded frames.
Eigen::MatrixXd frame_signal(const Eigen::RowVectorXd& x, const StftConfig& cfg) {
  const Eigen::Index len = x.size();
  const Eigen::Index frames = len / cfg.hop_size + 1;
  const Eigen::Index pad = cfg.window_size / 2;
  Eigen::MatrixXd fm(cfg.window_size, frames);
  for (Eigen::Index m = 0; m < frames; ++m)
    for (Eigen::Index n = 0; n < cfg.window_size; ++n)
      fm(n, m) = x(reflect_index(m * cfg.hop_size + n - pad, len));
  return fm;
}

// Adjoint of frame_signal: overlap-add frame gradients back onto the signal.
void frame_signal_adjoint(const Eigen::MatrixXd& dfm, Eigen::Index len,
                          const StftConfig& cfg, Eigen::RowVectorXd& dx) {
  const Eigen::Index pad = cfg.window_size / 2;
  for (Eigen::Index m = 0; m < dfm.cols(); ++m)
    for (Eigen::Index n = 0; n < cfg.window_size; ++n)
      dx(reflect_index(m * cfg.hop_size + n - pad, len)) += dfm(n, m);
}

}  // namespace

const StftBasis& stft_basis(const StftConfig& cfg) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, StftBasis> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(cfg.fft_size, cfg.hop_size, cfg.window_size);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  check_config(cfg);
  const int bins = cfg.fft_size / 2 + 1;
  Eigen::VectorXd window(cfg.window_size);
  for (int n = 0; n < cfg.window_size; ++n)
    window(n) = 0.5 - 0.5 * std::cos(2.0 * M_PI * n / cfg.window_size);

  StftBasis basis;
  basis.config = cfg;
  basis.cos_basis.resize(bins, cfg.window_size);
  basis.sin_basis.resize(bins, cfg.window_size);
  for (int k = 0; k < bins; ++k) {
    for (int n = 0; n < cfg.window_size; ++n) {
      const double phase = 2.0 * M_PI * k * n / cfg.fft_size;
      basis.cos_basis(k, n) = std::cos(phase) * window(n);
      basis.sin_basis(k, n) = std::sin(phase) * window(n);
    }
  }
  return cache.emplace(key, std::move(basis)).first->second;
}

MagnitudeSpectrogram stft_magnitude(const AudioSignal& signal,
                                    const StftConfig& cfg) {
  check_config(cfg);
  if (signal.samples.empty())
    throw std::invalid_argument("stft: empty signal");
  check_finite(signal);

  const StftBasis& basis = stft_basis(cfg);
  Eigen::RowVectorXd x = Eigen::Map<const Eigen::RowVectorXd>(
      signal.samples.data(), signal.samples.size());
  Eigen::MatrixXd fm = frame_signal(x, cfg);
  Eigen::MatrixXd re = basis.cos_basis * fm;
  Eigen::MatrixXd im = basis.sin_basis * fm;
  MagnitudeSpectrogram out;
  out.config = cfg;
  out.values =
      (re.array().square() + im.array().square()).sqrt().matrix().transpose();
  return out;
}

ag::Var ag_stft_magnitude(const ag::Var& x, const StftConfig& cfg) {
  if (x->value.rows() != 1 || x->value.cols() == 0)
    throw std::invalid_argument("ag_stft_magnitude: expected nonempty [1 x T]");
  const StftBasis& basis = stft_basis(cfg);
  const Eigen::Index len = x->value.cols();
  Eigen::RowVectorXd sig = x->value.row(0);
  Eigen::MatrixXd fm = frame_signal(sig, cfg);
  Eigen::MatrixXd re = basis.cos_basis * fm;
  Eigen::MatrixXd im = basis.sin_basis * fm;
  Eigen::MatrixXd mag =
      (re.array().square() + im.array().square()).sqrt().matrix();
  // Frames are rebuilt in the backward pass; only re/im would otherwise be
  // captured, and those are cheap to recompute from the parent value.
  return ag::make_op(mag, {x}, [cfg, len](ag::Node& n) {
    const StftBasis& basis = stft_basis(cfg);
    Eigen::RowVectorXd sig = n.parents[0]->value.row(0);
    Eigen::MatrixXd fm = frame_signal(sig, cfg);
    Eigen::MatrixXd re = basis.cos_basis * fm;
    Eigen::MatrixXd im = basis.sin_basis * fm;
    Eigen::MatrixXd mag =
        (re.array().square() + im.array().square()).sqrt().cwiseMax(1e-300);
    Eigen::MatrixXd scale = n.grad.cwiseQuotient(mag);
    Eigen::MatrixXd dfm = basis.cos_basis.transpose() * scale.cwiseProduct(re) +
                          basis.sin_basis.transpose() * scale.cwiseProduct(im);
    Eigen::RowVectorXd dx = Eigen::RowVectorXd::Zero(len);
    frame_signal_adjoint(dfm, len, cfg, dx);
    ag::accumulate(*n.parents[0], dx);
  });
}

}  // namespace dsp
}  // namespace msvoc
