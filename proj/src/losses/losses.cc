// msvoc/losses/losses.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/losses/losses.h"

#include <stdexcept>

namespace msvoc {
namespace losses {

namespace {

ag::Var frobenius(const ag::Var& m) {
  return ag::sqrt_(ag::sum(ag::mul(m, m)));
}

ag::Var squared_mean_gap(const ag::Var& scores, double target) {
  ag::Var m = ag::sadd(ag::mean(scores), -target);
  return ag::mul(m, m);
}

}  // namespace

ag::Var wave_node(const dsp::AudioSignal& x) {
  ag::Mat m(1, x.samples.size());
  for (std::size_t i = 0; i < x.samples.size(); ++i) m(0, i) = x.samples[i];
  return ag::constant(std::move(m));
}

ag::Var spectral_convergence(const ag::Var& x, const ag::Var& y,
                             const dsp::StftConfig& res) {
  if (x->value.cols() != y->value.cols())
    throw std::invalid_argument("spectral_convergence: length mismatch");
  ag::Var mx = dsp::ag_stft_magnitude(x, res);
  ag::Var my = dsp::ag_stft_magnitude(y, res);
  ag::Var denom = frobenius(mx);
  if (denom->value(0, 0) == 0.0)
    throw std::invalid_argument(
        "spectral_convergence: reference signal is all-zero");
  return ag::div_by_scalar(frobenius(ag::sub(mx, my)), denom);
}

ag::Var log_stft_magnitude_loss(const ag::Var& x, const ag::Var& y,
                                const dsp::StftConfig& res) {
  if (x->value.cols() != y->value.cols())
    throw std::invalid_argument("log_stft_magnitude_loss: length mismatch");
  ag::Var lx = ag::log_floor(dsp::ag_stft_magnitude(x, res), kLogMagFloor);
  ag::Var ly = ag::log_floor(dsp::ag_stft_magnitude(y, res), kLogMagFloor);
  return ag::mean(ag::abs_(ag::sub(lx, ly)));
}

ag::Var multi_res_stft_loss(const ag::Var& x, const ag::Var& y,
                            const StftLossConfig& cfg) {
  if (cfg.resolutions.empty())
    throw std::invalid_argument("multi_res_stft_loss: no resolutions");
  ag::Var total;
  for (const auto& res : cfg.resolutions) {
    ag::Var term =
        ag::add(spectral_convergence(x, y, res), log_stft_magnitude_loss(x, y, res));
    total = total ? ag::add(total, term) : term;
  }
  return ag::smul(total, 1.0 / static_cast<double>(cfg.resolutions.size()));
}

ag::Var singer_perceptual_loss(const ag::Var& x, const ag::Var& y,
                               const spk::SpeakerEncoder& encoder,
                               const dsp::MelParams& mel) {
  if (x->value.cols() != y->value.cols())
    throw std::invalid_argument("singer_perceptual_loss: length mismatch");
  auto states_x = encoder.ag_hidden_states(dsp::ag_mel_spectrogram(x, mel));
  auto states_y = encoder.ag_hidden_states(dsp::ag_mel_spectrogram(y, mel));
  ag::Var total;
  for (std::size_t j = 0; j < states_x.size(); ++j) {
    ag::Var term = frobenius(ag::sub(states_x[j], states_y[j]));
    total = total ? ag::add(total, term) : term;
  }
  return total;
}

ag::Var jcu_discriminator_loss(const ag::Var& d_real, const ag::Var& d_fake,
                               const ag::Var& ds_real,
                               const ag::Var& ds_fake) {
  ag::Var uncond = ag::add(squared_mean_gap(d_real, 1.0),
                           squared_mean_gap(d_fake, 0.0));
  ag::Var cond = ag::add(squared_mean_gap(ds_real, 1.0),
                         squared_mean_gap(ds_fake, 0.0));
  return ag::add(ag::smul(uncond, 0.5), ag::smul(cond, 0.5));
}

ag::Var jcu_generator_loss(const ag::Var& d_fake, const ag::Var& ds_fake) {
  return ag::add(ag::smul(squared_mean_gap(d_fake, 1.0), 0.5),
                 ag::smul(squared_mean_gap(ds_fake, 1.0), 0.5));
}

ag::Var generator_total_loss(const ag::Var& l_spl, const ag::Var& l_stft,
                             const ag::Var& l_adv_g, const LossWeights& w) {
  ag::Var aux = ag::smul(ag::add(l_spl, l_stft), w.aux_mix);
  if (!l_adv_g) return aux;
  return ag::add(aux, ag::smul(l_adv_g, w.lambda_adv));
}

double multi_res_stft_loss(const dsp::AudioSignal& x,
                           const dsp::AudioSignal& y,
                           const StftLossConfig& cfg) {
  return multi_res_stft_loss(wave_node(x), wave_node(y), cfg)->value(0, 0);
}

}  // namespace losses
}  // namespace msvoc
