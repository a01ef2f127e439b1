// msvoc/losses/losses.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_LOSSES_LOSSES_H_
#define MSVOC_LOSSES_LOSSES_H_

#include <vector>

#include "msvoc/autograd.h"
#include "msvoc/dsp/audio.h"
#include "msvoc/dsp/stft.h"
#include "msvoc/spk/encoder.h"

namespace msvoc {
namespace losses {

struct StftLossConfig {
  std::vector<dsp::StftConfig> resolutions;

  // Three resolutions with FFT sizes 1024 / 2048 / 512 and hop/window in
  // the conventional ~1:5 and window<=fft relationship.
  static StftLossConfig defaults() {
    return {{{1024, 120, 600}, {2048, 240, 1200}, {512, 50, 240}}};
  }
};

struct LossWeights {
  double lambda_adv = 10.0;
  double aux_mix = 0.5;
};

constexpr double kLogMagFloor = 1e-7;

// ||  |STFT(x)| - |STFT(y)|  ||_F / || |STFT(x)| ||_F.
// Throws if x is all-zero (zero denominator). Waves are [1 x T] nodes.
ag::Var spectral_convergence(const ag::Var& x, const ag::Var& y,
                             const dsp::StftConfig& res);

// (1/N) * || log|STFT(x)| - log|STFT(y)| ||_1, natural log floored.
ag::Var log_stft_magnitude_loss(const ag::Var& x, const ag::Var& y,
                                const dsp::StftConfig& res);

// (1/M) * sum over resolutions of (L_sc + L_mag).
ag::Var multi_res_stft_loss(const ag::Var& x, const ag::Var& y,
                            const StftLossConfig& cfg);

// Sum over encoder LSTM layers of the Frobenius distance between hidden
// state sequences of Mel(x) and Mel(y). The encoder stays frozen; gradients
// flow into y only.
ag::Var singer_perceptual_loss(const ag::Var& x, const ag::Var& y,
                               const spk::SpeakerEncoder& encoder,
                               const dsp::MelParams& mel = dsp::MelParams{});

// Least-squares JCU objectives. Score inputs of any shape are mean-reduced
// before entering the expectations.
ag::Var jcu_discriminator_loss(const ag::Var& d_real, const ag::Var& d_fake,
                               const ag::Var& ds_real, const ag::Var& ds_fake);
ag::Var jcu_generator_loss(const ag::Var& d_fake, const ag::Var& ds_fake);

// L_aux = aux_mix * (l_spl + l_stft); L_G = L_aux + lambda * l_adv_g.
// Pass a null adversarial term during generator pretraining.
ag::Var generator_total_loss(const ag::Var& l_spl, const ag::Var& l_stft,
                             const ag::Var& l_adv_g, const LossWeights& w);

// Convenience overloads on plain signals (evaluation paths).
double multi_res_stft_loss(const dsp::AudioSignal& x,
                           const dsp::AudioSignal& y,
                           const StftLossConfig& cfg);

ag::Var wave_node(const dsp::AudioSignal& x);

}  // namespace losses
}  // namespace msvoc

#endif  // MSVOC_LOSSES_LOSSES_H_
