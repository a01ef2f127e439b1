// msvoc/spk/encoder.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_SPK_ENCODER_H_
#define MSVOC_SPK_ENCODER_H_

#include <string>
#include <vector>

#include "msvoc/dsp/mel.h"
#include "msvoc/model/layers.h"

namespace msvoc {
namespace spk {

constexpr int kEmbeddingDim = 256;

// 256-d unit-norm d-vector.
struct SingerEmbedding {
  Eigen::VectorXd vector;
  std::string singer_id;
};

struct SpeakerEncoderConfig {
  int lstm_layers = 3;
  int hidden_size = 256;
  int projection_size = kEmbeddingDim;
  int mel_bands = 80;
};

// Stacked-LSTM d-vector encoder: mel frames in, final-frame projection of
// the top layer out, L2-normalized. Layer hidden-state sequences are also
// exposed; the perceptual loss consumes them.
class SpeakerEncoder {
 public:
  SpeakerEncoder(const SpeakerEncoderConfig& cfg, Rng& rng);

  // mel: [mel_bands x frames], frames >= 2.
  std::vector<ag::Var> ag_hidden_states(const ag::Var& mel) const;
  ag::Var ag_encode(const ag::Var& mel) const;  // [256 x 1], unit norm

  SingerEmbedding encode(const dsp::MelSpectrogram& mel) const;
  std::vector<Eigen::MatrixXd> hidden_states(
      const dsp::MelSpectrogram& mel) const;

  // GE2E scale/bias, clamped positive scale enforced by the trainer.
  ag::Var ge2e_scale() const { return ge2e_w_; }
  ag::Var ge2e_bias() const { return ge2e_b_; }

  const SpeakerEncoderConfig& config() const { return cfg_; }
  model::ParamStore& params() { return store_; }
  const model::ParamStore& params() const { return store_; }
  void freeze() { store_.set_trainable(false); }

 private:
  SpeakerEncoderConfig cfg_;
  model::ParamStore store_;
  std::vector<model::LstmLayer> layers_;
  model::LinearLayer projection_;
  ag::Var ge2e_w_;
  ag::Var ge2e_b_;
};

// Softmax-variant generalized end-to-end loss over an N speakers x M
// utterances batch of unit-norm embeddings ([256 x 1] graph nodes).
// Requires N >= 2 and M >= 2.
ag::Var ge2e_loss(const std::vector<std::vector<ag::Var>>& embeddings,
                  const ag::Var& scale, const ag::Var& bias);

}  // namespace spk
}  // namespace msvoc

#endif  // MSVOC_SPK_ENCODER_H_
