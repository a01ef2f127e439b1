// msvoc/spk/encoder.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/spk/encoder.h"

#include <stdexcept>

namespace msvoc {
namespace spk {

namespace {

ag::Var l2_normalize(const ag::Var& v) {
  ag::Var norm = ag::sqrt_(ag::sum(ag::mul(v, v)));
  return ag::div_by_scalar(v, norm);
}

ag::Var cosine(const ag::Var& a, const ag::Var& b) {
  ag::Var dot = ag::sum(ag::mul(a, b));
  ag::Var na = ag::sqrt_(ag::sum(ag::mul(a, a)));
  ag::Var nb = ag::sqrt_(ag::sum(ag::mul(b, b)));
  return ag::div_by_scalar(ag::div_by_scalar(dot, na), nb);
}

}  // namespace

SpeakerEncoder::SpeakerEncoder(const SpeakerEncoderConfig& cfg, Rng& rng)
    : cfg_(cfg) {
  if (cfg_.projection_size != kEmbeddingDim)
    throw std::invalid_argument("speaker encoder projection must be 256-d");
  for (int l = 0; l < cfg_.lstm_layers; ++l) {
    const int in = (l == 0) ? cfg_.mel_bands : cfg_.hidden_size;
    layers_.emplace_back(store_, "enc.lstm" + std::to_string(l), in,
                         cfg_.hidden_size, rng);
  }
  projection_ = model::LinearLayer(store_, "enc.proj", cfg_.hidden_size,
                                   cfg_.projection_size, rng);
  ge2e_w_ = store_.create_zeros("enc.ge2e_w", 1, 1);
  ge2e_b_ = store_.create_zeros("enc.ge2e_b", 1, 1);
  ge2e_w_->value(0, 0) = 10.0;
  ge2e_b_->value(0, 0) = -5.0;
}

std::vector<ag::Var> SpeakerEncoder::ag_hidden_states(
    const ag::Var& mel) const {
  if (mel->value.rows() != cfg_.mel_bands)
    throw std::invalid_argument("speaker encoder: expected [80 x frames]");
  if (mel->value.cols() < 2)
    throw std::invalid_argument("speaker encoder: needs at least 2 frames");
  std::vector<ag::Var> states;
  ag::Var x = mel;
  for (const auto& layer : layers_) {
    x = layer.forward(x);
    states.push_back(x);
  }
  return states;
}

ag::Var SpeakerEncoder::ag_encode(const ag::Var& mel) const {
  std::vector<ag::Var> states = ag_hidden_states(mel);
  const ag::Var& top = states.back();
  ag::Var last = ag::cols(top, top->value.cols() - 1, 1);
  return l2_normalize(projection_.apply(last));
}

SingerEmbedding SpeakerEncoder::encode(const dsp::MelSpectrogram& mel) const {
  ag::Var e = ag_encode(ag::constant(mel.values.transpose()));
  SingerEmbedding out;
  out.vector = e->value.col(0);
  return out;
}

std::vector<Eigen::MatrixXd> SpeakerEncoder::hidden_states(
    const dsp::MelSpectrogram& mel) const {
  auto states = ag_hidden_states(ag::constant(mel.values.transpose()));
  std::vector<Eigen::MatrixXd> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s->value);
  return out;
}

ag::Var ge2e_loss(const std::vector<std::vector<ag::Var>>& embeddings,
                  const ag::Var& scale, const ag::Var& bias) {
  const std::size_t n = embeddings.size();
  if (n < 2) throw std::invalid_argument("ge2e_loss: need N >= 2 speakers");
  const std::size_t m = embeddings[0].size();
  if (m < 2) throw std::invalid_argument("ge2e_loss: need M >= 2 utterances");
  for (const auto& spk : embeddings)
    if (spk.size() != m)
      throw std::invalid_argument("ge2e_loss: ragged utterance counts");

  // inclusive centroids
  std::vector<ag::Var> centroids(n);
  std::vector<ag::Var> sums(n);
  for (std::size_t k = 0; k < n; ++k) {
    ag::Var s = embeddings[k][0];
    for (std::size_t i = 1; i < m; ++i) s = ag::add(s, embeddings[k][i]);
    sums[k] = s;
    centroids[k] = ag::smul(s, 1.0 / static_cast<double>(m));
  }

  ag::Var total;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const ag::Var& e = embeddings[j][i];
      // own-speaker centroid excludes the utterance itself
      ag::Var own =
          ag::smul(ag::sub(sums[j], e), 1.0 / static_cast<double>(m - 1));
      std::vector<ag::Var> sims;
      sims.reserve(n);
      for (std::size_t k = 0; k < n; ++k) {
        ag::Var c = (k == j) ? own : centroids[k];
        sims.push_back(
            ag::add(ag::mul(scale, cosine(e, c)), bias));  // [1 x 1]
      }
      ag::Var row = ag::hcat(sims);  // [1 x N]
      ag::Var log_denominator = ag::log_floor(ag::sum(ag::exp_(row)), 0.0);
      ag::Var nll = ag::sub(log_denominator, ag::cols(row, j, 1));
      total = total ? ag::add(total, nll) : nll;
    }
  }
  return ag::smul(total, 1.0 / static_cast<double>(n * m));
}

}  // namespace spk
}  // namespace msvoc
