// msvoc/train/trainer.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/train/trainer.h"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "msvoc/model/checkpoint.h"

namespace msvoc {
namespace train {

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

ag::Var to_wave_node(const std::vector<double>& samples) {
  ag::Mat m(1, samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) m(0, i) = samples[i];
  return ag::constant(std::move(m));
}

}  // namespace

void TrainConfig::validate() const {
  if (pretrain_steps > total_steps)
    throw std::invalid_argument("train config: pretrain_steps > total_steps");
  if (batch_size < 1)
    throw std::invalid_argument("train config: batch_size < 1");
  if (segment_length % 256 != 0 || segment_length % 512 != 0)
    throw std::invalid_argument(
        "train config: segment_length must be divisible by 256 and 512");
}

struct Trainer::Excerpt {
  const TrainItem* item = nullptr;
  ag::Var wave;   // [1 x segment]
  ag::Var mel;    // [80 x F]
  ag::Var noise;  // [1 x F * hop/4]
};

Trainer::Trainer(TrainConfig cfg, const model::GeneratorConfig& gen_cfg,
                 const spk::SpeakerEncoderConfig& enc_cfg,
                 std::vector<TrainItem> items, spk::EmbeddingCache embeddings)
    : cfg_(std::move(cfg)),
      rng_(cfg_.seed),
      items_(std::move(items)),
      embeddings_(std::move(embeddings)),
      opt_g_(cfg_.opt_g),
      opt_du_(cfg_.opt_d),
      opt_ds_(cfg_.opt_d) {
  cfg_.validate();
  if (items_.empty()) throw std::invalid_argument("trainer: empty dataset");
  // model init consumes the seeded stream in a fixed order
  generator_ = std::make_unique<model::MultiBandGenerator>(gen_cfg, rng_);
  uncond_ = std::make_unique<model::UncondDiscriminator>(rng_);
  cond_ = std::make_unique<model::CondDiscriminator>(rng_);
  encoder_ = std::make_unique<spk::SpeakerEncoder>(enc_cfg, rng_);
  encoder_->freeze();  // perceptual-loss feature extractor only
}

Trainer::Excerpt Trainer::sample_excerpt() {
  const std::size_t idx = rng_.uniform_int(items_.size());
  const TrainItem& item = items_[idx];
  const std::size_t seg = static_cast<std::size_t>(cfg_.segment_length);

  std::vector<double> samples(seg, 0.0);
  if (item.audio.samples.size() <= seg) {
    // short utterances are right-padded with silence
    std::copy(item.audio.samples.begin(), item.audio.samples.end(),
              samples.begin());
  } else {
    const std::size_t start =
        rng_.uniform_int(item.audio.samples.size() - seg + 1);
    std::copy(item.audio.samples.begin() + start,
              item.audio.samples.begin() + start + seg, samples.begin());
  }

  dsp::AudioSignal sig;
  sig.sample_rate = item.audio.sample_rate;
  sig.samples = samples;
  dsp::MelSpectrogram mel = dsp::mel_spectrogram(sig);
  // floor(len/hop)+1 frames; drop the trailing frame so F * hop == segment
  const Eigen::Index frames = mel.values.rows() - 1;
  ag::Mat cond = mel.values.topRows(frames).transpose();

  const Eigen::Index noise_len =
      frames * generator_->config().upsample_factor();
  ag::Mat noise(1, noise_len);
  for (Eigen::Index i = 0; i < noise_len; ++i) noise(0, i) = rng_.gaussian();

  Excerpt ex;
  ex.item = &item;
  ex.wave = to_wave_node(samples);
  ex.mel = ag::constant(std::move(cond));
  ex.noise = ag::constant(std::move(noise));
  return ex;
}

void Trainer::check_finite_params(const char* stage) const {
  if (generator_->params().any_nonfinite() ||
      uncond_->params().any_nonfinite() || cond_->params().any_nonfinite())
    throw std::runtime_error(std::string("training aborted: non-finite "
                                         "parameters after ") +
                             stage + " at step " + std::to_string(step_));
}

StepMetrics Trainer::pretrain_step() {
  StepMetrics m;
  m.pretrain = true;

  ag::Var l_stft_sum, l_spl_sum;
  for (int b = 0; b < cfg_.batch_size; ++b) {
    Excerpt ex = sample_excerpt();
    ag::Var fake = generator_->forward(ex.noise, ex.mel);
    ag::Var l_stft = losses::multi_res_stft_loss(ex.wave, fake, cfg_.stft_loss);
    ag::Var l_spl = losses::singer_perceptual_loss(ex.wave, fake, *encoder_);
    l_stft_sum = l_stft_sum ? ag::add(l_stft_sum, l_stft) : l_stft;
    l_spl_sum = l_spl_sum ? ag::add(l_spl_sum, l_spl) : l_spl;
  }
  const double inv_b = 1.0 / cfg_.batch_size;
  ag::Var l_stft = ag::smul(l_stft_sum, inv_b);
  ag::Var l_spl = ag::smul(l_spl_sum, inv_b);
  ag::Var loss =
      losses::generator_total_loss(l_spl, l_stft, nullptr, cfg_.weights);
  if (!std::isfinite(loss->value(0, 0)))
    throw std::runtime_error("training aborted: non-finite loss at step " +
                             std::to_string(step_));
  ag::backward(loss);
  opt_g_.step(generator_->params());
  check_finite_params("generator update");

  m.l_stft = l_stft->value(0, 0);
  m.l_spl = l_spl->value(0, 0);
  return m;
}

StepMetrics Trainer::joint_step() {
  StepMetrics m;

  Excerpt ex = sample_excerpt();
  auto emb_it = embeddings_.entries.find(ex.item->utterance_id);
  if (emb_it == embeddings_.entries.end())
    throw std::runtime_error("no cached embedding for utterance " +
                             ex.item->utterance_id);
  ag::Var emb = ag::constant(emb_it->second.cast<double>());

  // (1) discriminator update on detached fakes
  generator_->params().set_trainable(false);  // no tape -> detached
  ag::Var fake_detached = generator_->forward(ex.noise, ex.mel);
  generator_->params().set_trainable(true);

  ag::Var d_loss = losses::jcu_discriminator_loss(
      uncond_->forward(ex.wave), uncond_->forward(fake_detached),
      cond_->forward(ex.wave, emb), cond_->forward(fake_detached, emb));
  if (!std::isfinite(d_loss->value(0, 0)))
    throw std::runtime_error(
        "training aborted: non-finite discriminator loss at step " +
        std::to_string(step_));
  ag::backward(d_loss);
  opt_du_.step(uncond_->params());
  opt_ds_.step(cond_->params());
  check_finite_params("discriminator update");

  // (2) generator update against the refreshed discriminators
  ag::Var fake = generator_->forward(ex.noise, ex.mel);
  ag::Var l_stft = losses::multi_res_stft_loss(ex.wave, fake, cfg_.stft_loss);
  ag::Var l_spl = losses::singer_perceptual_loss(ex.wave, fake, *encoder_);
  ag::Var l_adv = losses::jcu_generator_loss(uncond_->forward(fake),
                                             cond_->forward(fake, emb));
  ag::Var g_loss =
      losses::generator_total_loss(l_spl, l_stft, l_adv, cfg_.weights);
  if (!std::isfinite(g_loss->value(0, 0)))
    throw std::runtime_error(
        "training aborted: non-finite generator loss at step " +
        std::to_string(step_));
  ag::backward(g_loss);
  opt_g_.step(generator_->params());
  check_finite_params("generator update");

  m.l_stft = l_stft->value(0, 0);
  m.l_spl = l_spl->value(0, 0);
  m.l_adv_g = l_adv->value(0, 0);
  m.l_adv_d = d_loss->value(0, 0);
  return m;
}

StepMetrics Trainer::step() {
  if (step_ >= cfg_.total_steps)
    throw std::logic_error("trainer: schedule already complete");
  const double t0 = now_ms();
  StepMetrics m = step_ < cfg_.pretrain_steps ? pretrain_step() : joint_step();
  ++step_;
  m.step = step_;
  m.wall_ms = now_ms() - t0;
  return m;
}

void Trainer::save(const std::string& path,
                   const std::string& config_json) const {
  model::Checkpoint ck;
  ck.step = step_;
  ck.rng_state = rng_.state();
  ck.config_json = config_json;
  auto put_all = [&ck](const std::map<std::string, ag::Mat>& vals,
                       const std::string& prefix) {
    for (const auto& [name, mat] : vals) ck.tensors[prefix + name] = mat;
  };
  put_all(generator_->params().dump_values(), "");
  put_all(uncond_->params().dump_values(), "");
  put_all(cond_->params().dump_values(), "");
  put_all(encoder_->params().dump_values(), "");
  put_all(opt_g_.dump_state(), "opt_g.");
  put_all(opt_du_.dump_state(), "opt_du.");
  put_all(opt_ds_.dump_state(), "opt_ds.");
  model::save_checkpoint(path, ck);
}

void Trainer::load(const std::string& path) {
  model::Checkpoint ck = model::load_checkpoint(path);
  step_ = ck.step;
  rng_.set_state(ck.rng_state);

  std::map<std::string, ag::Mat> plain, og, odu, ods;
  for (const auto& [name, mat] : ck.tensors) {
    if (name.rfind("opt_g.", 0) == 0) {
      og[name.substr(6)] = mat;
    } else if (name.rfind("opt_du.", 0) == 0) {
      odu[name.substr(7)] = mat;
    } else if (name.rfind("opt_ds.", 0) == 0) {
      ods[name.substr(7)] = mat;
    } else {
      plain[name] = mat;
    }
  }
  auto take = [&plain](model::ParamStore& store) {
    std::map<std::string, ag::Mat> own;
    for (const auto& [name, var] : store.params()) {
      auto it = plain.find(name);
      if (it == plain.end())
        throw std::runtime_error("checkpoint is missing parameter " + name);
      own[name] = it->second;
    }
    store.load_values(own);
  };
  take(generator_->params());
  take(uncond_->params());
  take(cond_->params());
  take(encoder_->params());
  opt_g_.load_state(og);
  opt_du_.load_state(odu);
  opt_ds_.load_state(ods);
}

void run_training(Trainer& trainer, std::ostream& log,
                  const std::string& checkpoint_dir,
                  const std::string& config_json) {
  const TrainConfig& cfg = trainer.config();
  while (trainer.current_step() < cfg.total_steps) {
    StepMetrics m = trainer.step();
    log << m.step << '\t' << m.l_stft << '\t' << m.l_spl << '\t' << m.l_adv_g
        << '\t' << m.l_adv_d << '\t' << m.wall_ms << '\n';
    const bool at_interval =
        cfg.checkpoint_interval > 0 && m.step % cfg.checkpoint_interval == 0;
    if (!checkpoint_dir.empty() &&
        (at_interval || m.step == cfg.total_steps)) {
      trainer.save(checkpoint_dir + "/ckpt_" + std::to_string(m.step) + ".bin",
                   config_json);
    }
  }
}

double ge2e_train_step(
    spk::SpeakerEncoder& encoder,
    const std::vector<std::vector<dsp::MelSpectrogram>>& batch, RAdam& opt) {
  std::vector<std::vector<ag::Var>> embeddings(batch.size());
  for (std::size_t n = 0; n < batch.size(); ++n)
    for (const auto& mel : batch[n])
      embeddings[n].push_back(
          encoder.ag_encode(ag::constant(mel.values.transpose())));
  ag::Var loss =
      spk::ge2e_loss(embeddings, encoder.ge2e_scale(), encoder.ge2e_bias());
  const double value = loss->value(0, 0);
  if (!std::isfinite(value))
    throw std::runtime_error("ge2e training: non-finite loss");
  ag::backward(loss);
  opt.step(encoder.params());
  // similarity scale stays positive
  ag::Var w = encoder.ge2e_scale();
  if (w->value(0, 0) < 1e-3) w->value(0, 0) = 1e-3;
  return value;
}

}  // namespace train
}  // namespace msvoc
