// msvoc/train/trainer.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_TRAIN_TRAINER_H_
#define MSVOC_TRAIN_TRAINER_H_

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "msvoc/losses/losses.h"
#include "msvoc/model/discriminator.h"
#include "msvoc/model/generator.h"
#include "msvoc/spk/cache.h"
#include "msvoc/spk/encoder.h"
#include "msvoc/train/optimizer.h"

namespace msvoc {
namespace train {

struct TrainConfig {
  std::uint64_t pretrain_steps = 1000;
  std::uint64_t total_steps = 2000;
  int batch_size = 1;
  int segment_length = 8192;  // samples per training excerpt
  OptimizerConfig opt_g{1e-4, 0.9, 0.999, 1e-8, 0.0};
  OptimizerConfig opt_d{5e-5, 0.9, 0.999, 1e-8, 0.0};
  std::uint64_t checkpoint_interval = 500;
  std::uint64_t seed = 0;
  losses::StftLossConfig stft_loss = losses::StftLossConfig::defaults();
  losses::LossWeights weights;

  // pretrain <= total; segment divisible by the discriminator downsampling
  // factor (256) and by hop*4 (512) so excerpt, mel and noise lengths agree.
  void validate() const;
};

struct TrainItem {
  std::string utterance_id;
  std::string singer_id;
  dsp::AudioSignal audio;
};

struct StepMetrics {
  std::uint64_t step = 0;  // value after the update
  bool pretrain = false;
  double l_stft = 0.0;
  double l_spl = 0.0;
  double l_adv_g = 0.0;  // 0 during pretraining
  double l_adv_d = 0.0;
  double wall_ms = 0.0;
};

// Two-phase schedule: generator-only pretraining on the auxiliary loss for
// pretrain_steps, then joint adversarial steps. One discriminator update
// (on detached fakes, cached singer embeddings) and one generator update
// per joint step.
class Trainer {
 public:
  Trainer(TrainConfig cfg, const model::GeneratorConfig& gen_cfg,
          const spk::SpeakerEncoderConfig& enc_cfg,
          std::vector<TrainItem> items, spk::EmbeddingCache embeddings);

  StepMetrics step();

  std::uint64_t current_step() const { return step_; }
  const TrainConfig& config() const { return cfg_; }

  model::MultiBandGenerator& generator() { return *generator_; }
  model::UncondDiscriminator& uncond_disc() { return *uncond_; }
  model::CondDiscriminator& cond_disc() { return *cond_; }
  spk::SpeakerEncoder& encoder() { return *encoder_; }
  Rng& rng() { return rng_; }

  // Full training state: model + encoder tensors, optimizer moments, rng
  // state and step counter, so resume reproduces the run bit-identically.
  void save(const std::string& path, const std::string& config_json) const;
  void load(const std::string& path);

 private:
  struct Excerpt;
  Excerpt sample_excerpt();
  StepMetrics pretrain_step();
  StepMetrics joint_step();
  void check_finite_params(const char* stage) const;

  TrainConfig cfg_;
  std::uint64_t step_ = 0;
  Rng rng_;
  std::vector<TrainItem> items_;
  spk::EmbeddingCache embeddings_;
  std::unique_ptr<model::MultiBandGenerator> generator_;
  std::unique_ptr<model::UncondDiscriminator> uncond_;
  std::unique_ptr<model::CondDiscriminator> cond_;
  std::unique_ptr<spk::SpeakerEncoder> encoder_;
  RAdam opt_g_;
  RAdam opt_du_;
  RAdam opt_ds_;
};

// Drives the trainer to total_steps, emitting one tab-separated log record
// per step (step, l_stft, l_spl, l_adv_g, l_adv_d, ms) and checkpoints every
// checkpoint_interval into checkpoint_dir (empty = no checkpoints).
void run_training(Trainer& trainer, std::ostream& log,
                  const std::string& checkpoint_dir,
                  const std::string& config_json);

// One GE2E update over an N-speaker x M-utterance batch of mel excerpts;
// returns the loss before the update. The similarity scale is clamped
// positive afterwards.
double ge2e_train_step(spk::SpeakerEncoder& encoder,
                       const std::vector<std::vector<dsp::MelSpectrogram>>& batch,
                       RAdam& opt);

}  // namespace train
}  // namespace msvoc

#endif  // MSVOC_TRAIN_TRAINER_H_
