#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "msvoc/train/trainer.h"

using namespace msvoc;
using namespace msvoc::train;

namespace {

model::GeneratorConfig tiny_generator() {
  model::GeneratorConfig cfg = model::GeneratorConfig::defaults();
  cfg.low.dilations = {1, 2, 4};
  cfg.low.residual_channels = 4;
  cfg.low.skip_channels = 4;
  cfg.low.gate_channels = 8;
  cfg.high.dilations = {1, 2};
  cfg.high.residual_channels = 4;
  cfg.high.skip_channels = 4;
  cfg.high.gate_channels = 8;
  return cfg;
}

spk::SpeakerEncoderConfig tiny_encoder() {
  spk::SpeakerEncoderConfig cfg;
  cfg.lstm_layers = 1;
  cfg.hidden_size = 8;
  return cfg;
}

TrainConfig tiny_train(std::uint64_t pretrain, std::uint64_t total) {
  TrainConfig cfg;
  cfg.pretrain_steps = pretrain;
  cfg.total_steps = total;
  cfg.batch_size = 1;
  cfg.segment_length = 512;
  cfg.checkpoint_interval = 0;
  cfg.seed = 7;
  cfg.stft_loss = losses::StftLossConfig{{{256, 64, 128}}};
  return cfg;
}

std::vector<TrainItem> toy_items() {
  std::vector<TrainItem> items;
  Rng rng(5);
  for (int k = 0; k < 2; ++k) {
    TrainItem item;
    item.utterance_id = "utt" + std::to_string(k);
    item.singer_id = "singer" + std::to_string(k);
    item.audio.samples.resize(1024);
    for (std::size_t i = 0; i < item.audio.samples.size(); ++i)
      item.audio.samples[i] =
          0.4 * std::sin(2.0 * M_PI * (220.0 + 60.0 * k) * i / 24000.0) +
          0.05 * rng.gaussian();
    items.push_back(std::move(item));
  }
  return items;
}

spk::EmbeddingCache toy_cache() {
  spk::EmbeddingCache cache;
  Rng rng(6);
  for (const char* id : {"utt0", "utt1"}) {
    Eigen::VectorXf v(spk::kEmbeddingDim);
    for (int i = 0; i < v.size(); ++i)
      v(i) = static_cast<float>(rng.gaussian());
    v /= v.norm();
    cache.entries[id] = v;
  }
  return cache;
}

Trainer make_trainer(const TrainConfig& cfg) {
  return Trainer(cfg, tiny_generator(), tiny_encoder(), toy_items(),
                 toy_cache());
}

Trainer make_trainer(std::uint64_t pretrain, std::uint64_t total) {
  return make_trainer(tiny_train(pretrain, total));
}

}  // namespace

TEST_CASE("train config validation") {
  TrainConfig bad = tiny_train(10, 5);
  CHECK_THROWS(bad.validate());
  TrainConfig odd = tiny_train(1, 2);
  odd.segment_length = 300;  // not a multiple of 256/512
  CHECK_THROWS(odd.validate());
  CHECK_NOTHROW(tiny_train(1, 2).validate());
}

TEST_CASE("radam: quadratic descent, zero lr, state round trip") {
  Rng rng(1);
  model::ParamStore store;
  ag::Var x = store.create("x", 1, 1, 1.0, rng);
  x->value(0, 0) = 2.0;

  OptimizerConfig cfg;
  cfg.lr = 0.1;
  RAdam opt(cfg);
  for (int i = 0; i < 200; ++i) {
    ag::Var loss = ag::mul(x, x);
    ag::backward(loss);
    opt.step(store);
  }
  CHECK(std::abs(x->value(0, 0)) < 0.5);
  CHECK(opt.steps() == 200);

  // moments survive a dump/load round trip
  RAdam clone(cfg);
  clone.load_state(opt.dump_state());
  CHECK(clone.steps() == 200);
  auto a = opt.dump_state(), b = clone.dump_state();
  REQUIRE(a.size() == b.size());
  for (const auto& [k, m] : a) CHECK((b.at(k) - m).norm() == 0.0);

  OptimizerConfig frozen;
  frozen.lr = 0.0;
  RAdam noop(frozen);
  const double before = x->value(0, 0);
  ag::backward(ag::mul(x, x));
  noop.step(store);
  CHECK(x->value(0, 0) == before);
}

TEST_CASE("pretrain step: generator-only update, adversarial term absent") {
  Trainer trainer = make_trainer(2, 4);
  auto du_before = trainer.uncond_disc().params().dump_values();
  auto ds_before = trainer.cond_disc().params().dump_values();
  auto g_before = trainer.generator().params().dump_values();

  StepMetrics m = trainer.step();
  CHECK(m.pretrain);
  CHECK(m.step == 1);
  CHECK(m.l_adv_g == 0.0);
  CHECK(m.l_adv_d == 0.0);
  CHECK(m.l_stft > 0.0);
  CHECK(m.l_spl > 0.0);

  // discriminators bit-identical, generator moved
  for (const auto& [name, mat] : du_before)
    CHECK((trainer.uncond_disc().params().at(name)->value - mat).norm() == 0.0);
  for (const auto& [name, mat] : ds_before)
    CHECK((trainer.cond_disc().params().at(name)->value - mat).norm() == 0.0);
  double moved = 0.0;
  for (const auto& [name, mat] : g_before)
    moved += (trainer.generator().params().at(name)->value - mat).norm();
  CHECK(moved > 0.0);
}

TEST_CASE("zero learning rate leaves the generator unchanged") {
  TrainConfig cfg = tiny_train(1, 1);
  cfg.opt_g.lr = 0.0;
  Trainer trainer = make_trainer(cfg);
  auto before = trainer.generator().params().dump_values();
  trainer.step();
  for (const auto& [name, mat] : before)
    CHECK((trainer.generator().params().at(name)->value - mat).norm() == 0.0);
}

TEST_CASE("joint step updates generator and both discriminators") {
  Trainer trainer = make_trainer(0, 2);
  auto g = trainer.generator().params().dump_values();
  auto du = trainer.uncond_disc().params().dump_values();
  auto ds = trainer.cond_disc().params().dump_values();

  StepMetrics m = trainer.step();
  CHECK_FALSE(m.pretrain);
  CHECK(m.l_adv_d > 0.0);

  auto moved = [](const std::map<std::string, ag::Mat>& before,
                  model::ParamStore& store) {
    double acc = 0.0;
    for (const auto& [name, mat] : before)
      acc += (store.at(name)->value - mat).norm();
    return acc;
  };
  CHECK(moved(g, trainer.generator().params()) > 0.0);
  CHECK(moved(du, trainer.uncond_disc().params()) > 0.0);
  CHECK(moved(ds, trainer.cond_disc().params()) > 0.0);
}

TEST_CASE("discriminator update leaves a frozen-lr generator untouched") {
  // the D phase must not leak gradients into G: with the generator's own
  // learning rate at 0, a joint step changes D but never G
  TrainConfig cfg = tiny_train(0, 1);
  cfg.opt_g.lr = 0.0;
  Trainer trainer = make_trainer(cfg);
  auto g = trainer.generator().params().dump_values();
  auto du = trainer.uncond_disc().params().dump_values();
  trainer.step();
  for (const auto& [name, mat] : g)
    CHECK((trainer.generator().params().at(name)->value - mat).norm() == 0.0);
  double d_moved = 0.0;
  for (const auto& [name, mat] : du)
    d_moved += (trainer.uncond_disc().params().at(name)->value - mat).norm();
  CHECK(d_moved > 0.0);
}

TEST_CASE("missing embedding fails naming the utterance") {
  TrainConfig cfg = tiny_train(0, 1);
  spk::EmbeddingCache empty;
  Trainer trainer(cfg, tiny_generator(), tiny_encoder(), toy_items(), empty);
  CHECK_THROWS_WITH_AS(trainer.step(), doctest::Contains("utt"),
                       std::runtime_error);
}

TEST_CASE("resume from checkpoint reproduces the run bit-identically") {
  Trainer uninterrupted = make_trainer(2, 5);
  std::vector<StepMetrics> reference;
  for (int i = 0; i < 5; ++i) reference.push_back(uninterrupted.step());

  Trainer first_half = make_trainer(2, 5);
  first_half.step();
  first_half.step();
  first_half.save("t_resume.bin", "{}");

  Trainer resumed = make_trainer(2, 5);
  resumed.load("t_resume.bin");
  CHECK(resumed.current_step() == 2);
  for (int i = 2; i < 5; ++i) {
    StepMetrics m = resumed.step();
    CHECK(m.step == reference[i].step);
    CHECK(m.l_stft == reference[i].l_stft);  // bit-identical trajectory
    CHECK(m.l_spl == reference[i].l_spl);
    CHECK(m.l_adv_g == reference[i].l_adv_g);
    CHECK(m.l_adv_d == reference[i].l_adv_d);
  }
  for (const auto& [name, var] : uninterrupted.generator().params().params())
    CHECK((resumed.generator().params().at(name)->value - var->value).norm() ==
          0.0);
  std::remove("t_resume.bin");
}

TEST_CASE("run_training emits one record per step and checkpoints") {
  TrainConfig cfg = tiny_train(1, 3);
  cfg.checkpoint_interval = 2;
  Trainer trainer = make_trainer(cfg);
  std::ostringstream log;
  run_training(trainer, log, ".", "{}");

  std::istringstream lines(log.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 3);
  CHECK(trainer.current_step() == 3);
  // interval checkpoint at step 2 plus the final-step checkpoint
  std::ifstream c2("ckpt_2.bin"), c3("ckpt_3.bin");
  CHECK(c2.good());
  CHECK(c3.good());
  std::remove("ckpt_2.bin");
  std::remove("ckpt_3.bin");
}

TEST_CASE("ge2e training step lowers the loss on a toy batch") {
  Rng rng(9);
  spk::SpeakerEncoderConfig enc_cfg = tiny_encoder();
  spk::SpeakerEncoder encoder(enc_cfg, rng);

  // two synthetic "voices": distinct stationary mel patterns + jitter
  std::vector<std::vector<dsp::MelSpectrogram>> batch(2);
  for (int n = 0; n < 2; ++n)
    for (int m = 0; m < 2; ++m) {
      dsp::MelSpectrogram mel;
      mel.values.resize(6, 80);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 80; ++j)
          mel.values(i, j) =
              (n == 0 ? std::sin(0.2 * j) : std::cos(0.13 * j)) +
              0.05 * rng.gaussian();
      batch[n].push_back(std::move(mel));
    }

  OptimizerConfig cfg;
  cfg.lr = 1e-3;
  RAdam opt(cfg);
  const double first = ge2e_train_step(encoder, batch, opt);
  double last = first;
  for (int i = 0; i < 40; ++i) last = ge2e_train_step(encoder, batch, opt);
  CHECK(last < first);
  CHECK(encoder.ge2e_scale()->value(0, 0) > 0.0);
}
