// Acceptance suite: one self-contained check per release criterion, each
// printing a single PASS/FAIL line. Exit status is the number of failures.
//
// The training and benchmark checks run scaled-down model configurations so
// the whole suite finishes in minutes on one CPU core; the discriminators,
// loss definitions, and data pipeline run at their production settings.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.h"
#include "msvoc/data/pitch.h"
#include "msvoc/data/segmentation.h"
#include "msvoc/eval/eval.h"
#include "msvoc/losses/losses.h"
#include "msvoc/model/checkpoint.h"
#include "msvoc/train/trainer.h"

using namespace msvoc;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok,
            const std::string& detail) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << number << ". " << name << ": "
            << detail << "\n";
  if (!ok) ++g_failures;
}

void run(int number, const std::string& name,
         const std::function<std::pair<bool, std::string>()>& check) {
  try {
    auto [ok, detail] = check();
    report(number, name, ok, detail);
  } catch (const std::exception& e) {
    report(number, name, false, std::string("exception: ") + e.what());
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

dsp::AudioSignal sine(double freq, double seconds, double amp = 0.5) {
  dsp::AudioSignal s;
  const std::size_t n = static_cast<std::size_t>(seconds * 24000);
  s.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    s.samples[i] = amp * std::sin(2.0 * M_PI * freq * i / 24000.0);
  return s;
}

dsp::AudioSignal noise_signal(double seconds, Rng& rng, double amp = 0.5) {
  dsp::AudioSignal s;
  s.samples.resize(static_cast<std::size_t>(seconds * 24000));
  for (auto& v : s.samples) v = std::clamp(amp * rng.gaussian(), -1.0, 1.0);
  return s;
}

// Reduced generator for the training smoke tests: same architecture, fewer
// and narrower blocks.
model::GeneratorConfig small_generator() {
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

spk::SpeakerEncoderConfig small_encoder() {
  spk::SpeakerEncoderConfig cfg;
  cfg.lstm_layers = 1;
  cfg.hidden_size = 16;
  return cfg;
}

train::TrainConfig smoke_train(std::uint64_t pretrain, std::uint64_t total,
                               std::uint64_t seed) {
  train::TrainConfig cfg;
  cfg.pretrain_steps = pretrain;
  cfg.total_steps = total;
  cfg.segment_length = 512;
  cfg.checkpoint_interval = 0;
  cfg.seed = seed;
  cfg.stft_loss = losses::StftLossConfig{{{256, 64, 128}}};
  return cfg;
}

spk::EmbeddingCache unit_embeddings(const std::vector<std::string>& ids,
                                    std::uint64_t seed) {
  spk::EmbeddingCache cache;
  Rng rng(seed);
  for (const auto& id : ids) {
    Eigen::VectorXf v(spk::kEmbeddingDim);
    for (int i = 0; i < v.size(); ++i)
      v(i) = static_cast<float>(rng.gaussian());
    cache.entries[id] = v / v.norm();
  }
  return cache;
}

// Deterministic gaussian matrix; finite-difference checks need inputs whose
// activations sit clear of the relu/leaky-relu kinks, so the seeds used in
// c4 are fixed rather than drawn from a shared stream.
ag::Mat randmat(std::uint64_t seed, int rows, int cols, double scale) {
  Rng rng(seed);
  ag::Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scale * rng.gaussian();
  return m;
}

ag::Var scores(std::initializer_list<double> vals) {
  ag::Mat m(1, static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double v : vals) m(0, i++) = v;
  return ag::constant(m);
}

double mean_uncond_score(const model::UncondDiscriminator& disc,
                         const dsp::AudioSignal& wave) {
  ag::Var s = disc.forward(losses::wave_node(wave));
  return s->value.mean();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// --- criteria -------------------------------------------------------------

std::pair<bool, std::string> c1_pqmf_round_trip() {
  const auto t0 = std::chrono::steady_clock::now();
  dsp::PqmfBank bank = dsp::design_pqmf();

  Rng rng(1);
  dsp::AudioSignal noise = noise_signal(1.0, rng, 0.3);
  dsp::AudioSignal sweep;  // 100 Hz to 10 kHz linear chirp over 1 s
  sweep.samples.resize(24000);
  for (std::size_t i = 0; i < sweep.samples.size(); ++i) {
    const double t = static_cast<double>(i) / 24000.0;
    sweep.samples[i] =
        0.5 * std::sin(2.0 * M_PI * (100.0 * t + 0.5 * 9900.0 * t * t));
  }

  auto snr = [&bank](const dsp::AudioSignal& x) {
    dsp::AudioSignal y = dsp::pqmf_synthesis(dsp::pqmf_analysis(x, bank), bank);
    return msvoc_test::snr_db(x.samples, y.samples, bank.round_trip_delay());
  };
  const double snr_noise = snr(noise);
  const double snr_sweep = snr(sweep);
  const double elapsed = seconds_since(t0);

  const bool ok = snr_noise >= 40.0 && snr_sweep >= 40.0 && elapsed < 1.0;
  return {ok, "noise " + fmt(snr_noise) + " dB, sweep " + fmt(snr_sweep) +
                  " dB, " + fmt(elapsed) + " s"};
}

std::pair<bool, std::string> c2_loss_identities() {
  const losses::StftLossConfig stft = losses::StftLossConfig::defaults();
  Rng enc_rng(2);
  spk::SpeakerEncoder encoder(spk::SpeakerEncoderConfig{}, enc_rng);

  double worst_identity = 0.0, worst_scaling = 0.0;
  for (std::uint64_t seed : {11u, 22u, 33u}) {
    Rng rng(seed);
    dsp::AudioSignal sig;
    sig.samples.resize(4096);
    for (auto& v : sig.samples) v = 0.5 * rng.gaussian();
    ag::Var x = losses::wave_node(sig);
    dsp::AudioSignal sig2 = sig;
    for (auto& v : sig2.samples) v *= 2.0;
    ag::Var x2 = losses::wave_node(sig2);

    for (const auto& res : stft.resolutions) {
      worst_identity = std::max(
          worst_identity,
          std::abs(losses::spectral_convergence(x, x, res)->value(0, 0)));
      worst_identity = std::max(
          worst_identity,
          std::abs(losses::log_stft_magnitude_loss(x, x, res)->value(0, 0)));
      worst_scaling = std::max(
          worst_scaling,
          std::abs(losses::spectral_convergence(x, x2, res)->value(0, 0) -
                   1.0));
      worst_scaling = std::max(
          worst_scaling,
          std::abs(losses::log_stft_magnitude_loss(x, x2, res)->value(0, 0) -
                   std::log(2.0)));
    }
    worst_identity =
        std::max(worst_identity,
                 std::abs(losses::multi_res_stft_loss(x, x, stft)->value(0, 0)));
    worst_identity = std::max(
        worst_identity,
        std::abs(losses::singer_perceptual_loss(x, x, encoder)->value(0, 0)));
    worst_scaling = std::max(
        worst_scaling,
        std::abs(losses::multi_res_stft_loss(x, x2, stft)->value(0, 0) -
                 (1.0 + std::log(2.0))));
  }
  const bool ok = worst_identity < 1e-6 && worst_scaling < 1e-5;
  return {ok, "identity err " + fmt(worst_identity) + ", scaling err " +
                  fmt(worst_scaling) + " (3 seeds)"};
}

std::pair<bool, std::string> c3_substitutions() {
  auto d = [](double dr, double df, double dsr, double dsf) {
    return losses::jcu_discriminator_loss(scores({dr}), scores({df}),
                                          scores({dsr}), scores({dsf}))
        ->value(0, 0);
  };
  auto g = [](double df, double dsf) {
    return losses::jcu_generator_loss(scores({df}), scores({dsf}))
        ->value(0, 0);
  };
  double err = 0.0;
  err = std::max(err, std::abs(d(0.5, 0.5, 0.5, 0.5) - 0.5));
  err = std::max(err, std::abs(d(1.0, 0.0, 1.0, 0.0) - 0.0));
  err = std::max(err, std::abs(d(0.8, 0.3, 0.9, 0.2) - 0.09));
  err = std::max(err, std::abs(g(1.0, 1.0) - 0.0));
  err = std::max(err, std::abs(g(0.0, 0.0) - 1.0));
  err = std::max(err, std::abs(g(0.5, 0.5) - 0.25));
  return {err < 1e-12, "max substitution error " + fmt(err)};
}

std::pair<bool, std::string> c4_gradient_checks() {
  double worst = 0.0;
  auto check = [&worst](const ag::Var& leaf,
                        const std::function<double(const ag::Var&)>& f,
                        const ag::Var& loss) {
    ag::backward(loss);
    worst = std::max(worst, msvoc_test::max_rel_err(
                                leaf->grad, msvoc_test::numeric_grad(f, leaf)));
  };

  {  // WaveNet block, gradient with respect to its input
    model::SubGeneratorConfig cfg;
    cfg.residual_channels = 2;
    cfg.skip_channels = 2;
    cfg.gate_channels = 4;
    cfg.conditioning_channels = 3;
    model::ParamStore store;
    Rng rng(41);
    model::WaveNetBlock block(store, "blk", cfg, 2, rng);
    ag::Var x = ag::param(randmat(21, 2, 8, 0.3));
    ag::Var cond = ag::constant(randmat(22, 3, 8, 0.3));
    auto f = [&](const ag::Var& v) {
      auto out = block.forward(v, cond);
      return ag::add(ag::sum(ag::mul(out.skip, out.skip)),
                     ag::sum(ag::mul(out.residual, out.residual)))
          ->value(0, 0);
    };
    auto out = block.forward(x, cond);
    check(x, f,
          ag::add(ag::sum(ag::mul(out.skip, out.skip)),
                  ag::sum(ag::mul(out.residual, out.residual))));
  }
  {  // unconditional discriminator at production size
    Rng rng(40);
    model::UncondDiscriminator disc(rng);
    ag::Var wave = ag::param(randmat(3, 1, 160, 0.3));
    auto f = [&](const ag::Var& v) {
      return ag::sum(ag::mul(disc.forward(v), disc.forward(v)))->value(0, 0);
    };
    ag::Var s = disc.forward(wave);
    check(wave, f, ag::sum(ag::mul(s, s)));
  }
  {  // conditional discriminator at production size
    Rng rng(42);
    model::CondDiscriminator disc(rng);
    ag::Var wave = ag::param(randmat(23, 1, 256, 0.3));
    ag::Mat e = randmat(24, spk::kEmbeddingDim, 1, 1.0);
    ag::Var emb = ag::constant(e / e.norm());
    auto f = [&](const ag::Var& v) {
      return disc.forward(v, emb)->value(0, 0);
    };
    check(wave, f, disc.forward(wave, emb));
  }
  {  // the four objectives: L_stft, L_spl, Eq. 1, Eq. 2
    losses::StftLossConfig stft{{{64, 16, 32}}};
    ag::Mat base = randmat(25, 1, 128, 0.4);
    ag::Var xr = ag::constant(base + randmat(26, 1, 128, 0.2));
    ag::Var y = ag::param(base);
    auto f_stft = [&](const ag::Var& v) {
      return losses::multi_res_stft_loss(xr, v, stft)->value(0, 0);
    };
    check(y, f_stft, losses::multi_res_stft_loss(xr, y, stft));

    spk::SpeakerEncoderConfig enc_cfg;
    enc_cfg.lstm_layers = 1;
    enc_cfg.hidden_size = 4;
    Rng rng(43);
    spk::SpeakerEncoder encoder(enc_cfg, rng);
    ag::Mat wide = randmat(27, 1, 512, 0.4);
    ag::Var xs = ag::constant(wide + randmat(28, 1, 512, 0.2));
    ag::Var ys = ag::param(wide);
    auto f_spl = [&](const ag::Var& v) {
      return losses::singer_perceptual_loss(xs, v, encoder)->value(0, 0);
    };
    check(ys, f_spl, losses::singer_perceptual_loss(xs, ys, encoder));

    ag::Var dr = ag::param(ag::Mat::Constant(1, 3, 0.7));
    ag::Var df = ag::param(ag::Mat::Constant(1, 3, 0.4));
    ag::Var dsr = ag::constant(ag::Mat::Constant(1, 1, 0.8));
    ag::Var dsf = ag::constant(ag::Mat::Constant(1, 1, 0.3));
    auto f_d = [&](const ag::Var&) {
      return losses::jcu_discriminator_loss(dr, df, dsr, dsf)->value(0, 0);
    };
    check(dr, f_d, losses::jcu_discriminator_loss(dr, df, dsr, dsf));
    auto f_g = [&](const ag::Var&) {
      return losses::jcu_generator_loss(df, dsf)->value(0, 0);
    };
    check(df, f_g, losses::jcu_generator_loss(df, dsf));
  }
  return {worst < 1e-3, "max relative gradient error " + fmt(worst)};
}

std::pair<bool, std::string> c5_architecture() {
  Rng rng(5);
  bool ok = model::UncondDiscriminator::kLayers == 10 &&
            model::UncondDiscriminator::kChannels == 64 &&
            model::UncondDiscriminator::kKernel == 5 &&
            model::UncondDiscriminator::kReceptiveField == 153 &&
            model::UncondDiscriminator::dilations() ==
                std::vector<int>{1, 1, 2, 3, 4, 5, 6, 7, 8, 1} &&
            model::CondDiscriminator::kDownsampleFactor == 256 &&
            4096 / model::CondDiscriminator::kDownsampleFactor == 16;

  // behavioral receptive field: output at column 200 reacts to input 76
  // samples away but not 77
  model::UncondDiscriminator disc(rng);
  ag::Mat wave = 0.3 * ag::Mat::Random(1, 400);
  const double base = disc.forward(ag::constant(wave))->value(0, 200);
  ag::Mat inside = wave, outside = wave;
  inside(0, 200 - 76) += 1.0;
  outside(0, 200 - 77) += 1.0;
  ok = ok && disc.forward(ag::constant(inside))->value(0, 200) != base &&
       disc.forward(ag::constant(outside))->value(0, 200) == base;

  // conditional discriminator consumes a 4096-sample excerpt end to end
  model::CondDiscriminator cond(rng);
  ag::Mat e = ag::Mat::Random(spk::kEmbeddingDim, 1);
  ag::Var score = cond.forward(ag::constant(0.3 * ag::Mat::Random(1, 4096)),
                               ag::constant(e / e.norm()));
  ok = ok && score->value.rows() == 1 && score->value.cols() == 1 &&
       score->value(0, 0) >= 0.0;
  return {ok, "uncond 10x64xk5 rf153, cond 256x downsampling"};
}

std::pair<bool, std::string> c6_overfit_smoke() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<train::TrainItem> items;
  dsp::AudioSignal clip = sine(220.0, 1.0, 0.4);
  for (std::size_t i = 0; i < clip.samples.size(); ++i)
    clip.samples[i] += 0.2 * std::sin(2.0 * M_PI * 440.0 * i / 24000.0);
  items.push_back({"clip", "singer", clip});

  // a notch more capacity and learning rate than the other smoke tests, so
  // one clip is memorizable within the 500-step budget
  model::GeneratorConfig gen = small_generator();
  gen.low.dilations = {1, 2, 4, 8};
  gen.high.dilations = {1, 2, 4};
  gen.low.residual_channels = gen.low.skip_channels = 16;
  gen.high.residual_channels = gen.high.skip_channels = 16;
  gen.low.gate_channels = gen.high.gate_channels = 32;
  train::TrainConfig cfg = smoke_train(500, 500, 11);
  cfg.opt_g.lr = 5e-3;
  train::Trainer trainer(cfg, gen, small_encoder(), items,
                         unit_embeddings({"clip"}, 1));
  std::vector<double> l_stft;
  for (int i = 0; i < 500; ++i) l_stft.push_back(trainer.step().l_stft);

  auto avg = [](auto begin, auto end) {
    return std::accumulate(begin, end, 0.0) / std::distance(begin, end);
  };
  const double head = avg(l_stft.begin(), l_stft.begin() + 5);
  const double tail = avg(l_stft.end() - 5, l_stft.end());
  const double elapsed = seconds_since(t0);
  const bool ok = tail < 0.5 * head && elapsed < 600.0;
  return {ok, "l_stft " + fmt(head) + " -> " + fmt(tail) + " over 500 steps, " +
                  fmt(elapsed) + " s"};
}

std::pair<bool, std::string> c7_adversarial_smoke() {
  std::vector<train::TrainItem> items;
  std::vector<std::string> ids;
  Rng jitter(7);
  const double freqs[4] = {196.0, 262.0, 330.0, 392.0};
  for (int k = 0; k < 4; ++k) {
    train::TrainItem item;
    item.utterance_id = "utt" + std::to_string(k);
    item.singer_id = k < 2 ? "singer_a" : "singer_b";
    item.audio = sine(freqs[k], 1.0, 0.4);
    for (auto& v : item.audio.samples) v += 0.02 * jitter.gaussian();
    ids.push_back(item.utterance_id);
    items.push_back(std::move(item));
  }

  train::TrainConfig cfg = smoke_train(0, 500, 13);
  cfg.opt_d.lr = 2e-4;  // reach separation within the smoke budget
  train::Trainer trainer(cfg, small_generator(), small_encoder(), items,
                         unit_embeddings(ids, 2));
  for (int i = 0; i < 500; ++i) trainer.step();  // throws on NaN parameters

  double real_mean = 0.0, fake_mean = 0.0;
  Rng noise(99);
  for (const auto& item : items) {
    dsp::AudioSignal real;
    real.samples.assign(item.audio.samples.begin(),
                        item.audio.samples.begin() + 512);
    dsp::MelSpectrogram mel = dsp::mel_spectrogram(real, dsp::MelParams{});
    dsp::AudioSignal fake = trainer.generator().generate(mel, noise);
    real_mean += mean_uncond_score(trainer.uncond_disc(), real) / 4.0;
    fake_mean += mean_uncond_score(trainer.uncond_disc(), fake) / 4.0;
  }
  bool finite = true;
  for (const auto& [name, mat] :
       trainer.generator().params().dump_values())
    finite = finite && mat.allFinite();
  for (const auto& [name, mat] :
       trainer.uncond_disc().params().dump_values())
    finite = finite && mat.allFinite();
  for (const auto& [name, mat] : trainer.cond_disc().params().dump_values())
    finite = finite && mat.allFinite();

  const bool ok = real_mean > fake_mean && finite;
  return {ok, "real " + fmt(real_mean) + " vs fake " + fmt(fake_mean) +
                  " after 500 joint steps" + (finite ? "" : ", NaN params")};
}

std::pair<bool, std::string> c8_speaker_separation() {
  Rng rng(8);
  spk::SpeakerEncoderConfig cfg = small_encoder();
  spk::SpeakerEncoder encoder(cfg, rng);

  // four synthetic voice profiles: distinct stationary spectral envelopes
  auto make_mel = [&rng](int profile) {
    dsp::MelSpectrogram mel;
    mel.values.resize(8, 80);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 80; ++j)
        mel.values(i, j) = std::sin(0.07 * (profile + 1) * j + 0.5 * profile) +
                           0.05 * rng.gaussian();
    return mel;
  };
  std::vector<std::vector<dsp::MelSpectrogram>> batch(4);
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 3; ++m) batch[n].push_back(make_mel(n));

  train::OptimizerConfig opt_cfg;
  opt_cfg.lr = 1e-3;
  train::RAdam opt(opt_cfg);
  for (int i = 0; i < 200; ++i) train::ge2e_train_step(encoder, batch, opt);

  std::vector<std::vector<Eigen::VectorXd>> emb(4);
  for (int n = 0; n < 4; ++n)
    for (const auto& mel : batch[n])
      emb[n].push_back(encoder.encode(mel).vector);
  double within = 0.0, cross = 0.0;
  int nw = 0, nc = 0;
  for (int a = 0; a < 4; ++a)
    for (std::size_t i = 0; i < emb[a].size(); ++i)
      for (int b = 0; b < 4; ++b)
        for (std::size_t j = 0; j < emb[b].size(); ++j) {
          if (a == b && i >= j) continue;
          if (a > b) continue;
          const double c = eval::cosine_similarity(emb[a][i], emb[b][j]);
          if (a == b) {
            within += c;
            ++nw;
          } else {
            cross += c;
            ++nc;
          }
        }
  within /= nw;
  cross /= nc;
  const bool ok = within - cross >= 0.1;
  return {ok, "within " + fmt(within) + " vs cross " + fmt(cross) +
                  " after 200 GE2E steps"};
}

std::pair<bool, std::string> c9_multiband_speedup() {
  Rng rng(9);
  model::GeneratorConfig cfg = model::GeneratorConfig::defaults();
  cfg.low.dilations = {1, 2, 4, 8, 16, 32};
  cfg.low.residual_channels = 32;
  cfg.low.skip_channels = 32;
  cfg.low.gate_channels = 64;
  cfg.high.dilations = {1, 2, 4};
  cfg.high.residual_channels = 32;
  cfg.high.skip_channels = 32;
  cfg.high.gate_channels = 64;
  model::MultiBandGenerator multi(cfg, rng);

  model::SubGeneratorConfig full_cfg = cfg.low;  // matched block budget
  full_cfg.dilations.insert(full_cfg.dilations.end(),
                            cfg.high.dilations.begin(),
                            cfg.high.dilations.end());
  model::FullBandGenerator full(full_cfg, cfg.hop_size, rng);

  dsp::MelSpectrogram mel;
  mel.values.setRandom(32, 80);
  Rng noise(10);
  eval::RtfReport mb =
      eval::benchmark_rtf([&] { return multi.generate(mel, noise); }, 3);
  eval::RtfReport fb =
      eval::benchmark_rtf([&] { return full.generate(mel, noise); }, 3);
  const double ratio = fb.rtf / mb.rtf;
  return {ratio >= 2.0, "full-band/multi-band rtf ratio " + fmt(ratio) + " (" +
                            fmt(fb.rtf) + " / " + fmt(mb.rtf) + ")"};
}

std::pair<bool, std::string> c10_determinism() {
  // fixed-seed synthesis is bit-reproducible, also via a saved checkpoint
  std::vector<train::TrainItem> items;
  items.push_back({"clip", "singer", sine(220.0, 0.5, 0.4)});
  model::GeneratorConfig gen_cfg = small_generator();
  train::Trainer trainer(smoke_train(2, 5, 17), gen_cfg, small_encoder(),
                         items, unit_embeddings({"clip"}, 3));
  trainer.step();
  trainer.save("t_acc_ckpt.bin", "{}");

  dsp::MelSpectrogram mel;
  mel.values.setRandom(6, 80);
  Rng n1(3), n2(3);
  dsp::AudioSignal a = trainer.generator().generate(mel, n1);
  dsp::AudioSignal b = trainer.generator().generate(mel, n2);
  bool synth_ok = a.samples == b.samples;

  model::Checkpoint ck = model::load_checkpoint("t_acc_ckpt.bin");
  Rng init(0);
  model::MultiBandGenerator restored(gen_cfg, init);
  std::map<std::string, ag::Mat> own;
  for (const auto& [name, var] : restored.params().params())
    own[name] = ck.tensors.at(name);
  restored.params().load_values(own);
  Rng n3(3);
  synth_ok = synth_ok && restored.generate(mel, n3).samples == a.samples;
  std::remove("t_acc_ckpt.bin");

  // resumed training replays the uninterrupted loss trajectory exactly
  auto fresh = [&] {
    return train::Trainer(smoke_train(2, 5, 17), gen_cfg, small_encoder(),
                          items, unit_embeddings({"clip"}, 3));
  };
  train::Trainer straight = fresh();
  std::vector<train::StepMetrics> ref;
  for (int i = 0; i < 5; ++i) ref.push_back(straight.step());

  train::Trainer half = fresh();
  half.step();
  half.step();
  half.save("t_acc_resume.bin", "{}");
  train::Trainer resumed = fresh();
  resumed.load("t_acc_resume.bin");
  bool resume_ok = resumed.current_step() == 2;
  for (int i = 2; i < 5; ++i) {
    train::StepMetrics m = resumed.step();
    resume_ok = resume_ok && m.l_stft == ref[i].l_stft &&
                m.l_spl == ref[i].l_spl && m.l_adv_g == ref[i].l_adv_g &&
                m.l_adv_d == ref[i].l_adv_d;
  }
  std::remove("t_acc_resume.bin");

  const bool ok = synth_ok && resume_ok;
  return {ok, std::string("seeded synthesis ") +
                  (synth_ok ? "bit-identical" : "diverged") + ", resume " +
                  (resume_ok ? "bit-identical" : "diverged")};
}

std::pair<bool, std::string> c11_data_pipeline() {
  // tone / 1 s silence / tone -> exactly two segments, +-1 frame boundaries
  dsp::AudioSignal tst = sine(440.0, 1.0, 0.4);
  tst.samples.insert(tst.samples.end(), 24000, 0.0);
  dsp::AudioSignal tail = sine(440.0, 1.0, 0.4);
  tst.samples.insert(tst.samples.end(), tail.samples.begin(),
                     tail.samples.end());
  auto vad = data::vad_trim(tst, -60.0);
  const long frame = 2400;
  bool vad_ok = vad.size() == 2 && vad[0].begin == 0 &&
                std::labs(static_cast<long>(vad[0].end) - 24000L) <= frame &&
                std::labs(static_cast<long>(vad[1].begin) - 48000L) <= frame &&
                vad[1].end == tst.samples.size();

  Rng rng(11);
  bool seg_ok = true;
  for (const auto& clip : data::segment(noise_signal(30.0, rng, 0.3)))
    seg_ok = seg_ok && clip.samples.size() <= 11u * 24000u;

  data::PitchTrack track = data::extract_f0(sine(220.0, 1.0, 0.4));
  std::vector<double> voiced;
  for (double f : track.f0_hz)
    if (f > 0.0) voiced.push_back(f);
  std::sort(voiced.begin(), voiced.end());
  const double median =
      voiced.empty() ? 0.0 : voiced[voiced.size() / 2];
  const bool f0_ok = std::abs(median - 220.0) <= 1.0;

  const bool ok = vad_ok && seg_ok && f0_ok;
  return {ok, std::string("vad ") + (vad_ok ? "2 segments" : "wrong") +
                  ", clips <= 11 s " + (seg_ok ? "yes" : "no") +
                  ", f0 median " + fmt(median) + " Hz"};
}

}  // namespace

int main() {
  run(1, "pqmf round trip >= 40 dB", c1_pqmf_round_trip);
  run(2, "analytic loss identities", c2_loss_identities);
  run(3, "adversarial loss substitutions", c3_substitutions);
  run(4, "gradient checks", c4_gradient_checks);
  run(5, "discriminator architecture conformance", c5_architecture);
  run(6, "overfit smoke test", c6_overfit_smoke);
  run(7, "adversarial smoke test", c7_adversarial_smoke);
  run(8, "speaker encoder separation", c8_speaker_separation);
  run(9, "multi-band speedup", c9_multiband_speedup);
  run(10, "determinism", c10_determinism);
  run(11, "data pipeline", c11_data_pipeline);

  std::cout << (g_failures == 0 ? "all criteria passed"
                                : std::to_string(g_failures) +
                                      " criteria failed")
            << "\n";
  return g_failures;
}
