// msvoc command-line interface: preprocess, train, synth, bench, eval, stats.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "msvoc/config.h"
#include "msvoc/data/manifest.h"
#include "msvoc/data/melfile.h"
#include "msvoc/data/pitch.h"
#include "msvoc/data/segmentation.h"
#include "msvoc/data/stats.h"
#include "msvoc/data/wav.h"
#include "msvoc/eval/eval.h"
#include "msvoc/model/checkpoint.h"
#include "msvoc/train/trainer.h"

namespace fs = std::filesystem;
using namespace msvoc;

namespace {

RunConfig resolve_config(const std::string& config_path, std::uint64_t seed,
                         bool seed_given) {
  RunConfig cfg;
  if (!config_path.empty()) cfg = load_config(config_path);
  if (seed_given) cfg.train.seed = seed;
  return cfg;
}

// Loads only the tensors belonging to `store` out of a full checkpoint.
void load_subset(model::ParamStore& store,
                 const std::map<std::string, ag::Mat>& tensors) {
  std::map<std::string, ag::Mat> own;
  for (const auto& [name, var] : store.params()) {
    auto it = tensors.find(name);
    if (it == tensors.end())
      throw std::runtime_error("checkpoint is missing parameter " + name);
    own[name] = it->second;
  }
  store.load_values(own);
}

int cmd_preprocess(const RunConfig& cfg, const std::string& manifest_path,
                   const std::string& out_dir) {
  data::Manifest manifest = data::load_manifest(manifest_path);
  fs::create_directories(out_dir);

  Rng rng(cfg.train.seed);
  spk::SpeakerEncoder encoder(cfg.encoder, rng);

  data::Manifest processed;
  spk::EmbeddingCache cache;
  std::size_t failures = 0;
  for (const auto& rec : manifest.records) {
    try {
      dsp::AudioSignal audio = data::load_wav(rec.path);
      std::vector<dsp::AudioSignal> clips;
      for (const auto& range : data::vad_trim(audio))
        for (auto& clip : data::segment(data::slice(audio, range)))
          clips.push_back(std::move(clip));
      int n = 0;
      for (const auto& clip : clips) {
        const std::string id = rec.utterance_id + "_" + std::to_string(n++);
        const std::string wav_path = out_dir + "/" + id + ".wav";
        data::save_wav(wav_path, clip);
        dsp::MelSpectrogram mel = dsp::mel_spectrogram(clip, cfg.mel);
        data::save_mel(out_dir + "/" + id + ".mel", mel);
        cache.entries[id] = encoder.encode(mel).vector.cast<float>();
        processed.records.push_back({id, wav_path, rec.singer_id,
                                     rec.transcript});
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << rec.utterance_id << ": " << e.what() << "\n";
      ++failures;
    }
  }
  if (failures == manifest.records.size() && !manifest.records.empty())
    throw std::runtime_error("preprocess: every input file failed");

  data::save_manifest(out_dir + "/manifest.tsv", processed);
  spk::save_embedding_cache(out_dir + "/embeddings.bin", cache);
  std::cout << "processed " << processed.records.size() << " clips from "
            << manifest.records.size() - failures << " files into " << out_dir
            << "\n";
  return 0;
}

int cmd_train(const RunConfig& cfg, const std::string& manifest_path,
              const std::string& embeddings_path, const std::string& out_dir,
              const std::string& resume_path) {
  data::Manifest manifest = data::load_manifest(manifest_path);
  if (manifest.records.empty())
    throw std::runtime_error("train: empty manifest");
  if (!fs::exists(embeddings_path))
    throw std::runtime_error("train: missing embedding cache " +
                             embeddings_path);
  spk::EmbeddingCache cache = spk::load_embedding_cache(embeddings_path);

  std::vector<train::TrainItem> items;
  for (const auto& rec : manifest.records)
    items.push_back({rec.utterance_id, rec.singer_id,
                     data::load_wav(rec.path)});

  fs::create_directories(out_dir);
  train::Trainer trainer(cfg.train, cfg.generator, cfg.encoder,
                         std::move(items), std::move(cache));
  if (!resume_path.empty()) trainer.load(resume_path);

  const std::string config_json = cfg.to_json();
  std::ofstream log(out_dir + "/train.log",
                    resume_path.empty() ? std::ios::trunc : std::ios::app);
  train::run_training(trainer, log, out_dir, config_json);
  trainer.save(out_dir + "/final.bin", config_json);
  std::cout << "trained to step " << trainer.current_step() << ", wrote "
            << out_dir << "/final.bin\n";
  return 0;
}

int cmd_synth(const std::string& checkpoint_path, const std::string& mel_path,
              const std::string& out_path, std::uint64_t seed) {
  model::Checkpoint ck = model::load_checkpoint(checkpoint_path);
  RunConfig cfg = RunConfig::from_json(ck.config_json);

  Rng init_rng(0);  // weights are overwritten from the checkpoint
  model::MultiBandGenerator generator(cfg.generator, init_rng);
  load_subset(generator.params(), ck.tensors);

  dsp::MelSpectrogram mel = data::load_mel(mel_path);
  if (mel.values.cols() != cfg.mel.num_mels)
    throw std::runtime_error("synth: mel file has " +
                             std::to_string(mel.values.cols()) +
                             " bands, config wants " +
                             std::to_string(cfg.mel.num_mels));
  Rng noise_rng(seed);
  dsp::AudioSignal audio =
      generator.generate(mel, noise_rng, cfg.mel.sample_rate);
  data::save_wav(out_path, audio);
  std::cout << "wrote " << audio.samples.size() << " samples to " << out_path
            << "\n";
  return 0;
}

int cmd_bench(const RunConfig& cfg, int frames, int trials) {
  Rng rng(cfg.train.seed);
  model::MultiBandGenerator multi(cfg.generator, rng);
  // full-rate ablation with the same stack of blocks
  model::SubGeneratorConfig full_cfg = cfg.generator.low;
  full_cfg.dilations.insert(full_cfg.dilations.end(),
                            cfg.generator.high.dilations.begin(),
                            cfg.generator.high.dilations.end());
  model::FullBandGenerator full(full_cfg, cfg.generator.hop_size, rng);

  dsp::MelSpectrogram mel;
  mel.values.setRandom(frames, cfg.mel.num_mels);

  Rng noise_rng(cfg.train.seed + 1);
  eval::RtfReport mb = eval::benchmark_rtf(
      [&] { return multi.generate(mel, noise_rng); }, trials);
  eval::RtfReport fb = eval::benchmark_rtf(
      [&] { return full.generate(mel, noise_rng); }, trials);

  std::cout << "multi-band rtf " << mb.rtf << " (" << mb.synthesis_seconds
            << " s for " << mb.audio_seconds << " s of audio, " << mb.device
            << ")\n";
  std::cout << "full-band rtf " << fb.rtf << "\n";
  std::cout << "---\n";
  std::cout << "rtf_multiband=" << mb.rtf << "\n";
  std::cout << "rtf_fullband=" << fb.rtf << "\n";
  std::cout << "speedup=" << fb.rtf / mb.rtf << "\n";
  std::cout << "device=" << mb.device << "\n";
  std::cout << "trials=" << mb.trials << "\n";
  return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& pairs_path,
             const std::string& checkpoint_path) {
  std::ifstream is(pairs_path);
  if (!is) throw std::runtime_error("eval: cannot open " + pairs_path);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("eval: pair lines must be ref<TAB>syn");
    pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }

  Rng rng(cfg.train.seed);
  spk::SpeakerEncoder encoder(cfg.encoder, rng);
  if (!checkpoint_path.empty()) {
    model::Checkpoint ck = model::load_checkpoint(checkpoint_path);
    load_subset(encoder.params(), ck.tensors);
  }
  eval::SimilarityResult result = eval::eval_similarity(pairs, encoder);
  for (const auto& e : result.errors) std::cerr << "error: " << e << "\n";
  std::cout << "mean cosine similarity " << result.mean << " over "
            << result.pairs << " pairs\n";
  std::cout << "---\n";
  std::cout << "similarity_mean=" << result.mean << "\n";
  std::cout << "pairs=" << result.pairs << "\n";
  return 0;
}

int cmd_stats(const std::string& manifest_path) {
  data::Manifest manifest = data::load_manifest(manifest_path);
  std::cout << data::format_stats(data::corpus_stats(manifest));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-band GAN vocoder toolkit"};
  app.require_subcommand(1);

  std::string config_path, manifest_path, checkpoint_path, out_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  app.add_option("--config", config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "seed for all randomness")
      ->each([&](const std::string&) { seed_given = true; });

  auto* preprocess = app.add_subcommand(
      "preprocess", "VAD-trim, segment, extract mel, build embedding cache");
  preprocess->add_option("--manifest", manifest_path)->required();
  preprocess->add_option("--out", out_path)->required();

  auto* trainc = app.add_subcommand("train", "two-phase vocoder training");
  std::string embeddings_path, resume_path;
  trainc->add_option("--manifest", manifest_path)->required();
  trainc->add_option("--embeddings", embeddings_path)->required();
  trainc->add_option("--out", out_path)->required();
  trainc->add_option("--resume", resume_path, "checkpoint to resume from");

  auto* synth = app.add_subcommand("synth", "mel file to waveform");
  std::string mel_path;
  synth->add_option("--checkpoint", checkpoint_path)->required();
  synth->add_option("--mel", mel_path)->required();
  synth->add_option("--out", out_path)->required();

  auto* bench = app.add_subcommand("bench", "real-time-factor benchmark");
  int frames = 32, trials = 5;
  bench->add_option("--frames", frames, "mel frames per synthesis run");
  bench->add_option("--trials", trials, "timed trials (>= 3)");

  auto* evalc = app.add_subcommand("eval", "speaker-similarity evaluation");
  std::string pairs_path;
  evalc->add_option("--pairs", pairs_path, "TSV of ref<TAB>syn wav paths")
      ->required();
  evalc->add_option("--checkpoint", checkpoint_path,
                    "checkpoint providing encoder weights");

  auto* stats = app.add_subcommand("stats", "corpus pitch/duration report");
  stats->add_option("--manifest", manifest_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = resolve_config(config_path, seed, seed_given);
    if (preprocess->parsed())
      return cmd_preprocess(cfg, manifest_path, out_path);
    if (trainc->parsed())
      return cmd_train(cfg, manifest_path, embeddings_path, out_path,
                       resume_path);
    if (synth->parsed()) return cmd_synth(checkpoint_path, mel_path, out_path,
                                          seed_given ? seed : cfg.train.seed);
    if (bench->parsed()) return cmd_bench(cfg, frames, trials);
    if (evalc->parsed()) return cmd_eval(cfg, pairs_path, checkpoint_path);
    if (stats->parsed()) return cmd_stats(manifest_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
