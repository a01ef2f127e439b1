// msvoc/config.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/config.h"

#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace msvoc {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!known.count(key))
      throw std::runtime_error("config: unknown key \"" + key + "\" in " +
                               where);
}

template <typename T>
void get_if(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

void parse_mel(const json& obj, dsp::MelParams& p) {
  reject_unknown(obj,
                 {"fft_size", "hop_size", "window_size", "sample_rate",
                  "num_mels", "fmin", "fmax", "log_floor"},
                 "mel");
  get_if(obj, "fft_size", p.fft_size);
  get_if(obj, "hop_size", p.hop_size);
  get_if(obj, "window_size", p.window_size);
  get_if(obj, "sample_rate", p.sample_rate);
  get_if(obj, "num_mels", p.num_mels);
  get_if(obj, "fmin", p.fmin);
  get_if(obj, "fmax", p.fmax);
  get_if(obj, "log_floor", p.log_floor);
}

void parse_subgen(const json& obj, model::SubGeneratorConfig& c,
                  const std::string& where) {
  reject_unknown(obj,
                 {"dilations", "residual_channels", "skip_channels",
                  "gate_channels", "conditioning_channels", "kernel_size"},
                 where);
  get_if(obj, "dilations", c.dilations);
  get_if(obj, "residual_channels", c.residual_channels);
  get_if(obj, "skip_channels", c.skip_channels);
  get_if(obj, "gate_channels", c.gate_channels);
  get_if(obj, "conditioning_channels", c.conditioning_channels);
  get_if(obj, "kernel_size", c.kernel_size);
}

void parse_generator(const json& obj, model::GeneratorConfig& g) {
  reject_unknown(obj,
                 {"low", "high", "hop_size", "num_bands", "pqmf_taps",
                  "pqmf_cutoff", "pqmf_beta"},
                 "generator");
  if (obj.contains("low")) parse_subgen(obj.at("low"), g.low, "generator.low");
  if (obj.contains("high"))
    parse_subgen(obj.at("high"), g.high, "generator.high");
  get_if(obj, "hop_size", g.hop_size);
  get_if(obj, "num_bands", g.num_bands);
  get_if(obj, "pqmf_taps", g.pqmf_taps);
  get_if(obj, "pqmf_cutoff", g.pqmf_cutoff);
  get_if(obj, "pqmf_beta", g.pqmf_beta);
}

void parse_encoder(const json& obj, spk::SpeakerEncoderConfig& e) {
  reject_unknown(obj,
                 {"lstm_layers", "hidden_size", "projection_size",
                  "mel_bands"},
                 "encoder");
  get_if(obj, "lstm_layers", e.lstm_layers);
  get_if(obj, "hidden_size", e.hidden_size);
  get_if(obj, "projection_size", e.projection_size);
  get_if(obj, "mel_bands", e.mel_bands);
}

void parse_optimizer(const json& obj, train::OptimizerConfig& o,
                     const std::string& where) {
  reject_unknown(obj, {"lr", "beta1", "beta2", "eps", "weight_decay"}, where);
  get_if(obj, "lr", o.lr);
  get_if(obj, "beta1", o.beta1);
  get_if(obj, "beta2", o.beta2);
  get_if(obj, "eps", o.eps);
  get_if(obj, "weight_decay", o.weight_decay);
}

void parse_train(const json& obj, train::TrainConfig& t) {
  reject_unknown(obj,
                 {"pretrain_steps", "total_steps", "batch_size",
                  "segment_length", "optimizer_g", "optimizer_d",
                  "checkpoint_interval", "seed", "stft_resolutions",
                  "lambda_adv", "aux_mix"},
                 "train");
  get_if(obj, "pretrain_steps", t.pretrain_steps);
  get_if(obj, "total_steps", t.total_steps);
  get_if(obj, "batch_size", t.batch_size);
  get_if(obj, "segment_length", t.segment_length);
  if (obj.contains("optimizer_g"))
    parse_optimizer(obj.at("optimizer_g"), t.opt_g, "train.optimizer_g");
  if (obj.contains("optimizer_d"))
    parse_optimizer(obj.at("optimizer_d"), t.opt_d, "train.optimizer_d");
  get_if(obj, "checkpoint_interval", t.checkpoint_interval);
  get_if(obj, "seed", t.seed);
  if (obj.contains("stft_resolutions")) {
    t.stft_loss.resolutions.clear();
    for (const auto& triple : obj.at("stft_resolutions")) {
      if (!triple.is_array() || triple.size() != 3)
        throw std::runtime_error(
            "config: stft_resolutions entries must be [fft, hop, window]");
      t.stft_loss.resolutions.push_back({triple[0].get<int>(),
                                         triple[1].get<int>(),
                                         triple[2].get<int>()});
    }
  }
  get_if(obj, "lambda_adv", t.weights.lambda_adv);
  get_if(obj, "aux_mix", t.weights.aux_mix);
}

}  // namespace

RunConfig RunConfig::from_json(const std::string& text) {
  json root = json::parse(text);
  if (!root.is_object()) throw std::runtime_error("config: not a JSON object");
  reject_unknown(root, {"mel", "generator", "encoder", "train"}, "top level");

  RunConfig cfg;
  if (root.contains("mel")) parse_mel(root.at("mel"), cfg.mel);
  if (root.contains("generator"))
    parse_generator(root.at("generator"), cfg.generator);
  if (root.contains("encoder")) parse_encoder(root.at("encoder"), cfg.encoder);
  if (root.contains("train")) parse_train(root.at("train"), cfg.train);
  return cfg;
}

std::string RunConfig::to_json() const {
  json root;
  root["mel"] = {{"fft_size", mel.fft_size},
                 {"hop_size", mel.hop_size},
                 {"window_size", mel.window_size},
                 {"sample_rate", mel.sample_rate},
                 {"num_mels", mel.num_mels},
                 {"fmin", mel.fmin},
                 {"fmax", mel.fmax},
                 {"log_floor", mel.log_floor}};
  auto subgen = [](const model::SubGeneratorConfig& c) {
    return json{{"dilations", c.dilations},
                {"residual_channels", c.residual_channels},
                {"skip_channels", c.skip_channels},
                {"gate_channels", c.gate_channels},
                {"conditioning_channels", c.conditioning_channels},
                {"kernel_size", c.kernel_size}};
  };
  root["generator"] = {{"low", subgen(generator.low)},
                       {"high", subgen(generator.high)},
                       {"hop_size", generator.hop_size},
                       {"num_bands", generator.num_bands},
                       {"pqmf_taps", generator.pqmf_taps},
                       {"pqmf_cutoff", generator.pqmf_cutoff},
                       {"pqmf_beta", generator.pqmf_beta}};
  root["encoder"] = {{"lstm_layers", encoder.lstm_layers},
                     {"hidden_size", encoder.hidden_size},
                     {"projection_size", encoder.projection_size},
                     {"mel_bands", encoder.mel_bands}};
  json resolutions = json::array();
  for (const auto& r : train.stft_loss.resolutions)
    resolutions.push_back({r.fft_size, r.hop_size, r.window_size});
  auto optimizer = [](const train::OptimizerConfig& o) {
    return json{{"lr", o.lr},
                {"beta1", o.beta1},
                {"beta2", o.beta2},
                {"eps", o.eps},
                {"weight_decay", o.weight_decay}};
  };
  root["train"] = {{"pretrain_steps", train.pretrain_steps},
                   {"total_steps", train.total_steps},
                   {"batch_size", train.batch_size},
                   {"segment_length", train.segment_length},
                   {"optimizer_g", optimizer(train.opt_g)},
                   {"optimizer_d", optimizer(train.opt_d)},
                   {"checkpoint_interval", train.checkpoint_interval},
                   {"seed", train.seed},
                   {"stft_resolutions", resolutions},
                   {"lambda_adv", train.weights.lambda_adv},
                   {"aux_mix", train.weights.aux_mix}};
  return root.dump(2);
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  return RunConfig::from_json(text);
}

}  // namespace msvoc
