// msvoc/eval/eval.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/eval/eval.h"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "msvoc/data/wav.h"
#include "msvoc/dsp/mel.h"

namespace msvoc {
namespace eval {

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("cosine_similarity: dimension mismatch");
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0)
    throw std::invalid_argument("cosine_similarity: zero vector");
  return a.dot(b) / (na * nb);
}

SimilarityResult eval_similarity(
    const std::vector<std::pair<std::string, std::string>>& wav_pairs,
    const spk::SpeakerEncoder& encoder) {
  if (wav_pairs.empty())
    throw std::invalid_argument("eval_similarity: empty pair list");
  SimilarityResult result;
  double sum = 0.0;
  for (const auto& [ref_path, syn_path] : wav_pairs) {
    try {
      spk::SingerEmbedding ref =
          encoder.encode(dsp::mel_spectrogram(data::load_wav(ref_path)));
      spk::SingerEmbedding syn =
          encoder.encode(dsp::mel_spectrogram(data::load_wav(syn_path)));
      sum += cosine_similarity(ref.vector, syn.vector);
      ++result.pairs;
    } catch (const std::exception& e) {
      result.errors.push_back(ref_path + " vs " + syn_path + ": " + e.what());
    }
  }
  if (result.pairs == 0)
    throw std::runtime_error("eval_similarity: every pair failed");
  result.mean = sum / static_cast<double>(result.pairs);
  return result;
}

RtfReport benchmark_rtf(const std::function<dsp::AudioSignal()>& synthesize,
                        int trials, int warmup, const std::string& device) {
  if (trials < 3)
    throw std::invalid_argument("benchmark_rtf: need at least 3 trials");
  for (int i = 0; i < warmup; ++i) synthesize();

  std::vector<double> seconds;
  double audio_seconds = 0.0;
  for (int i = 0; i < trials; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    dsp::AudioSignal out = synthesize();
    const auto t1 = std::chrono::steady_clock::now();
    seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    audio_seconds = out.duration_seconds();
  }
  std::sort(seconds.begin(), seconds.end());
  const double median = seconds[seconds.size() / 2];
  if (audio_seconds <= 0.0)
    throw std::runtime_error("benchmark_rtf: synthesized zero audio");

  RtfReport report;
  report.synthesis_seconds = median;
  report.audio_seconds = audio_seconds;
  report.rtf = median / audio_seconds;
  report.device = device;
  report.warmup = warmup;
  report.trials = trials;
  return report;
}

}  // namespace eval
}  // namespace msvoc
