// msvoc/eval/eval.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_EVAL_EVAL_H_
#define MSVOC_EVAL_EVAL_H_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "msvoc/dsp/audio.h"
#include "msvoc/spk/encoder.h"

namespace msvoc {
namespace eval {

// A . B / (|A| |B|); throws on a zero vector.
double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct SimilarityResult {
  double mean = 0.0;
  std::size_t pairs = 0;                 // pairs that scored
  std::vector<std::string> errors;       // per-pair failures, run continues
};

// Mean cosine similarity between encoder embeddings of (reference,
// synthetic) WAV pairs. Throws if the pair list is empty or no pair scores.
SimilarityResult eval_similarity(
    const std::vector<std::pair<std::string, std::string>>& wav_pairs,
    const spk::SpeakerEncoder& encoder);

struct RtfReport {
  double synthesis_seconds = 0.0;  // median trial
  double audio_seconds = 0.0;
  double rtf = 0.0;
  std::string device;
  int warmup = 0;
  int trials = 0;
};

// Median-of-trials wall-clock benchmark of a synthesis callable; warmup
// runs are executed and discarded first. trials must be >= 3.
RtfReport benchmark_rtf(const std::function<dsp::AudioSignal()>& synthesize,
                        int trials = 5, int warmup = 1,
                        const std::string& device = "cpu/1 thread");

}  // namespace eval
}  // namespace msvoc

#endif  // MSVOC_EVAL_EVAL_H_
