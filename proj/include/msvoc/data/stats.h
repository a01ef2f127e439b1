// msvoc/data/stats.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_DATA_STATS_H_
#define MSVOC_DATA_STATS_H_

#include <map>
#include <string>
#include <vector>

#include "msvoc/data/manifest.h"

namespace msvoc {
namespace data {

struct PitchStats {
  std::size_t voiced_frames = 0;
  double mean_hz = 0.0;
  double std_hz = 0.0;
};

struct CorpusStats {
  std::size_t utterances = 0;
  double total_seconds = 0.0;
  PitchStats corpus_pitch;
  std::map<std::string, PitchStats> singer_pitch;
  // histogram of utterance durations in 1 s bins; the last bin is open-ended
  std::vector<std::size_t> duration_histogram;
  std::vector<std::string> file_errors;  // per-file failures, run continues
};

CorpusStats corpus_stats(const Manifest& manifest);

// Human-readable report followed by a machine-parsable key=value section.
std::string format_stats(const CorpusStats& stats);

}  // namespace data
}  // namespace msvoc

#endif  // MSVOC_DATA_STATS_H_
