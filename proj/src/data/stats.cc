// msvoc/data/stats.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/data/stats.h"

#include <cmath>
#include <sstream>

#include "msvoc/data/pitch.h"
#include "msvoc/data/wav.h"

namespace msvoc {
namespace data {

namespace {

struct Accumulator {
  std::size_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double v) {
    ++n;
    sum += v;
    sum_sq += v * v;
  }
  PitchStats finish() const {
    PitchStats p;
    p.voiced_frames = n;
    if (n > 0) {
      p.mean_hz = sum / n;
      const double var = sum_sq / n - p.mean_hz * p.mean_hz;
      p.std_hz = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    return p;
  }
};

}  // namespace

CorpusStats corpus_stats(const Manifest& manifest) {
  CorpusStats stats;
  stats.duration_histogram.assign(13, 0);  // 0-12 s in 1 s bins, 12+ open
  Accumulator corpus_acc;
  std::map<std::string, Accumulator> singer_acc;

  for (const auto& rec : manifest.records) {
    dsp::AudioSignal sig;
    try {
      sig = load_wav(rec.path);
    } catch (const std::exception& e) {
      stats.file_errors.push_back(rec.utterance_id + ": " + e.what());
      continue;
    }
    ++stats.utterances;
    const double seconds = sig.duration_seconds();
    stats.total_seconds += seconds;
    const std::size_t bin =
        std::min<std::size_t>(static_cast<std::size_t>(seconds),
                              stats.duration_histogram.size() - 1);
    ++stats.duration_histogram[bin];

    PitchTrack track = extract_f0(sig);
    Accumulator& singer = singer_acc[rec.singer_id];
    for (double f0 : track.f0_hz) {
      if (f0 <= 0.0) continue;
      corpus_acc.add(f0);
      singer.add(f0);
    }
  }

  stats.corpus_pitch = corpus_acc.finish();
  for (const auto& [singer, acc] : singer_acc)
    stats.singer_pitch[singer] = acc.finish();
  return stats;
}

std::string format_stats(const CorpusStats& stats) {
  std::ostringstream os;
  os << "Corpus statistics\n";
  os << "  utterances: " << stats.utterances << "\n";
  os << "  total audio: " << stats.total_seconds << " s\n";
  os << "  pitch (voiced frames): mean " << stats.corpus_pitch.mean_hz
     << " Hz, std " << stats.corpus_pitch.std_hz << " Hz, frames "
     << stats.corpus_pitch.voiced_frames << "\n";
  os << "  per-singer pitch:\n";
  for (const auto& [singer, p] : stats.singer_pitch)
    os << "    " << singer << ": mean " << p.mean_hz << " Hz, std "
       << p.std_hz << " Hz, frames " << p.voiced_frames << "\n";
  os << "  duration histogram (1 s bins, last open-ended):";
  for (std::size_t c : stats.duration_histogram) os << " " << c;
  os << "\n";
  for (const auto& e : stats.file_errors) os << "  error: " << e << "\n";

  os << "---\n";
  os << "utterances=" << stats.utterances << "\n";
  os << "total_seconds=" << stats.total_seconds << "\n";
  os << "pitch_mean_hz=" << stats.corpus_pitch.mean_hz << "\n";
  os << "pitch_std_hz=" << stats.corpus_pitch.std_hz << "\n";
  os << "voiced_frames=" << stats.corpus_pitch.voiced_frames << "\n";
  for (const auto& [singer, p] : stats.singer_pitch)
    os << "singer." << singer << ".pitch_mean_hz=" << p.mean_hz << "\n";
  os << "errors=" << stats.file_errors.size() << "\n";
  return os.str();
}

}  // namespace data
}  // namespace msvoc
