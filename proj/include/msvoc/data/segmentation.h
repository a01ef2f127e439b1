// msvoc/data/segmentation.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_DATA_SEGMENTATION_H_
#define MSVOC_DATA_SEGMENTATION_H_

#include <cstddef>
#include <vector>

#include "msvoc/dsp/audio.h"

namespace msvoc {
namespace data {

// Half-open sample range [begin, end) within the source signal.
struct SampleRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
};

// Energy VAD over 100 ms frames. A frame is voiced when its RMS exceeds the
// 95th-percentile frame RMS scaled by threshold_db (so the decision is
// gain-invariant). Adjacent voiced frames merge; segments under 200 ms drop.
std::vector<SampleRange> vad_trim(const dsp::AudioSignal& signal,
                                  double threshold_db = -40.0,
                                  int frame_ms = 100);

// Splits any span longer than max_seconds at its lowest-energy interior
// 100 ms frame (the split frame itself is dropped), recursively, so every
// emitted clip is at most max_seconds long and ordering is preserved.
// Lyric-aligned separation marks would be the natural split points; without
// transcripts the energy minimum stands in for them.
std::vector<dsp::AudioSignal> segment(const dsp::AudioSignal& signal,
                                      double max_seconds = 11.0);

// Slice helper shared by the pipeline.
dsp::AudioSignal slice(const dsp::AudioSignal& signal, const SampleRange& r);

}  // namespace data
}  // namespace msvoc

#endif  // MSVOC_DATA_SEGMENTATION_H_
