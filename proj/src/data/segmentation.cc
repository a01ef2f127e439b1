// msvoc/data/segmentation.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/data/segmentation.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msvoc {
namespace data {

namespace {

// Mean-square energy of each full-or-partial frame.
std::vector<double> frame_energy(const dsp::AudioSignal& s,
                                 std::size_t frame_len) {
  const std::size_t n_frames = (s.samples.size() + frame_len - 1) / frame_len;
  std::vector<double> e(n_frames, 0.0);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const std::size_t begin = f * frame_len;
    const std::size_t end = std::min(begin + frame_len, s.samples.size());
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += s.samples[i] * s.samples[i];
    e[f] = acc / static_cast<double>(end - begin);
  }
  return e;
}

}  // namespace

dsp::AudioSignal slice(const dsp::AudioSignal& signal, const SampleRange& r) {
  if (r.end > signal.samples.size() || r.begin > r.end)
    throw std::out_of_range("slice: range outside the signal");
  dsp::AudioSignal out;
  out.sample_rate = signal.sample_rate;
  out.samples.assign(signal.samples.begin() + r.begin,
                     signal.samples.begin() + r.end);
  return out;
}

std::vector<SampleRange> vad_trim(const dsp::AudioSignal& signal,
                                  double threshold_db, int frame_ms) {
  if (signal.samples.empty())
    throw std::invalid_argument("vad_trim: empty signal");
  const std::size_t frame_len = static_cast<std::size_t>(
      signal.sample_rate * frame_ms / 1000);
  std::vector<double> energy = frame_energy(signal, frame_len);

  // 95th-percentile frame RMS as the gain reference
  std::vector<double> sorted = energy;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t p95 =
      std::min(sorted.size() - 1,
               static_cast<std::size_t>(0.95 * (sorted.size() - 1) + 0.5));
  const double ref_rms = std::sqrt(sorted[p95]);
  const double gate = ref_rms * std::pow(10.0, threshold_db / 20.0);

  std::vector<SampleRange> out;
  const std::size_t min_samples = static_cast<std::size_t>(
      signal.sample_rate * 200 / 1000);  // drop segments under 200 ms
  SampleRange cur;
  bool open = false;
  for (std::size_t f = 0; f < energy.size(); ++f) {
    const bool voiced = ref_rms > 0.0 && std::sqrt(energy[f]) > gate;
    const std::size_t begin = f * frame_len;
    const std::size_t end = std::min(begin + frame_len, signal.samples.size());
    if (voiced && !open) {
      cur.begin = begin;
      open = true;
    }
    if (voiced) cur.end = end;
    if (!voiced && open) {
      if (cur.length() >= min_samples) out.push_back(cur);
      open = false;
    }
  }
  if (open && cur.length() >= min_samples) out.push_back(cur);
  return out;
}

std::vector<dsp::AudioSignal> segment(const dsp::AudioSignal& signal,
                                      double max_seconds) {
  if (signal.samples.empty())
    throw std::invalid_argument("segment: empty signal");
  const std::size_t max_samples =
      static_cast<std::size_t>(max_seconds * signal.sample_rate);
  if (max_samples == 0)
    throw std::invalid_argument("segment: max_seconds too small");
  const std::size_t frame_len =
      static_cast<std::size_t>(signal.sample_rate / 10);  // 100 ms

  std::vector<dsp::AudioSignal> out;
  std::vector<SampleRange> stack{{0, signal.samples.size()}};
  // depth-first with the left part processed first keeps output ordered
  while (!stack.empty()) {
    SampleRange r = stack.back();
    stack.pop_back();
    if (r.length() <= max_samples) {
      out.push_back(slice(signal, r));
      continue;
    }
    // lowest-energy interior frame inside this span
    dsp::AudioSignal span = slice(signal, r);
    std::vector<double> energy = frame_energy(span, frame_len);
    if (energy.size() < 3) {  // no interior frame; halve the span instead
      const std::size_t mid = r.begin + r.length() / 2;
      stack.push_back({mid, r.end});
      stack.push_back({r.begin, mid});
      continue;
    }
    std::size_t best = 1;
    for (std::size_t f = 2; f + 1 < energy.size(); ++f)
      if (energy[f] < energy[best]) best = f;
    const std::size_t cut_begin = r.begin + best * frame_len;
    const std::size_t cut_end =
        std::min(cut_begin + frame_len, r.end);  // the split frame is dropped
    stack.push_back({cut_end, r.end});  // right side resumes after the left
    stack.push_back({r.begin, cut_begin});
  }
  // stack discipline above emits left-to-right already; keep clips nonempty
  std::vector<dsp::AudioSignal> clips;
  for (auto& c : out)
    if (!c.samples.empty()) clips.push_back(std::move(c));
  return clips;
}

}  // namespace data
}  // namespace msvoc
