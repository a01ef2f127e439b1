// msvoc/data/melfile.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/data/melfile.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace msvoc {
namespace data {

namespace {
constexpr char kMagic[8] = {'M', 'S', 'V', 'O', 'C', 'M', 'E', 'L'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_mel(const std::string& path, const dsp::MelSpectrogram& mel) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("mel file: cannot write " + path);
  os.write(kMagic, sizeof(kMagic));
  const std::uint32_t version = kVersion;
  const std::uint32_t frames = static_cast<std::uint32_t>(mel.values.rows());
  const std::uint32_t bands = static_cast<std::uint32_t>(mel.values.cols());
  os.write(reinterpret_cast<const char*>(&version), sizeof(version));
  os.write(reinterpret_cast<const char*>(&frames), sizeof(frames));
  os.write(reinterpret_cast<const char*>(&bands), sizeof(bands));
  for (std::uint32_t i = 0; i < frames; ++i)
    for (std::uint32_t j = 0; j < bands; ++j) {
      const float v = static_cast<float>(mel.values(i, j));
      os.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  if (!os) throw std::runtime_error("mel file: write failed: " + path);
}

dsp::MelSpectrogram load_mel(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("mel file: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("mel file: bad magic in " + path);
  std::uint32_t version = 0, frames = 0, bands = 0;
  is.read(reinterpret_cast<char*>(&version), sizeof(version));
  is.read(reinterpret_cast<char*>(&frames), sizeof(frames));
  is.read(reinterpret_cast<char*>(&bands), sizeof(bands));
  if (!is || version != kVersion)
    throw std::runtime_error("mel file: unsupported version in " + path);

  dsp::MelSpectrogram mel;
  mel.values.resize(frames, bands);
  std::vector<float> row(bands);
  for (std::uint32_t i = 0; i < frames; ++i) {
    is.read(reinterpret_cast<char*>(row.data()), sizeof(float) * bands);
    if (!is) throw std::runtime_error("mel file: truncated: " + path);
    for (std::uint32_t j = 0; j < bands; ++j) mel.values(i, j) = row[j];
  }
  return mel;
}

}  // namespace data
}  // namespace msvoc
