// msvoc/spk/cache.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/spk/cache.h"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "msvoc/spk/encoder.h"

namespace msvoc {
namespace spk {

namespace {
constexpr char kMagic[8] = {'M', 'S', 'V', 'O', 'C', 'E', 'M', 'B'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_embedding_cache(const std::string& path,
                          const EmbeddingCache& cache) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("embedding cache: cannot open " + path);
  os.write(kMagic, sizeof(kMagic));
  const std::uint32_t version = kVersion;
  const std::uint32_t count = static_cast<std::uint32_t>(cache.entries.size());
  os.write(reinterpret_cast<const char*>(&version), sizeof(version));
  os.write(reinterpret_cast<const char*>(&count), sizeof(count));
  for (const auto& [id, vec] : cache.entries) {
    if (vec.size() != kEmbeddingDim)
      throw std::runtime_error("embedding cache: bad dimension for " + id);
    const std::uint32_t len = static_cast<std::uint32_t>(id.size());
    os.write(reinterpret_cast<const char*>(&len), sizeof(len));
    os.write(id.data(), len);
    os.write(reinterpret_cast<const char*>(vec.data()),
             sizeof(float) * kEmbeddingDim);
  }
  if (!os) throw std::runtime_error("embedding cache: write failed");
}

EmbeddingCache load_embedding_cache(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("embedding cache: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("embedding cache: bad magic in " + path);
  std::uint32_t version = 0, count = 0;
  is.read(reinterpret_cast<char*>(&version), sizeof(version));
  is.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (!is || version != kVersion)
    throw std::runtime_error("embedding cache: unsupported version");
  EmbeddingCache cache;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint32_t len = 0;
    is.read(reinterpret_cast<char*>(&len), sizeof(len));
    std::string id(len, '\0');
    is.read(id.data(), len);
    Eigen::VectorXf vec(kEmbeddingDim);
    is.read(reinterpret_cast<char*>(vec.data()), sizeof(float) * kEmbeddingDim);
    if (!is) throw std::runtime_error("embedding cache: truncated record");
    cache.entries[std::move(id)] = std::move(vec);
  }
  return cache;
}

}  // namespace spk
}  // namespace msvoc
