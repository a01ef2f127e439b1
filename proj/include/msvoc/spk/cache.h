// msvoc/spk/cache.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_SPK_CACHE_H_
#define MSVOC_SPK_CACHE_H_

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace msvoc {
namespace spk {

// Per-utterance embedding cache file: 16-byte header (8-byte magic,
// u32 version, u32 record count), then records of (u32 id length, id bytes,
// 256 little-endian float32). Deterministic ordering (sorted by id), so
// rebuilding from unchanged inputs is bit-identical.
struct EmbeddingCache {
  std::map<std::string, Eigen::VectorXf> entries;

  bool contains(const std::string& utterance_id) const {
    return entries.count(utterance_id) > 0;
  }
};

void save_embedding_cache(const std::string& path,
                          const EmbeddingCache& cache);
EmbeddingCache load_embedding_cache(const std::string& path);

}  // namespace spk
}  // namespace msvoc

#endif  // MSVOC_SPK_CACHE_H_
