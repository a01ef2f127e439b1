// msvoc/model/checkpoint.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_MODEL_CHECKPOINT_H_
#define MSVOC_MODEL_CHECKPOINT_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "msvoc/autograd.h"

namespace msvoc {
namespace model {

// Versioned container of named tensors plus the run config. Values are
// stored as little-endian 64-bit floats so save -> load -> save round-trips
// bit-exactly, which training resume relies on.
struct Checkpoint {
  std::uint32_t version = 1;
  std::uint64_t step = 0;
  std::array<std::uint64_t, 4> rng_state{};
  std::string config_json;
  std::map<std::string, ag::Mat> tensors;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace model
}  // namespace msvoc

#endif  // MSVOC_MODEL_CHECKPOINT_H_
