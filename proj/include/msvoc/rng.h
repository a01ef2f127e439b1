// msvoc/rng.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_RNG_H_
#define MSVOC_RNG_H_

#include <array>
#include <cstdint>
#include <iosfwd>

namespace msvoc {

// xoshiro256** with splitmix64 seeding. The state is four words and is
// serialized into checkpoints, so training resume is bit-reproducible.
// std::mt19937 + std::normal_distribution would leave the gaussian path
// implementation-defined, which breaks that contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform();

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n);

  // Standard normal via Box-Muller; stateless apart from next_u64 draws.
  double gaussian();

  std::array<std::uint64_t, 4> state() const { return s_; }
  void set_state(const std::array<std::uint64_t, 4>& s) { s_ = s; }

 private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace msvoc

#endif  // MSVOC_RNG_H_
