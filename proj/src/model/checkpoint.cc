// msvoc/model/checkpoint.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/model/checkpoint.h"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace msvoc {
namespace model {

namespace {

constexpr char kMagic[8] = {'M', 'S', 'V', 'O', 'C', 'K', 'P', 'T'};

template <typename T>
void write_pod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T read_pod(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

void write_string(std::ostream& os, const std::string& s) {
  write_pod<std::uint64_t>(os, s.size());
  os.write(s.data(), s.size());
}

std::string read_string(std::istream& is) {
  const auto n = read_pod<std::uint64_t>(is);
  std::string s(n, '\0');
  is.read(s.data(), n);
  if (!is) throw std::runtime_error("checkpoint: truncated string");
  return s;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path);
  os.write(kMagic, sizeof(kMagic));
  write_pod<std::uint32_t>(os, ckpt.version);
  write_pod<std::uint64_t>(os, ckpt.step);
  for (auto w : ckpt.rng_state) write_pod<std::uint64_t>(os, w);
  write_string(os, ckpt.config_json);
  write_pod<std::uint64_t>(os, ckpt.tensors.size());
  for (const auto& [name, m] : ckpt.tensors) {
    write_string(os, name);
    write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(m.rows()));
    write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(m.cols()));
    os.write(reinterpret_cast<const char*>(m.data()),
             sizeof(double) * m.size());
  }
  if (!os) throw std::runtime_error("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  Checkpoint ckpt;
  ckpt.version = read_pod<std::uint32_t>(is);
  if (ckpt.version != 1)
    throw std::runtime_error("checkpoint: unsupported version");
  ckpt.step = read_pod<std::uint64_t>(is);
  for (auto& w : ckpt.rng_state) w = read_pod<std::uint64_t>(is);
  ckpt.config_json = read_string(is);
  const auto count = read_pod<std::uint64_t>(is);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string name = read_string(is);
    const auto rows = read_pod<std::uint64_t>(is);
    const auto cols = read_pod<std::uint64_t>(is);
    ag::Mat m(rows, cols);
    is.read(reinterpret_cast<char*>(m.data()), sizeof(double) * m.size());
    if (!is) throw std::runtime_error("checkpoint: truncated tensor " + name);
    ckpt.tensors[std::move(name)] = std::move(m);
  }
  return ckpt;
}

}  // namespace model
}  // namespace msvoc
