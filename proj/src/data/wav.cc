// msvoc/data/wav.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/data/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace msvoc {
namespace data {

namespace {

std::uint32_t read_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (b[1] << 8) | (b[2] << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint16_t read_u16(std::istream& is) {
  unsigned char b[2];
  is.read(reinterpret_cast<char*>(b), 2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

void write_u32(std::ostream& os, std::uint32_t v) {
  char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
               static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
  os.write(b, 4);
}

void write_u16(std::ostream& os, std::uint16_t v) {
  char b[2] = {static_cast<char>(v), static_cast<char>(v >> 8)};
  os.write(b, 2);
}

}  // namespace

dsp::AudioSignal load_wav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("wav: cannot open " + path);

  char tag[4];
  is.read(tag, 4);
  if (!is || std::memcmp(tag, "RIFF", 4) != 0)
    throw std::runtime_error("wav: not a RIFF file: " + path);
  read_u32(is);  // riff size
  is.read(tag, 4);
  if (!is || std::memcmp(tag, "WAVE", 4) != 0)
    throw std::runtime_error("wav: not a WAVE file: " + path);

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::vector<char> payload;
  while (is.read(tag, 4)) {
    const std::uint32_t size = read_u32(is);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      format = read_u16(is);
      channels = read_u16(is);
      rate = read_u32(is);
      read_u32(is);  // byte rate
      read_u16(is);  // block align
      bits = read_u16(is);
      if (size > 16) is.seekg(size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      payload.resize(size);
      is.read(payload.data(), size);
      break;
    } else {
      is.seekg(size + (size & 1), std::ios::cur);  // chunks are word-aligned
    }
  }
  if (!have_fmt || payload.empty())
    throw std::runtime_error("wav: missing fmt or data chunk: " + path);
  if (format != 1)
    throw std::runtime_error("wav: not PCM (format tag " +
                             std::to_string(format) + "): " + path);
  if (bits != 16)
    throw std::runtime_error("wav: expected 16-bit samples, got " +
                             std::to_string(bits) + "-bit: " + path);
  if (channels != 1)
    throw std::runtime_error("wav: expected mono, got " +
                             std::to_string(channels) + " channels: " + path);
  if (rate != static_cast<std::uint32_t>(dsp::kDefaultSampleRate))
    throw std::runtime_error("wav: expected 24000 Hz, got " +
                             std::to_string(rate) + " Hz: " + path);

  dsp::AudioSignal out;
  out.sample_rate = static_cast<int>(rate);
  out.samples.resize(payload.size() / 2);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const std::int16_t v = static_cast<std::int16_t>(
        static_cast<unsigned char>(payload[2 * i]) |
        (static_cast<unsigned char>(payload[2 * i + 1]) << 8));
    out.samples[i] = v / 32768.0;
  }
  return out;
}

void save_wav(const std::string& path, const dsp::AudioSignal& signal) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("wav: cannot open for write: " + path);
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(signal.samples.size() * 2);

  os.write("RIFF", 4);
  write_u32(os, 36 + data_size);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  write_u32(os, 16);
  write_u16(os, 1);  // PCM
  write_u16(os, 1);  // mono
  write_u32(os, static_cast<std::uint32_t>(signal.sample_rate));
  write_u32(os, static_cast<std::uint32_t>(signal.sample_rate * 2));
  write_u16(os, 2);   // block align
  write_u16(os, 16);  // bits
  os.write("data", 4);
  write_u32(os, data_size);
  for (double v : signal.samples) {
    const double scaled = std::round(v * 32768.0);
    const std::int16_t q = static_cast<std::int16_t>(
        std::clamp(scaled, -32768.0, 32767.0));
    write_u16(os, static_cast<std::uint16_t>(q));
  }
  if (!os) throw std::runtime_error("wav: write failed: " + path);
}

}  // namespace data
}  // namespace msvoc
