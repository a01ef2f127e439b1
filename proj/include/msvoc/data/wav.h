// msvoc/data/wav.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_DATA_WAV_H_
#define MSVOC_DATA_WAV_H_

#include <string>

#include "msvoc/dsp/audio.h"

namespace msvoc {
namespace data {

// Strict corpus contract: RIFF PCM, 16-bit, mono, 24 kHz. Anything else is
// rejected with an error naming the violation — no resampling, no dithering.
// int16 i maps to i / 32768, so full-scale positive is 32767/32768.
dsp::AudioSignal load_wav(const std::string& path);

// Inverse quantization round(x * 32768) clamped to int16, so
// load_wav(save_wav(load_wav(p))) round-trips bit-exactly.
void save_wav(const std::string& path, const dsp::AudioSignal& signal);

}  // namespace data
}  // namespace msvoc

#endif  // MSVOC_DATA_WAV_H_
