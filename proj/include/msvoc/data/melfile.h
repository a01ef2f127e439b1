// msvoc/data/melfile.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_DATA_MELFILE_H_
#define MSVOC_DATA_MELFILE_H_

#include <string>

#include "msvoc/dsp/mel.h"

namespace msvoc {
namespace data {

// Mel-spectrogram interchange file so any acoustic model can drive the
// synthesizer: 8-byte magic "MSVOCMEL", u32 version, u32 frames, u32 bands,
// then frames x bands row-major little-endian float32.
void save_mel(const std::string& path, const dsp::MelSpectrogram& mel);
dsp::MelSpectrogram load_mel(const std::string& path);

}  // namespace data
}  // namespace msvoc

#endif  // MSVOC_DATA_MELFILE_H_
