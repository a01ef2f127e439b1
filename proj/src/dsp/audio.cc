// msvoc/dsp/audio.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/dsp/audio.h"

#include <cmath>

namespace msvoc {
namespace dsp {

void check_finite(const AudioSignal& sig) {
  for (double s : sig.samples)
    if (!std::isfinite(s))
      throw std::invalid_argument("audio signal contains non-finite samples");
}

}  // namespace dsp
}  // namespace msvoc
