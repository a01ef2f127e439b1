// msvoc/config.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_CONFIG_H_
#define MSVOC_CONFIG_H_

#include <string>

#include "msvoc/dsp/mel.h"
#include "msvoc/model/generator.h"
#include "msvoc/spk/encoder.h"
#include "msvoc/train/trainer.h"

namespace msvoc {

// One declarative configuration covering every module. Defaults match the
// built-in component defaults; a config file overrides any subset. Unknown
// keys are rejected so typos cannot silently fall back to defaults. The
// serialized form is echoed into checkpoints and logs.
struct RunConfig {
  dsp::MelParams mel;
  model::GeneratorConfig generator = model::GeneratorConfig::defaults();
  spk::SpeakerEncoderConfig encoder;
  train::TrainConfig train;

  static RunConfig from_json(const std::string& text);
  std::string to_json() const;
};

RunConfig load_config(const std::string& path);

}  // namespace msvoc

#endif  // MSVOC_CONFIG_H_
