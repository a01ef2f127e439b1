// msvoc/model/layers.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_MODEL_LAYERS_H_
#define MSVOC_MODEL_LAYERS_H_

#include <map>
#include <string>
#include <vector>

#include "msvoc/autograd.h"
#include "msvoc/rng.h"

namespace msvoc {
namespace model {

// Named trainable tensors. Iteration order is the map's key order, which
// keeps optimizer updates and checkpoints deterministic.
class ParamStore {
 public:
  ag::Var create(const std::string& name, Eigen::Index rows,
                 Eigen::Index cols, double init_scale, Rng& rng);
  ag::Var create_zeros(const std::string& name, Eigen::Index rows,
                       Eigen::Index cols);
  ag::Var at(const std::string& name) const;

  const std::map<std::string, ag::Var>& params() const { return params_; }

  // Overwrite values from a name -> matrix map; throws on missing names or
  // shape mismatches.
  void load_values(const std::map<std::string, ag::Mat>& values);
  std::map<std::string, ag::Mat> dump_values() const;

  bool any_nonfinite() const;

  // Frozen parameters act as graph constants: no tape is built through
  // them and they receive no gradients.
  void set_trainable(bool trainable);

 private:
  std::map<std::string, ag::Var> params_;
};

struct Conv1dLayer {
  ag::Var w;  // [cout x cin*k]
  ag::Var b;  // [cout x 1]
  int kernel = 1;
  int dilation = 1;

  Conv1dLayer() = default;
  Conv1dLayer(ParamStore& store, const std::string& prefix, int cin, int cout,
              int kernel, int dilation, Rng& rng);

  // Zero-padded so output length == input length (kernel odd).
  ag::Var same(const ag::Var& x) const;
};

struct LinearLayer {
  ag::Var w;  // [out x in]
  ag::Var b;  // [out x 1]

  LinearLayer() = default;
  LinearLayer(ParamStore& store, const std::string& prefix, int in, int out,
              Rng& rng);

  ag::Var apply(const ag::Var& x) const;  // x: [in x T]
};

// Single LSTM layer; input [in x T], returns the full hidden sequence
// [hidden x T]. Gate order in the stacked weight matrices: i, f, g, o.
struct LstmLayer {
  ag::Var wx;  // [4H x in]
  ag::Var wh;  // [4H x H]
  ag::Var b;   // [4H x 1]
  int hidden = 0;

  LstmLayer() = default;
  LstmLayer(ParamStore& store, const std::string& prefix, int in, int hidden,
            Rng& rng);

  ag::Var forward(const ag::Var& x) const;
};

}  // namespace model
}  // namespace msvoc

#endif  // MSVOC_MODEL_LAYERS_H_
