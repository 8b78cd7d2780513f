// Copyright 2026 The gbdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GBDYN_AD_ADAM_H_
#define GBDYN_AD_ADAM_H_

#include <cstdint>

#include "gbdyn/ad/params.h"

namespace gbdyn::ad {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamConfig config;
  std::int64_t step = 0;
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;

  static AdamState Zero(Eigen::Index size, const AdamConfig& config);
};

// One bias-corrected Adam update of `params` in place.
// Throws ShapeError when the state, parameters and gradient differ in size.
void AdamStep(AdamState& state, ParamVector& params, const ParamVector& grad);
// Per-entry learning rates in place of config.learning_rate.
void AdamStep(AdamState& state, ParamVector& params, const ParamVector& grad,
              const Eigen::VectorXd& learning_rates);

}  // namespace gbdyn::ad

#endif  // GBDYN_AD_ADAM_H_
