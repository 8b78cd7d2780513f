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

#ifndef GBDYN_AD_GRADCHECK_H_
#define GBDYN_AD_GRADCHECK_H_

#include <functional>

#include "gbdyn/ad/params.h"

namespace gbdyn::ad {

// Scalar objective of a flat parameter vector. `value_and_grad` must return
// the same value as `value` and fill the exact gradient.
struct Objective {
  std::function<double(const ParamVector&)> value;
  std::function<double(const ParamVector&, ParamVector& grad)> value_and_grad;
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  Eigen::Index worst_index = -1;
  ParamVector analytic;
  ParamVector numeric;
};

// Compares the exact gradient with central differences. Per entry the error
// is |a - n| / max(|a|, |n|, 1e-8). Throws ConfigError for step <= 0 and
// NumericError when the objective is non-finite at a perturbed point.
GradCheckReport FiniteDifferenceCheck(const Objective& objective,
                                      const ParamVector& params, double step);

}  // namespace gbdyn::ad

#endif  // GBDYN_AD_GRADCHECK_H_
