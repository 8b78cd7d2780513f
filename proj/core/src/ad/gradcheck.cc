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

#include "gbdyn/ad/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "gbdyn/error.h"

namespace gbdyn::ad {

GradCheckReport FiniteDifferenceCheck(const Objective& objective,
                                      const ParamVector& params, double step) {
  if (!(step > 0.0)) throw ConfigError("finite-difference step must be positive");
  GradCheckReport report;
  report.analytic = ParamVector::Zero(params.size());
  objective.value_and_grad(params, report.analytic);
  report.numeric.resize(params.size());

  ParamVector probe = params;
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    probe[i] = params[i] + step;
    const double up = objective.value(probe);
    probe[i] = params[i] - step;
    const double down = objective.value(probe);
    probe[i] = params[i];
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericError("objective is non-finite when perturbing parameter " +
                         std::to_string(i));
    }
    report.numeric[i] = (up - down) / (2.0 * step);

    const double a = report.analytic[i];
    const double n = report.numeric[i];
    const double err =
        std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-8});
    if (err > report.max_relative_error || report.worst_index < 0) {
      report.max_relative_error = std::max(report.max_relative_error, err);
      report.worst_index = i;
    }
  }
  return report;
}

}  // namespace gbdyn::ad
