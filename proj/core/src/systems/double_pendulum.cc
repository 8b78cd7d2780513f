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

#include "gbdyn/systems/double_pendulum.h"

#include <cmath>

#include "gbdyn/error.h"

namespace gbdyn::systems {

void DoublePendulumParams::Validate() const {
  for (double v : {m1, m2, l1, l2}) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw ConfigError("double pendulum masses and lengths must be positive");
    }
  }
  for (double v : {g, b1, b2, eta1, eta2}) {
    if (!std::isfinite(v)) throw ConfigError("double pendulum constants must be finite");
  }
}

dynamics::WhiteBoxParams DoublePendulumParams::ToWhiteBox() const {
  dynamics::WhiteBoxParams wb;
  wb.m1 = m1;
  wb.m2 = m2;
  wb.l1 = l1;
  wb.l2 = l2;
  wb.g = g;
  wb.b = Eigen::Vector2d(b1, b2);
  wb.eta = Eigen::Vector2d(eta1, eta2);
  return wb;
}

dynamics::Model TrueSystem(const DoublePendulumParams& params) {
  params.Validate();
  return dynamics::DynModel(2, 2, dynamics::WhiteBoxMass{}, dynamics::WhiteBoxPotential{},
                            dynamics::WhiteBoxForce{}, params.ToWhiteBox());
}

Eigen::Vector2d EndEffector(const DoublePendulumParams& params, const Eigen::Vector2d& q) {
  const double a = q(0);
  const double c = q(0) + q(1);
  return {params.l1 * std::sin(a) + params.l2 * std::sin(c),
          -params.l1 * std::cos(a) - params.l2 * std::cos(c)};
}

}  // namespace gbdyn::systems
