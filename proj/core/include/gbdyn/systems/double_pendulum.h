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

#ifndef GBDYN_SYSTEMS_DOUBLE_PENDULUM_H_
#define GBDYN_SYSTEMS_DOUBLE_PENDULUM_H_

#include <Eigen/Core>

#include "gbdyn/dynamics/dyn_model.h"

namespace gbdyn::systems {

// Actuated double pendulum of two uniform rods. q = (0, 0) hangs straight
// down; q2 is measured relative to the first link.
struct DoublePendulumParams {
  double m1 = 10.0;  // kg
  double m2 = 10.0;
  double l1 = 1.0;  // m
  double l2 = 1.0;
  double g = 10.0;  // m/s^2
  double b1 = 1.0;  // N m per unit input
  double b2 = 1.0;
  double eta1 = -0.5;  // N m s / rad
  double eta2 = -0.5;

  // Throws ConfigError unless masses and lengths are positive and finite.
  void Validate() const;
  dynamics::WhiteBoxParams ToWhiteBox() const;
};

// White-box mass, potential and control-affine damped force with the given
// constants. Doubles as the W-B learnable model.
dynamics::Model TrueSystem(const DoublePendulumParams& params);

// Tip of the second link, pivot at the origin, y pointing up.
Eigen::Vector2d EndEffector(const DoublePendulumParams& params, const Eigen::Vector2d& q);

}  // namespace gbdyn::systems

#endif  // GBDYN_SYSTEMS_DOUBLE_PENDULUM_H_
