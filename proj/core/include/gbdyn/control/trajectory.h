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

#ifndef GBDYN_CONTROL_TRAJECTORY_H_
#define GBDYN_CONTROL_TRAJECTORY_H_

#include <Eigen/Core>

namespace gbdyn::control {

// Knot states x = [q; qdot] (2N x K) and inputs (M x K) spaced dt apart.
struct Trajectory {
  Eigen::MatrixXd states;
  Eigen::MatrixXd inputs;
  double dt = 0.0;

  Eigen::Index knots() const { return states.cols(); }
  // Throws ShapeError unless states and inputs have K >= 2 matching columns,
  // states have an even row count and dt > 0.
  void Validate() const;
};

}  // namespace gbdyn::control

#endif  // GBDYN_CONTROL_TRAJECTORY_H_
