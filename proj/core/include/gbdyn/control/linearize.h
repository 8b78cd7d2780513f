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

#ifndef GBDYN_CONTROL_LINEARIZE_H_
#define GBDYN_CONTROL_LINEARIZE_H_

#include <vector>

#include <Eigen/Core>

#include "gbdyn/control/trajectory.h"
#include "gbdyn/dynamics/dyn_model.h"

namespace gbdyn::control {

// x_next ~ A x + B u about a point.
struct Linearization {
  Eigen::MatrixXd a;  // 2N x 2N
  Eigen::MatrixXd b;  // 2N x M
};

// Exact Jacobians of the discrete RK4 step map.
Linearization Linearize(const dynamics::Model& model, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& u, double dt);
// One linearization per column of states/inputs, evaluated as a batch.
std::vector<Linearization> LinearizeBatch(const dynamics::Model& model,
                                          const Eigen::MatrixXd& states,
                                          const Eigen::MatrixXd& inputs, double dt);

// Continuous dynamics xdot = [qdot; qddot] at each column, with Jacobians
// when requested.
struct ContinuousEval {
  Eigen::MatrixXd xdot;  // 2N x K
  std::vector<Linearization> jacobians;
};
ContinuousEval EvalContinuous(const dynamics::Model& model, const Eigen::MatrixXd& states,
                              const Eigen::MatrixXd& inputs, bool with_jacobians);

}  // namespace gbdyn::control

#endif  // GBDYN_CONTROL_LINEARIZE_H_
