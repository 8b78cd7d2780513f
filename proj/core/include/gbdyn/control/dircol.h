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

#ifndef GBDYN_CONTROL_DIRCOL_H_
#define GBDYN_CONTROL_DIRCOL_H_

#include <Eigen/Core>

#include "gbdyn/control/trajectory.h"
#include "gbdyn/control/tvlqr.h"
#include "gbdyn/dynamics/dyn_model.h"

namespace gbdyn::control {

struct DircolConfig {
  QuadraticCost cost;
  // State tracking is charged on knots [track_from, K-1); the last knot
  // carries the terminal weight and must reach the goal.
  int track_from = 0;
  double clip = 120.0;
  double defect_tolerance = 1e-3;
  // Total Gauss-Newton steps across all augmented-Lagrangian rounds.
  int max_iterations = 2000;
  double initial_penalty = 100.0;
};

struct DircolResult {
  Trajectory trajectory;
  bool feasible = false;
  double max_defect = 0.0;      // infinity norm of the collocation defects
  double terminal_error = 0.0;  // infinity norm of x_{K-1} - goal
  double cost = 0.0;
  int iterations = 0;
};

// Trapezoidal collocation over `steps` intervals (steps + 1 knots) with
// x_0 = x0 fixed, x_K = goal and |u| <= clip, minimizing
//   sum_t (x_t - goal)^T Q (x_t - goal) + u_t^T R u_t + terminal term.
// Solved by an augmented Lagrangian whose subproblems are sums of squares
// minimized with damped Gauss-Newton. `warm_start` may be null, in which case
// states are interpolated linearly and inputs start at zero. When the budget
// runs out before the constraints are met the best iterate is returned with
// feasible = false.
DircolResult DircolPlan(const dynamics::Model& model, const Eigen::VectorXd& x0,
                        const Eigen::VectorXd& goal, int steps, double dt,
                        const DircolConfig& config, const Trajectory* warm_start = nullptr);

// Infinity norm of x_{t+1} - x_t - dt/2 (f_t + f_{t+1}) over all intervals.
double MaxDefect(const dynamics::Model& model, const Trajectory& trajectory);

// Quadratic cost of a trajectory under the planner's conventions.
double TrajectoryCost(const Trajectory& trajectory, const Eigen::VectorXd& goal,
                      const DircolConfig& config);

}  // namespace gbdyn::control

#endif  // GBDYN_CONTROL_DIRCOL_H_
