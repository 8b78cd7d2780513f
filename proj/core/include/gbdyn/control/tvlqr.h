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

#ifndef GBDYN_CONTROL_TVLQR_H_
#define GBDYN_CONTROL_TVLQR_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "gbdyn/control/linearize.h"
#include "gbdyn/control/trajectory.h"
#include "gbdyn/dynamics/dyn_model.h"

namespace gbdyn::control {

struct QuadraticCost {
  Eigen::MatrixXd q;   // state weight
  Eigen::MatrixXd r;   // input weight
  Eigen::MatrixXd qf;  // terminal state weight

  // diag(10, ..., 1, ...) on positions and velocities, 1e-3 I, 100 I.
  static QuadraticCost Default(int dof, int inputs);
  // Throws ConfigError for mismatched sizes or non-finite entries.
  void Validate(int state_dim, int inputs) const;
};

// u_t = u_bar_t - K_t (x_t - x_bar_t) for t = 0..H-1, where the nominal has
// H + 1 knots.
struct TvlqrPolicy {
  Trajectory nominal;
  std::vector<Eigen::MatrixXd> gains;  // M x 2N each
  QuadraticCost cost;

  int horizon() const { return static_cast<int>(gains.size()); }
};

// Backward Riccati recursion with P_H = Qf:
//   K_t = (R + B^T P B)^-1 B^T P A,  P <- Q + A^T P (A - B K_t).
// Throws NumericError when an iterate is not finite.
std::vector<Eigen::MatrixXd> RiccatiGains(const std::vector<Linearization>& dynamics,
                                          const QuadraticCost& cost);

// Gains from the model's RK4 linearizations along the nominal.
TvlqrPolicy Tvlqr(const dynamics::Model& model, const Trajectory& nominal,
                  const QuadraticCost& cost);

// Feedback law clipped elementwise to [-clip, clip]. Throws ConfigError when
// t is outside [0, H).
Eigen::VectorXd ApplyPolicy(const TvlqrPolicy& policy, const Eigen::VectorXd& x, int t,
                            double clip);

// Adds i.i.d. N(0, std^2) noise to every state and input entry.
Trajectory PerturbNominal(const Trajectory& trajectory, double std, std::uint64_t seed);

}  // namespace gbdyn::control

#endif  // GBDYN_CONTROL_TVLQR_H_
