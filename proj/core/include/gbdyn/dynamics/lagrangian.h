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

#ifndef GBDYN_DYNAMICS_LAGRANGIAN_H_
#define GBDYN_DYNAMICS_LAGRANGIAN_H_

#include <vector>

#include <Eigen/Core>

#include "gbdyn/ad/tape.h"
#include "gbdyn/dynamics/dyn_model.h"

namespace gbdyn::dynamics {

// Batched mass matrix (row-major N*N x batch) and, optionally, its partial
// derivatives dM/dq_k for k = 0..N-1.
struct MassTerms {
  ad::Var matrix;
  std::vector<ad::Var> derivatives;
};

struct PotentialTerms {
  ad::Var energy;    // 1 x batch
  ad::Var gradient;  // N x batch, dV/dq
};

MassTerms EvalMass(const BoundModel& bound, ad::Var q, bool with_derivatives);
PotentialTerms EvalPotential(const BoundModel& bound, ad::Var q);
ad::Var EvalForce(const BoundModel& bound, ad::Var q, ad::Var qdot, ad::Var u);

// C(q, qdot) qdot = d/dq(M qdot) qdot - d/dq(qdot^T M qdot / 2), using only
// the N partial derivatives of M.
ad::Var CoriolisTimesQdot(const MassTerms& mass, ad::Var qdot, int n);

// qddot = M^-1 (F - C qdot - dV/dq); for the naive model the network output.
ad::Var Acceleration(const BoundModel& bound, ad::Var q, ad::Var qdot, ad::Var u);

// Single-point evaluations. These throw ConfigError for the naive model.
Eigen::MatrixXd MassMatrix(const Model& model, const Eigen::VectorXd& q);
double Potential(const Model& model, const Eigen::VectorXd& q);
// Conservative generalized force -dV/dq.
Eigen::VectorXd ConservativeForce(const Model& model, const Eigen::VectorXd& q);
Eigen::VectorXd CoriolisTimesQdot(const Model& model, const Eigen::VectorXd& q,
                                  const Eigen::VectorXd& qdot);
Eigen::VectorXd GeneralizedForce(const Model& model, const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& qdot,
                                 const Eigen::VectorXd& u);
// T + V.
double TotalEnergy(const Model& model, const GeneralizedState& state);

Eigen::VectorXd ForwardDynamics(const Model& model, const Eigen::VectorXd& q,
                                const Eigen::VectorXd& qdot, const Eigen::VectorXd& u);
// Column-batched accelerations.
Eigen::MatrixXd ForwardDynamicsBatch(const Model& model, const Eigen::MatrixXd& q,
                                     const Eigen::MatrixXd& qdot,
                                     const Eigen::MatrixXd& u);

}  // namespace gbdyn::dynamics

#endif  // GBDYN_DYNAMICS_LAGRANGIAN_H_
