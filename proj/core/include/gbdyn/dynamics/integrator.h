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

#ifndef GBDYN_DYNAMICS_INTEGRATOR_H_
#define GBDYN_DYNAMICS_INTEGRATOR_H_

#include <vector>

#include <Eigen/Core>

#include "gbdyn/ad/tape.h"
#include "gbdyn/dynamics/dyn_model.h"

namespace gbdyn::dynamics {

struct StateVars {
  ad::Var q;
  ad::Var qdot;
};

// Classical fourth-order Runge-Kutta step of x = [q, qdot] with the input
// held constant over the step.
// The change x_{t+1} - x_t of one step, kept separate so that residuals
// against targets avoid cancelling large state values.
StateVars Rk4Increment(const BoundModel& bound, const StateVars& x, ad::Var u, double dt);
StateVars Rk4Step(const BoundModel& bound, const StateVars& x, ad::Var u, double dt);

// Throws ConfigError unless dt > 0.
GeneralizedState Rk4Step(const Model& model, const GeneralizedState& x,
                         const Eigen::VectorXd& u, double dt);

// Column-batched step; q, qdot are N x batch and u is M x batch.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> Rk4StepBatch(const Model& model,
                                                         const Eigen::MatrixXd& q,
                                                         const Eigen::MatrixXd& qdot,
                                                         const Eigen::MatrixXd& u,
                                                         double dt);

// Applies controls.col(t) for t = 0..T-1; returns T+1 states starting at x0.
// Errors from a step are rethrown with the step index.
std::vector<GeneralizedState> Rollout(const Model& model, const GeneralizedState& x0,
                                      const Eigen::MatrixXd& controls, double dt);

// Samples with target accelerations, one per column.
struct AccelBatch {
  Eigen::MatrixXd q;
  Eigen::MatrixXd qdot;
  Eigen::MatrixXd u;
  Eigen::MatrixXd qddot;
};

// Mean over samples of |qddot_model - qddot_target|^2.
double AccelLoss(const Model& model, const AccelBatch& batch);
// Same loss on a tape, differentiable w.r.t. the bound parameters.
ad::Var AccelLoss(ad::Tape& tape, const BoundModel& bound, const AccelBatch& batch);

}  // namespace gbdyn::dynamics

#endif  // GBDYN_DYNAMICS_INTEGRATOR_H_
