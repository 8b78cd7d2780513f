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

#include "gbdyn/dynamics/integrator.h"

#include <string>

#include "gbdyn/ad/ops.h"
#include "gbdyn/dynamics/lagrangian.h"
#include "gbdyn/error.h"

namespace gbdyn::dynamics {

StateVars Rk4Increment(const BoundModel& bound, const StateVars& x, ad::Var u, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  auto derivative = [&](const StateVars& s) {
    return StateVars{s.qdot, Acceleration(bound, s.q, s.qdot, u)};
  };
  auto offset = [](const StateVars& s, const StateVars& k, double scale) {
    return StateVars{s.q + k.q * scale, s.qdot + k.qdot * scale};
  };
  const StateVars k1 = derivative(x);
  const StateVars k2 = derivative(offset(x, k1, 0.5 * dt));
  const StateVars k3 = derivative(offset(x, k2, 0.5 * dt));
  const StateVars k4 = derivative(offset(x, k3, dt));
  const double w = dt / 6.0;
  return StateVars{(k1.q + k2.q * 2.0 + k3.q * 2.0 + k4.q) * w,
                   (k1.qdot + k2.qdot * 2.0 + k3.qdot * 2.0 + k4.qdot) * w};
}

StateVars Rk4Step(const BoundModel& bound, const StateVars& x, ad::Var u, double dt) {
  const StateVars step = Rk4Increment(bound, x, u, dt);
  return StateVars{x.q + step.q, x.qdot + step.qdot};
}

GeneralizedState Rk4Step(const Model& model, const GeneralizedState& x,
                         const Eigen::VectorXd& u, double dt) {
  auto [q, qdot] = Rk4StepBatch(model, x.q, x.qdot, u, dt);
  return {q.col(0), qdot.col(0)};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> Rk4StepBatch(const Model& model,
                                                         const Eigen::MatrixXd& q,
                                                         const Eigen::MatrixXd& qdot,
                                                         const Eigen::MatrixXd& u,
                                                         double dt) {
  ad::Tape tape;
  BoundModel bound = model.Bind(tape, false);
  StateVars next = Rk4Step(bound, {tape.Constant(q), tape.Constant(qdot)},
                           tape.Constant(u), dt);
  return {next.q.value(), next.qdot.value()};
}

std::vector<GeneralizedState> Rollout(const Model& model, const GeneralizedState& x0,
                                      const Eigen::MatrixXd& controls, double dt) {
  if (controls.cols() == 0) throw ConfigError("rollout needs at least one control");
  if (controls.rows() != model.inputs()) {
    throw ShapeError("controls must have one row per model input");
  }
  std::vector<GeneralizedState> states;
  states.reserve(controls.cols() + 1);
  states.push_back(x0);
  for (Eigen::Index t = 0; t < controls.cols(); ++t) {
    try {
      states.push_back(Rk4Step(model, states.back(), controls.col(t), dt));
    } catch (const NumericError& e) {
      throw NumericError("rollout step " + std::to_string(t) + ": " + e.what());
    }
  }
  return states;
}

ad::Var AccelLoss(ad::Tape& tape, const BoundModel& bound, const AccelBatch& batch) {
  ad::Var predicted = Acceleration(bound, tape.Constant(batch.q),
                                   tape.Constant(batch.qdot), tape.Constant(batch.u));
  ad::Var error = predicted - tape.Constant(batch.qddot);
  return ad::Sum(ad::Square(error)) * (1.0 / static_cast<double>(batch.q.cols()));
}

double AccelLoss(const Model& model, const AccelBatch& batch) {
  const Eigen::MatrixXd predicted =
      ForwardDynamicsBatch(model, batch.q, batch.qdot, batch.u);
  return (predicted - batch.qddot).squaredNorm() / static_cast<double>(batch.q.cols());
}

}  // namespace gbdyn::dynamics
