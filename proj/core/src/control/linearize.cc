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

#include "gbdyn/control/linearize.h"

#include "gbdyn/ad/ops.h"
#include "gbdyn/dynamics/integrator.h"
#include "gbdyn/dynamics/lagrangian.h"
#include "gbdyn/error.h"

namespace gbdyn::control {
namespace {

void CheckShapes(const dynamics::Model& model, const Eigen::MatrixXd& states,
                 const Eigen::MatrixXd& inputs) {
  if (states.rows() != 2 * model.dof() || inputs.rows() != model.inputs() ||
      states.cols() != inputs.cols()) {
    throw ShapeError("states must be 2N x K and inputs M x K");
  }
}

// Jacobians of `out` (rows x K, column k depending only on column k of the
// inputs) by one backward pass per output row.
std::vector<Linearization> ColumnJacobians(ad::Tape& tape, ad::Var out, ad::Var q,
                                           ad::Var qdot, ad::Var u, int n, int m) {
  const Eigen::Index rows = out.rows();
  const Eigen::Index k = out.cols();
  std::vector<Linearization> jac(static_cast<std::size_t>(k));
  for (auto& j : jac) {
    j.a.resize(rows, 2 * n);
    j.b.resize(rows, m);
  }
  for (Eigen::Index r = 0; r < rows; ++r) {
    tape.ZeroGrad();
    Eigen::MatrixXd seed = Eigen::MatrixXd::Zero(rows, k);
    seed.row(r).setOnes();
    tape.Backward(out, seed);
    const Eigen::MatrixXd gq = tape.Grad(q);
    const Eigen::MatrixXd gqd = tape.Grad(qdot);
    const Eigen::MatrixXd gu = tape.Grad(u);
    for (Eigen::Index c = 0; c < k; ++c) {
      jac[c].a.block(r, 0, 1, n) = gq.col(c).transpose();
      jac[c].a.block(r, n, 1, n) = gqd.col(c).transpose();
      if (m > 0) jac[c].b.row(r) = gu.col(c).transpose();
    }
  }
  return jac;
}

}  // namespace

std::vector<Linearization> LinearizeBatch(const dynamics::Model& model,
                                          const Eigen::MatrixXd& states,
                                          const Eigen::MatrixXd& inputs, double dt) {
  CheckShapes(model, states, inputs);
  const int n = model.dof();
  ad::Tape tape;
  dynamics::BoundModel bound = model.Bind(tape, false);
  ad::Var q = tape.Variable(states.topRows(n));
  ad::Var qdot = tape.Variable(states.bottomRows(n));
  ad::Var u = tape.Variable(inputs);
  dynamics::StateVars next = dynamics::Rk4Step(bound, {q, qdot}, u, dt);
  ad::Var out = ad::VStack({next.q, next.qdot});
  return ColumnJacobians(tape, out, q, qdot, u, n, model.inputs());
}

Linearization Linearize(const dynamics::Model& model, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& u, double dt) {
  return LinearizeBatch(model, x, u, dt).front();
}

ContinuousEval EvalContinuous(const dynamics::Model& model, const Eigen::MatrixXd& states,
                              const Eigen::MatrixXd& inputs, bool with_jacobians) {
  CheckShapes(model, states, inputs);
  const int n = model.dof();
  ContinuousEval result;
  if (!with_jacobians) {
    result.xdot.resize(2 * n, states.cols());
    result.xdot.topRows(n) = states.bottomRows(n);
    result.xdot.bottomRows(n) = dynamics::ForwardDynamicsBatch(
        model, states.topRows(n), states.bottomRows(n), inputs);
    return result;
  }
  ad::Tape tape;
  dynamics::BoundModel bound = model.Bind(tape, false);
  ad::Var q = tape.Variable(states.topRows(n));
  ad::Var qdot = tape.Variable(states.bottomRows(n));
  ad::Var u = tape.Variable(inputs);
  ad::Var qddot = dynamics::Acceleration(bound, q, qdot, u);
  result.xdot.resize(2 * n, states.cols());
  result.xdot.topRows(n) = states.bottomRows(n);
  result.xdot.bottomRows(n) = qddot.value();
  std::vector<Linearization> accel =
      ColumnJacobians(tape, qddot, q, qdot, u, n, model.inputs());
  result.jacobians.resize(accel.size());
  for (std::size_t c = 0; c < accel.size(); ++c) {
    Linearization& j = result.jacobians[c];
    j.a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    j.b = Eigen::MatrixXd::Zero(2 * n, model.inputs());
    j.a.block(0, n, n, n).setIdentity();
    j.a.bottomRows(n) = accel[c].a;
    j.b.bottomRows(n) = accel[c].b;
  }
  return result;
}

}  // namespace gbdyn::control
