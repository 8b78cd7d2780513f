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

#include "gbdyn/dynamics/lagrangian.h"

#include <string>

#include "gbdyn/ad/mlp.h"
#include "gbdyn/ad/ops.h"
#include "gbdyn/dynamics/cholesky.h"
#include "gbdyn/error.h"

namespace gbdyn::dynamics {
namespace {

using ad::Var;

Var ZeroRows(ad::Tape& tape, Eigen::Index rows, Eigen::Index cols) {
  return tape.Constant(ad::Matrix::Zero(rows, cols));
}

MassTerms LearnedMass(const BoundModel& bound, const LearnedCholeskyMass& mass,
                      Var q, int n, bool with_derivatives) {
  MassTerms out;
  if (!with_derivatives) {
    Var lower = AssembleCholesky(ad::Forward(bound.mass_net, q), n, mass.delta);
    out.matrix = ad::BatchedMatMul(lower, ad::BatchedTranspose(lower, n, n), n, n, n);
    return out;
  }
  ad::MlpWithTangents net = ad::ForwardWithTangents(bound.mass_net, q, n);
  Var lower = AssembleCholesky(net.output, n, mass.delta);
  Var upper = ad::BatchedTranspose(lower, n, n);
  out.matrix = ad::BatchedMatMul(lower, upper, n, n, n);
  for (int k = 0; k < n; ++k) {
    // d(L L^T) = dL L^T + (dL L^T)^T
    Var half = ad::BatchedMatMul(AssembleCholesky(net.tangents[k], n, 0.0), upper, n, n, n);
    out.derivatives.push_back(half + ad::BatchedTranspose(half, n, n));
  }
  return out;
}

// Uniform rods pivoting at their ends; q2 is measured relative to link 1.
MassTerms WhiteBoxPendulumMass(const BoundModel& b, Var q, bool with_derivatives) {
  ad::Tape& tape = q.tape();
  const Eigen::Index batch = q.cols();
  Var q2 = ad::Rows(q, 1, 1);
  Var inertia1 = b.m1 * ad::Square(b.l1) * (1.0 / 3.0);
  Var inertia2 = b.m2 * ad::Square(b.l2) * (1.0 / 3.0);
  Var coupling = b.m2 * b.l1 * b.l2;
  Var cos2 = ad::Cos(q2);
  Var i11 = (inertia1 + inertia2 + b.m2 * ad::Square(b.l1)) + coupling * cos2;
  Var i12 = inertia2 + (coupling * 0.5) * cos2;
  Var i22 = inertia2 + ZeroRows(tape, 1, batch);

  MassTerms out;
  out.matrix = ad::VStack({i11, i12, i12, i22});
  if (with_derivatives) {
    out.derivatives.push_back(ZeroRows(tape, 4, batch));
    Var d11 = -(coupling * ad::Sin(q2));
    Var d12 = d11 * 0.5;
    out.derivatives.push_back(ad::VStack({d11, d12, d12, ZeroRows(tape, 1, batch)}));
  }
  return out;
}

PotentialTerms WhiteBoxPendulumPotential(const BoundModel& b, Var q) {
  Var q1 = ad::Rows(q, 0, 1);
  Var q12 = q1 + ad::Rows(q, 1, 1);
  Var link1 = b.m1 * b.g * b.l1 * 0.5;
  Var link2 = b.m2 * b.g;
  Var half_l2 = b.l2 * 0.5;
  PotentialTerms out;
  out.energy = -(link1 * ad::Cos(q1)) - link2 * (b.l1 * ad::Cos(q1) + half_l2 * ad::Cos(q12));
  Var sin12 = ad::Sin(q12);
  Var grad1 = link1 * ad::Sin(q1) + link2 * (b.l1 * ad::Sin(q1) + half_l2 * sin12);
  Var grad2 = link2 * half_l2 * sin12;
  out.gradient = ad::VStack({grad1, grad2});
  return out;
}

void CheckBatch(const Model& model, Var q, Var qdot, Var u) {
  const int n = model.dof();
  if (q.rows() != n || qdot.rows() != n || u.rows() != model.inputs()) {
    throw ShapeError("expected q, qdot of length " + std::to_string(n) +
                     " and u of length " + std::to_string(model.inputs()));
  }
  if (qdot.cols() != q.cols() || u.cols() != q.cols()) {
    throw ShapeError("q, qdot and u batch sizes differ");
  }
}

Eigen::MatrixXd UnpackSquare(const Eigen::VectorXd& packed, int n) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(packed.data(), n, n);
}

}  // namespace

MassTerms EvalMass(const BoundModel& bound, Var q, bool with_derivatives) {
  const DynModel& d = bound.model->dyn();
  if (q.rows() != d.dof()) throw ShapeError("q has the wrong dimension");
  if (const auto* m = std::get_if<LearnedCholeskyMass>(&d.mass())) {
    return LearnedMass(bound, *m, q, d.dof(), with_derivatives);
  }
  return WhiteBoxPendulumMass(bound, q, with_derivatives);
}

PotentialTerms EvalPotential(const BoundModel& bound, Var q) {
  const DynModel& d = bound.model->dyn();
  if (q.rows() != d.dof()) throw ShapeError("q has the wrong dimension");
  if (std::holds_alternative<LearnedPotential>(d.potential())) {
    ad::MlpWithTangents net = ad::ForwardWithTangents(bound.potential_net, q, d.dof());
    return {net.output, ad::VStack(net.tangents)};
  }
  return WhiteBoxPendulumPotential(bound, q);
}

Var EvalForce(const BoundModel& bound, Var q, Var qdot, Var u) {
  const DynModel& d = bound.model->dyn();
  CheckBatch(*bound.model, q, qdot, u);
  if (std::holds_alternative<GenericForce>(d.force())) {
    return ad::Forward(bound.force_net, ad::VStack({q, qdot, u}));
  }
  if (std::holds_alternative<ControlAffineForce>(d.force())) {
    Var input_matrix = ad::Forward(bound.input_net, q);
    Var damping = ad::Forward(bound.damping_net, q);
    return ad::BatchedMatMul(input_matrix, u, d.dof(), d.inputs(), 1) + damping * qdot;
  }
  return bound.b * u + bound.eta * qdot;
}

Var CoriolisTimesQdot(const MassTerms& mass, Var qdot, int n) {
  if (static_cast<int>(mass.derivatives.size()) != n) {
    throw ShapeError("Coriolis term needs all N mass-matrix derivatives");
  }
  // sum_j dM/dq_j qdot_j is the directional derivative of M along qdot.
  Var directional = ad::Rows(qdot, 0, 1) * mass.derivatives[0];
  for (int j = 1; j < n; ++j) {
    directional = directional + ad::Rows(qdot, j, 1) * mass.derivatives[j];
  }
  Var transport = ad::BatchedMatMul(directional, qdot, n, n, 1);
  std::vector<Var> kinetic_gradient;
  kinetic_gradient.reserve(n);
  for (int i = 0; i < n; ++i) {
    Var mq = ad::BatchedMatMul(mass.derivatives[i], qdot, n, n, 1);
    kinetic_gradient.push_back(ad::ColSum(qdot * mq) * 0.5);
  }
  return transport - ad::VStack(kinetic_gradient);
}

Var Acceleration(const BoundModel& bound, Var q, Var qdot, Var u) {
  const Model& model = *bound.model;
  CheckBatch(model, q, qdot, u);
  if (model.is_naive()) return ad::Forward(bound.force_net, ad::VStack({q, qdot, u}));
  const int n = model.dof();
  MassTerms mass = EvalMass(bound, q, true);
  PotentialTerms potential = EvalPotential(bound, q);
  Var rhs = EvalForce(bound, q, qdot, u) - CoriolisTimesQdot(mass, qdot, n) -
            potential.gradient;
  return ad::BatchedSpdSolve(mass.matrix, rhs, n);
}

Eigen::MatrixXd MassMatrix(const Model& model, const Eigen::VectorXd& q) {
  ad::Tape tape;
  BoundModel bound = model.Bind(tape, false);
  MassTerms mass = EvalMass(bound, tape.Constant(q), false);
  return UnpackSquare(mass.matrix.value().col(0), model.dof());
}

double Potential(const Model& model, const Eigen::VectorXd& q) {
  ad::Tape tape;
  BoundModel bound = model.Bind(tape, false);
  return EvalPotential(bound, tape.Constant(q)).energy.value()(0, 0);
}

Eigen::VectorXd ConservativeForce(const Model& model, const Eigen::VectorXd& q) {
  ad::Tape tape;
  BoundModel bound = model.Bind(tape, false);
  return -EvalPotential(bound, tape.Constant(q)).gradient.value().col(0);
}

Eigen::VectorXd CoriolisTimesQdot(const Model& model, const Eigen::VectorXd& q,
                                  const Eigen::VectorXd& qdot) {
  if (qdot.size() != model.dof()) throw ShapeError("qdot has the wrong dimension");
  ad::Tape tape;
  BoundModel bound = model.Bind(tape, false);
  MassTerms mass = EvalMass(bound, tape.Constant(q), true);
  return CoriolisTimesQdot(mass, tape.Constant(qdot), model.dof()).value().col(0);
}

Eigen::VectorXd GeneralizedForce(const Model& model, const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& qdot,
                                 const Eigen::VectorXd& u) {
  ad::Tape tape;
  BoundModel bound = model.Bind(tape, false);
  return EvalForce(bound, tape.Constant(q), tape.Constant(qdot), tape.Constant(u))
      .value()
      .col(0);
}

double TotalEnergy(const Model& model, const GeneralizedState& state) {
  const Eigen::MatrixXd mass = MassMatrix(model, state.q);
  return 0.5 * state.qdot.dot(mass * state.qdot) + Potential(model, state.q);
}

Eigen::VectorXd ForwardDynamics(const Model& model, const Eigen::VectorXd& q,
                                const Eigen::VectorXd& qdot, const Eigen::VectorXd& u) {
  return ForwardDynamicsBatch(model, q, qdot, u).col(0);
}

Eigen::MatrixXd ForwardDynamicsBatch(const Model& model, const Eigen::MatrixXd& q,
                                     const Eigen::MatrixXd& qdot,
                                     const Eigen::MatrixXd& u) {
  ad::Tape tape;
  BoundModel bound = model.Bind(tape, false);
  return Acceleration(bound, tape.Constant(q), tape.Constant(qdot), tape.Constant(u))
      .value();
}

}  // namespace gbdyn::dynamics
