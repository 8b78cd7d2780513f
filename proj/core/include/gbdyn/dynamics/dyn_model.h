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

#ifndef GBDYN_DYNAMICS_DYN_MODEL_H_
#define GBDYN_DYNAMICS_DYN_MODEL_H_

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "gbdyn/ad/mlp.h"
#include "gbdyn/ad/params.h"
#include "gbdyn/ad/tape.h"

namespace gbdyn::dynamics {

// Coordinates and velocities of an N-DOF system.
struct GeneralizedState {
  Eigen::VectorXd q;
  Eigen::VectorXd qdot;
};

// Physical constants read by the white-box components. One store is shared
// by every white-box component of a model so that, e.g., the link masses
// seen by the mass matrix and by the potential are the same parameters.
// `b` scales each input into a joint torque and `eta` multiplies the joint
// velocity (viscous damping opposes motion when eta < 0).
struct WhiteBoxParams {
  double m1 = 1.0;
  double m2 = 1.0;
  double l1 = 1.0;
  double l2 = 1.0;
  double g = 1.0;
  Eigen::VectorXd b;
  Eigen::VectorXd eta;
};

// Mass matrix L(q) L(q)^T with L predicted by a network (see
// AssembleCholesky for the packing of the network output).
struct LearnedCholeskyMass {
  ad::Mlp net;
  double delta = 1.0;
};
// Double-pendulum inertia built from m1, m2, l1, l2.
struct WhiteBoxMass {};
using MassModel = std::variant<LearnedCholeskyMass, WhiteBoxMass>;

struct LearnedPotential {
  ad::Mlp net;
};
// Double-pendulum gravity potential built from m1, m2, l1, l2, g.
struct WhiteBoxPotential {};
using PotentialModel = std::variant<LearnedPotential, WhiteBoxPotential>;

// F = net(q, qdot, u).
struct GenericForce {
  ad::Mlp net;
};
// F = B(q) u + eta(q) * qdot, with B(q) the row-major N x M output of
// input_net and eta(q) the N outputs of damping_net.
struct ControlAffineForce {
  ad::Mlp input_net;
  ad::Mlp damping_net;
};
// F = b * u + eta * qdot with constant per-joint b and eta (requires M == N).
struct WhiteBoxForce {};
using ForceModel = std::variant<GenericForce, ControlAffineForce, WhiteBoxForce>;

// Lagrangian model: mass matrix, potential energy and generalized forces.
class DynModel {
 public:
  DynModel(int dof, int inputs, MassModel mass, PotentialModel potential,
           ForceModel force, WhiteBoxParams white_box);

  int dof() const { return dof_; }
  int inputs() const { return inputs_; }
  const MassModel& mass() const { return mass_; }
  MassModel& mass() { return mass_; }
  const PotentialModel& potential() const { return potential_; }
  PotentialModel& potential() { return potential_; }
  const ForceModel& force() const { return force_; }
  ForceModel& force() { return force_; }
  const WhiteBoxParams& white_box() const { return white_box_; }
  WhiteBoxParams& white_box() { return white_box_; }

  bool UsesInertiaConstants() const;  // m1, m2, l1, l2
  bool UsesGravity() const;           // g
  bool UsesForceConstants() const;    // b, eta

 private:
  int dof_;
  int inputs_;
  MassModel mass_;
  PotentialModel potential_;
  ForceModel force_;
  WhiteBoxParams white_box_;
};

// Black-box baseline: qddot = net(q, qdot, u).
struct NaiveModel {
  ad::Mlp net;
  int dof = 0;
  int inputs = 0;
};

class Model;

// Model parameters placed on a tape for one evaluation.
struct BoundModel {
  const Model* model = nullptr;
  ad::Var m1, m2, l1, l2, g, b, eta;
  ad::MlpVars mass_net;
  ad::MlpVars potential_net;
  ad::MlpVars force_net;
  ad::MlpVars input_net;
  ad::MlpVars damping_net;
  // Same order as Model::Params().
  std::vector<ad::Var> trainable;
};

// Either a Lagrangian model or the naive network, behind one interface so the
// integrator, losses and controllers treat both alike.
class Model {
 public:
  Model(DynModel model);  // NOLINT(runtime/explicit)
  Model(NaiveModel model);  // NOLINT(runtime/explicit)

  int dof() const;
  int inputs() const;
  bool is_naive() const { return std::holds_alternative<NaiveModel>(impl_); }
  const DynModel& dyn() const;
  DynModel& dyn();
  const NaiveModel& naive() const;
  NaiveModel& naive();

  // Trainable blocks in a fixed order: the white-box constants in use (m1,
  // m2, l1, l2, g, b, eta), then each network layer's weight and bias.
  std::vector<ad::ParamRef> Params();
  ad::ParamLayout Layout() const;
  ad::ParamVector GetParams() const;
  void SetParams(const ad::ParamVector& params);
  Eigen::Index ParameterCount() const;

  BoundModel Bind(ad::Tape& tape, bool trainable) const;
  // Gradient of the last backward pass, ordered like Params().
  ad::ParamVector CollectGrad(const ad::Tape& tape, const BoundModel& bound) const;

 private:
  std::variant<DynModel, NaiveModel> impl_;
};

}  // namespace gbdyn::dynamics

#endif  // GBDYN_DYNAMICS_DYN_MODEL_H_
