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

#include "gbdyn/dynamics/dyn_model.h"

#include <string>

#include "gbdyn/error.h"

namespace gbdyn::dynamics {
namespace {

void AddNet(std::vector<ad::ParamRef>& refs, const std::string& prefix,
            ad::Mlp& net) {
  for (int l = 0; l < net.num_layers(); ++l) {
    refs.emplace_back(prefix + ".w" + std::to_string(l), net.weight(l));
    refs.emplace_back(prefix + ".b" + std::to_string(l), net.bias(l));
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

DynModel::DynModel(int dof, int inputs, MassModel mass, PotentialModel potential,
                   ForceModel force, WhiteBoxParams white_box)
    : dof_(dof),
      inputs_(inputs),
      mass_(std::move(mass)),
      potential_(std::move(potential)),
      force_(std::move(force)),
      white_box_(std::move(white_box)) {
  if (dof_ < 1 || inputs_ < 0) throw ConfigError("model needs N >= 1 and M >= 0");
  const int packed = (dof_ * dof_ + dof_) / 2;
  if (const auto* m = std::get_if<LearnedCholeskyMass>(&mass_)) {
    if (m->net.input_dim() != dof_ || m->net.output_dim() != packed) {
      throw ShapeError("mass network must map R^N to R^((N^2+N)/2)");
    }
    if (!(m->delta > 0.0)) throw ConfigError("diagonal offset must be positive");
  }
  if (const auto* p = std::get_if<LearnedPotential>(&potential_)) {
    if (p->net.input_dim() != dof_ || p->net.output_dim() != 1) {
      throw ShapeError("potential network must map R^N to R");
    }
  }
  if ((UsesInertiaConstants() || UsesGravity()) && dof_ != 2) {
    throw ConfigError("white-box inertia and potential describe a 2-DOF pendulum");
  }
  std::visit(
      Overloaded{
          [&](const GenericForce& f) {
            if (f.net.input_dim() != 2 * dof_ + inputs_ || f.net.output_dim() != dof_) {
              throw ShapeError("force network must map R^(2N+M) to R^N");
            }
          },
          [&](const ControlAffineForce& f) {
            if (f.input_net.input_dim() != dof_ ||
                f.input_net.output_dim() != dof_ * inputs_ ||
                f.damping_net.input_dim() != dof_ ||
                f.damping_net.output_dim() != dof_) {
              throw ShapeError("control-affine networks must map R^N to R^(NM) and R^N");
            }
          },
          [&](const WhiteBoxForce&) {
            if (inputs_ != dof_ || white_box_.b.size() != dof_ ||
                white_box_.eta.size() != dof_) {
              throw ShapeError("white-box force needs M == N and b, eta of length N");
            }
          }},
      force_);
}

bool DynModel::UsesInertiaConstants() const {
  return std::holds_alternative<WhiteBoxMass>(mass_) || UsesGravity();
}

bool DynModel::UsesGravity() const {
  return std::holds_alternative<WhiteBoxPotential>(potential_);
}

bool DynModel::UsesForceConstants() const {
  return std::holds_alternative<WhiteBoxForce>(force_);
}

Model::Model(DynModel model) : impl_(std::move(model)) {}

Model::Model(NaiveModel model) : impl_(std::move(model)) {
  const NaiveModel& n = std::get<NaiveModel>(impl_);
  if (n.net.input_dim() != 2 * n.dof + n.inputs || n.net.output_dim() != n.dof) {
    throw ShapeError("naive network must map R^(2N+M) to R^N");
  }
}

int Model::dof() const {
  return is_naive() ? naive().dof : dyn().dof();
}

int Model::inputs() const {
  return is_naive() ? naive().inputs : dyn().inputs();
}

const DynModel& Model::dyn() const {
  if (is_naive()) throw ConfigError("the naive model has no Lagrangian structure");
  return std::get<DynModel>(impl_);
}

DynModel& Model::dyn() {
  if (is_naive()) throw ConfigError("the naive model has no Lagrangian structure");
  return std::get<DynModel>(impl_);
}

const NaiveModel& Model::naive() const { return std::get<NaiveModel>(impl_); }
NaiveModel& Model::naive() { return std::get<NaiveModel>(impl_); }

std::vector<ad::ParamRef> Model::Params() {
  std::vector<ad::ParamRef> refs;
  if (is_naive()) {
    AddNet(refs, "naive", naive().net);
    return refs;
  }
  DynModel& d = dyn();
  WhiteBoxParams& wb = d.white_box();
  if (d.UsesInertiaConstants()) {
    refs.emplace_back("wb.m1", wb.m1);
    refs.emplace_back("wb.m2", wb.m2);
    refs.emplace_back("wb.l1", wb.l1);
    refs.emplace_back("wb.l2", wb.l2);
  }
  if (d.UsesGravity()) refs.emplace_back("wb.g", wb.g);
  if (d.UsesForceConstants()) {
    refs.emplace_back("wb.b", wb.b);
    refs.emplace_back("wb.eta", wb.eta);
  }
  if (auto* m = std::get_if<LearnedCholeskyMass>(&d.mass())) AddNet(refs, "mass", m->net);
  if (auto* p = std::get_if<LearnedPotential>(&d.potential())) {
    AddNet(refs, "potential", p->net);
  }
  if (auto* f = std::get_if<GenericForce>(&d.force())) AddNet(refs, "force", f->net);
  if (auto* f = std::get_if<ControlAffineForce>(&d.force())) {
    AddNet(refs, "input", f->input_net);
    AddNet(refs, "damping", f->damping_net);
  }
  return refs;
}

ad::ParamLayout Model::Layout() const {
  return ad::ParamLayout(const_cast<Model*>(this)->Params());
}

ad::ParamVector Model::GetParams() const {
  return ad::Flatten(const_cast<Model*>(this)->Params());
}

void Model::SetParams(const ad::ParamVector& params) {
  ad::Unflatten(params, Params());
}

Eigen::Index Model::ParameterCount() const { return Layout().size(); }

BoundModel Model::Bind(ad::Tape& tape, bool trainable) const {
  BoundModel bound;
  bound.model = this;
  auto leaf = [&](const ad::Matrix& value, bool train) {
    ad::Var v = train ? tape.Variable(value) : tape.Constant(value);
    if (train) bound.trainable.push_back(v);
    return v;
  };
  auto scalar = [&](double value, bool train) {
    return leaf(ad::Matrix::Constant(1, 1, value), train);
  };
  auto net = [&](const ad::Mlp& mlp) {
    ad::MlpVars vars;
    for (int l = 0; l < mlp.num_layers(); ++l) {
      vars.weights.push_back(leaf(mlp.weight(l), trainable));
      vars.biases.push_back(leaf(mlp.bias(l), trainable));
    }
    return vars;
  };

  if (is_naive()) {
    bound.force_net = net(naive().net);
    return bound;
  }
  const DynModel& d = dyn();
  const WhiteBoxParams& wb = d.white_box();
  const bool inertia = trainable && d.UsesInertiaConstants();
  bound.m1 = scalar(wb.m1, inertia);
  bound.m2 = scalar(wb.m2, inertia);
  bound.l1 = scalar(wb.l1, inertia);
  bound.l2 = scalar(wb.l2, inertia);
  bound.g = scalar(wb.g, trainable && d.UsesGravity());
  if (d.UsesForceConstants()) {
    bound.b = leaf(wb.b, trainable);
    bound.eta = leaf(wb.eta, trainable);
  }
  if (const auto* m = std::get_if<LearnedCholeskyMass>(&d.mass())) {
    bound.mass_net = net(m->net);
  }
  if (const auto* p = std::get_if<LearnedPotential>(&d.potential())) {
    bound.potential_net = net(p->net);
  }
  if (const auto* f = std::get_if<GenericForce>(&d.force())) {
    bound.force_net = net(f->net);
  }
  if (const auto* f = std::get_if<ControlAffineForce>(&d.force())) {
    bound.input_net = net(f->input_net);
    bound.damping_net = net(f->damping_net);
  }
  return bound;
}

ad::ParamVector Model::CollectGrad(const ad::Tape& tape,
                                   const BoundModel& bound) const {
  Eigen::Index total = 0;
  for (const ad::Var& v : bound.trainable) total += v.value().size();
  ad::ParamVector grad(total);
  Eigen::Index offset = 0;
  for (const ad::Var& v : bound.trainable) {
    const ad::Matrix g = tape.Grad(v);
    grad.segment(offset, g.size()) = Eigen::Map<const Eigen::VectorXd>(g.data(), g.size());
    offset += g.size();
  }
  return grad;
}

}  // namespace gbdyn::dynamics
