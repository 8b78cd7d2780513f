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

#include "gbdyn/modelzoo/zoo.h"

#include <random>

#include "gbdyn/error.h"
#include "gbdyn/random.h"

namespace gbdyn::modelzoo {
namespace {

std::vector<int> Widths(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> w{in};
  w.insert(w.end(), hidden.begin(), hidden.end());
  w.push_back(out);
  return w;
}

dynamics::WhiteBoxParams RandomWhiteBox(int dof, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  dynamics::WhiteBoxParams wb;
  wb.m1 = dist(rng);
  wb.m2 = dist(rng);
  wb.l1 = dist(rng);
  wb.l2 = dist(rng);
  wb.g = dist(rng);
  wb.b.resize(dof);
  wb.eta.resize(dof);
  for (int i = 0; i < dof; ++i) wb.b(i) = dist(rng);
  for (int i = 0; i < dof; ++i) wb.eta(i) = dist(rng);
  return wb;
}

}  // namespace

dynamics::Model Build(const ModelSpec& spec) {
  spec.Validate();
  const int n = spec.dof;
  const int m = spec.inputs;
  std::mt19937_64 rng = MakeStream(spec.seed, "init");
  if (spec.name == "Naive") {
    return dynamics::NaiveModel{ad::Mlp::Random(Widths(2 * n + m, spec.naive_hidden, n), rng),
                                n, m};
  }
  const Components c = ComponentsFor(spec.name);
  dynamics::WhiteBoxParams wb =
      spec.white_box ? *spec.white_box : RandomWhiteBox(n, rng);
  if (wb.b.size() == 0) wb.b = Eigen::VectorXd::Ones(n);
  if (wb.eta.size() == 0) wb.eta = Eigen::VectorXd::Zero(n);

  dynamics::MassModel mass = dynamics::WhiteBoxMass{};
  if (c.mass == MassKind::kLearned) {
    mass = dynamics::LearnedCholeskyMass{
        ad::Mlp::Random(Widths(n, spec.component_hidden, (n * n + n) / 2), rng), spec.delta};
  }
  dynamics::PotentialModel potential = dynamics::WhiteBoxPotential{};
  if (c.potential == PotentialKind::kLearned) {
    potential = dynamics::LearnedPotential{ad::Mlp::Random(Widths(n, spec.component_hidden, 1), rng)};
  }
  dynamics::ForceModel force = dynamics::WhiteBoxForce{};
  if (c.force == ForceKind::kGeneric) {
    force = dynamics::GenericForce{ad::Mlp::Random(Widths(2 * n + m, spec.component_hidden, n), rng)};
  } else if (c.force == ForceKind::kControlAffine) {
    ad::Mlp input_net = ad::Mlp::Random(Widths(n, spec.component_hidden, n * m), rng);
    ad::Mlp damping_net = ad::Mlp::Random(Widths(n, spec.component_hidden, n), rng);
    force = dynamics::ControlAffineForce{std::move(input_net), std::move(damping_net)};
  }
  return dynamics::DynModel(n, m, std::move(mass), std::move(potential), std::move(force),
                            std::move(wb));
}

Components Describe(const dynamics::DynModel& model) {
  Components c{MassKind::kWhiteBox, PotentialKind::kWhiteBox, ForceKind::kWhiteBox};
  if (std::holds_alternative<dynamics::LearnedCholeskyMass>(model.mass())) {
    c.mass = MassKind::kLearned;
  }
  if (std::holds_alternative<dynamics::LearnedPotential>(model.potential())) {
    c.potential = PotentialKind::kLearned;
  }
  if (std::holds_alternative<dynamics::GenericForce>(model.force())) c.force = ForceKind::kGeneric;
  if (std::holds_alternative<dynamics::ControlAffineForce>(model.force())) {
    c.force = ForceKind::kControlAffine;
  }
  return c;
}

}  // namespace gbdyn::modelzoo
