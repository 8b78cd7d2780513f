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

#include "gbdyn/training/loss.h"

#include "gbdyn/ad/ops.h"
#include "gbdyn/dynamics/integrator.h"
#include "gbdyn/error.h"

namespace gbdyn::training {
namespace {

void Check(const dynamics::Model& model, const TransitionDataset& data, double lambda) {
  if (data.size() == 0) throw ConfigError("prediction loss needs a nonempty batch");
  if (!(lambda >= 0.0)) throw ConfigError("velocity weight must be non-negative");
  data.Validate();
  if (data.dof != model.dof() || data.inputs != model.inputs()) {
    throw ShapeError("dataset dimensions do not match the model");
  }
}

// Bounds tape growth for large validation sets.
constexpr Eigen::Index kChunk = 2048;

}  // namespace

ad::Var PredictionLoss(ad::Tape& tape, const dynamics::BoundModel& bound,
                       const TransitionDataset& data, double lambda) {
  dynamics::StateVars x{tape.Constant(data.q), tape.Constant(data.qdot)};
  dynamics::StateVars step = dynamics::Rk4Increment(bound, x, tape.Constant(data.u), data.dt);
  ad::Var q_err = step.q - tape.Constant(data.q_next - data.q);
  ad::Var qdot_err = step.qdot - tape.Constant(data.qdot_next - data.qdot);
  ad::Var total = ad::Sum(ad::Square(q_err)) + ad::Sum(ad::Square(qdot_err)) * lambda;
  return total * (1.0 / static_cast<double>(data.size()));
}

double PredictionLoss(const dynamics::Model& model, const TransitionDataset& data,
                      double lambda) {
  Check(model, data, lambda);
  double weighted = 0.0;
  for (Eigen::Index start = 0; start < data.size(); start += kChunk) {
    const Eigen::Index len = std::min(kChunk, data.size() - start);
    ad::Tape tape;
    dynamics::BoundModel bound = model.Bind(tape, false);
    weighted += PredictionLoss(tape, bound, data.Slice(start, len), lambda).scalar() *
                static_cast<double>(len);
  }
  return weighted / static_cast<double>(data.size());
}

double PredictionLossAndGrad(const dynamics::Model& model, const TransitionDataset& data,
                             double lambda, ad::ParamVector& grad) {
  Check(model, data, lambda);
  ad::Tape tape;
  dynamics::BoundModel bound = model.Bind(tape, true);
  ad::Var loss = PredictionLoss(tape, bound, data, lambda);
  tape.Backward(loss);
  grad = model.CollectGrad(tape, bound);
  return loss.scalar();
}

double Validate(const dynamics::Model& model, const TransitionDataset& data, double lambda) {
  return PredictionLoss(model, data, lambda);
}

}  // namespace gbdyn::training
