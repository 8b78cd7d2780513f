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

#include "gbdyn/ad/adam.h"

#include <cmath>

#include "gbdyn/error.h"

namespace gbdyn::ad {

AdamState AdamState::Zero(Eigen::Index size, const AdamConfig& config) {
  AdamState state;
  state.config = config;
  state.first_moment = Eigen::VectorXd::Zero(size);
  state.second_moment = Eigen::VectorXd::Zero(size);
  return state;
}

namespace {

template <typename Rate>
void Update(AdamState& state, ParamVector& params, const ParamVector& grad, const Rate& rate) {
  if (params.size() != grad.size() || state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size()) {
    throw ShapeError("Adam state, parameters and gradient differ in size");
  }
  const AdamConfig& c = state.config;
  state.step += 1;
  state.first_moment = c.beta1 * state.first_moment + (1.0 - c.beta1) * grad;
  state.second_moment =
      c.beta2 * state.second_moment + (1.0 - c.beta2) * grad.cwiseAbs2();
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  params.array() -= rate * (state.first_moment.array() / correction1) /
                    ((state.second_moment.array() / correction2).sqrt() + c.epsilon);
}

}  // namespace

void AdamStep(AdamState& state, ParamVector& params, const ParamVector& grad) {
  Update(state, params, grad, state.config.learning_rate);
}

void AdamStep(AdamState& state, ParamVector& params, const ParamVector& grad,
              const Eigen::VectorXd& learning_rates) {
  if (learning_rates.size() != params.size()) {
    throw ShapeError("one learning rate per parameter is required");
  }
  Update(state, params, grad, learning_rates.array());
}

}  // namespace gbdyn::ad
