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

#ifndef GBDYN_SYSTEMS_SAMPLING_H_
#define GBDYN_SYSTEMS_SAMPLING_H_

#include <cstdint>

#include "gbdyn/dynamics/dyn_model.h"
#include "gbdyn/training/dataset.h"

namespace gbdyn::systems {

// Every coordinate q_i ~ U(q_low, q_high), qdot_i ~ U(qdot_low, qdot_high),
// u_j ~ N(0, u_std^2).
struct SamplingSpec {
  double q_low = -3.14159265358979323846;
  double q_high = 3.14159265358979323846;
  double qdot_low = -10.0;
  double qdot_high = 10.0;
  double u_std = 120.0;
  double dt = 0.01;
  std::int64_t count = 1024;
  std::uint64_t seed = 0;

  void Validate() const;
};

// I.i.d. transitions; each next state is one RK4 step of `system`. Sample k
// draws from its own stream, so the first k samples do not depend on count.
training::TransitionDataset SampleTransitions(const dynamics::Model& system,
                                              const SamplingSpec& spec);

}  // namespace gbdyn::systems

#endif  // GBDYN_SYSTEMS_SAMPLING_H_
