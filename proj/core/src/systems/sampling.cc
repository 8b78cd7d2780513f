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

#include "gbdyn/systems/sampling.h"

#include <cmath>
#include <random>

#include "gbdyn/dynamics/integrator.h"
#include "gbdyn/error.h"
#include "gbdyn/random.h"

namespace gbdyn::systems {

void SamplingSpec::Validate() const {
  if (!(dt > 0.0)) throw ConfigError("sampling time step must be positive");
  if (count < 1) throw ConfigError("sample count must be at least 1");
  if (!(q_low < q_high) || !(qdot_low < qdot_high)) {
    throw ConfigError("sampling ranges must be non-empty");
  }
  if (!(u_std >= 0.0) || !std::isfinite(u_std)) {
    throw ConfigError("input standard deviation must be non-negative");
  }
}

training::TransitionDataset SampleTransitions(const dynamics::Model& system,
                                              const SamplingSpec& spec) {
  spec.Validate();
  const int n = system.dof();
  const int m = system.inputs();
  auto data = training::TransitionDataset::Empty(n, m, spec.dt, training::Provenance::kIid);
  const auto count = static_cast<Eigen::Index>(spec.count);
  data.q.resize(n, count);
  data.qdot.resize(n, count);
  data.u.resize(m, count);
  for (Eigen::Index k = 0; k < count; ++k) {
    std::mt19937_64 rng = MakeStream(spec.seed, "data", static_cast<std::uint64_t>(k));
    std::uniform_real_distribution<double> q_dist(spec.q_low, spec.q_high);
    std::uniform_real_distribution<double> qdot_dist(spec.qdot_low, spec.qdot_high);
    std::normal_distribution<double> u_dist(0.0, spec.u_std);
    for (int i = 0; i < n; ++i) data.q(i, k) = q_dist(rng);
    for (int i = 0; i < n; ++i) data.qdot(i, k) = qdot_dist(rng);
    for (int j = 0; j < m; ++j) data.u(j, k) = spec.u_std > 0.0 ? u_dist(rng) : 0.0;
  }
  // Chunked so the tape stays small; columns are independent.
  constexpr Eigen::Index kChunk = 4096;
  data.q_next.resize(n, count);
  data.qdot_next.resize(n, count);
  for (Eigen::Index start = 0; start < count; start += kChunk) {
    const Eigen::Index len = std::min(kChunk, count - start);
    auto [q1, qd1] = dynamics::Rk4StepBatch(system, data.q.middleCols(start, len),
                                            data.qdot.middleCols(start, len),
                                            data.u.middleCols(start, len), spec.dt);
    data.q_next.middleCols(start, len) = q1;
    data.qdot_next.middleCols(start, len) = qd1;
  }
  return data;
}

}  // namespace gbdyn::systems
