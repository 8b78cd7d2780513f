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

#ifndef GBDYN_CONTROL_MBRL_H_
#define GBDYN_CONTROL_MBRL_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Core>

#include "gbdyn/control/dircol.h"
#include "gbdyn/control/trajectory.h"
#include "gbdyn/control/tvlqr.h"
#include "gbdyn/dynamics/dyn_model.h"
#include "gbdyn/modelzoo/model_spec.h"
#include "gbdyn/systems/double_pendulum.h"
#include "gbdyn/training/dataset.h"
#include "gbdyn/training/trainer.h"

namespace gbdyn::control {

struct MbrlConfig {
  double reach_time = 2.06;  // s
  double hold_time = 0.5;
  double dt = 0.1;
  double clip = 120.0;
  double noise_std = 0.25;
  double initial_input_std = 120.0;
  int initial_epochs = 5000;
  int episode_epochs = 1000;
  training::TrainConfig train;  // epochs are overridden per phase
  Eigen::VectorXd goal = (Eigen::VectorXd(4) << 3.14159265358979323846, 0.0, 0.0, 0.0).finished();
  Eigen::VectorXd start = Eigen::VectorXd::Zero(4);
  int max_episodes = 15;
  double success_threshold = 0.3;  // m
  std::uint64_t seed = 0;
  DircolConfig dircol;
  QuadraticCost tracking = QuadraticCost::Default(2, 2);

  MbrlConfig();
  int reach_steps() const;
  int steps() const;  // H: reach plus hold intervals
  void Validate() const;
};

// States reached by applying `controls` (M x H) from x0 on `system`. The
// rollout stops early if the state stops being finite or exceeds 1e4; the
// returned states then hold fewer than H + 1 columns.
struct Rollout {
  Eigen::MatrixXd states;  // 2N x (steps + 1)
  Eigen::MatrixXd inputs;  // M x steps
  bool diverged = false;
};

// With `wrap_angles` every coordinate of q is mapped into [-pi, pi) after
// each step.
Rollout OpenLoopRollout(const dynamics::Model& system, const Eigen::VectorXd& x0,
                        const Eigen::MatrixXd& controls, double dt, bool wrap_angles = false);

// Maps the first `dof` entries of x into [-pi, pi).
Eigen::VectorXd WrapAngles(const Eigen::VectorXd& x, int dof);
// Euclidean distance between two states with angle differences wrapped.
double WrappedStateDistance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int dof);
// Closes the loop with the TVLQR policy on `system`.
Rollout PolicyRollout(const dynamics::Model& system, const TvlqrPolicy& policy,
                      const Eigen::VectorXd& x0, double clip);

// Mean over the H + 1 knots of the distance between the end effector and the
// upright tip (0, l1 + l2). Knots lost to a diverged rollout count as the
// largest possible distance 2 (l1 + l2).
double PerformanceMetric(const systems::DoublePendulumParams& params,
                         const Eigen::MatrixXd& states, int steps);

// Transitions of a rollout tagged as trajectory data.
training::TransitionDataset ToDataset(const Rollout& rollout, double dt);

struct EpisodeResult {
  DircolResult plan;
  TvlqrPolicy policy;
  Rollout evaluation;   // noise-free nominal and gains
  Rollout exploration;  // perturbed nominal, empty when not requested
  double performance = 0.0;
};

// Plans on `model`, synthesizes TVLQR and rolls out on `system`. With
// `explore`, a second policy is built about the perturbed nominal.
EpisodeResult RunEpisode(const dynamics::Model& model, const dynamics::Model& system,
                         const systems::DoublePendulumParams& params, const MbrlConfig& config,
                         bool explore, std::uint64_t noise_seed,
                         const Trajectory* warm_start = nullptr);

struct EpisodeRecord {
  int episode = 0;
  double performance = 0.0;
  bool plan_feasible = false;
  std::int64_t dataset_size = 0;
  bool success = false;
};

struct MbrlResult {
  std::vector<EpisodeRecord> episodes;
  std::optional<int> first_success;
  training::TransitionDataset data;
};

using EpisodeCallback = std::function<void(const EpisodeRecord&)>;

// Episode 0 applies clipped N(0, initial_input_std^2) inputs; the model is
// then trained for initial_epochs. Each later episode plans on the learned
// model, evaluates the noise-free policy on the true system, rolls out the
// exploring policy, appends its transitions and trains for episode_epochs.
MbrlResult MbrlLoop(const modelzoo::ModelSpec& spec,
                    const systems::DoublePendulumParams& truth, const MbrlConfig& config,
                    const EpisodeCallback& on_episode = nullptr);

void WriteEpisodeCsvHeader(std::ostream& out);
void WriteEpisodeCsvRow(std::ostream& out, const EpisodeRecord& record);

}  // namespace gbdyn::control

#endif  // GBDYN_CONTROL_MBRL_H_
