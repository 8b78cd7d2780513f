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

#include "gbdyn/control/mbrl.h"

#include <cmath>
#include <numbers>
#include <iomanip>
#include <random>

#include "gbdyn/dynamics/integrator.h"
#include "gbdyn/error.h"
#include "gbdyn/modelzoo/zoo.h"
#include "gbdyn/random.h"
#include "gbdyn/training/trainer.h"

namespace gbdyn::control {
namespace {

constexpr double kDivergence = 1e4;

std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  return MakeStream(seed, name, index)();
}

bool Healthy(const Eigen::VectorXd& x) {
  return x.allFinite() && x.lpNorm<Eigen::Infinity>() <= kDivergence;
}

// Advances one step; returns false when the result is unusable.
bool Step(const dynamics::Model& system, Eigen::VectorXd& x, const Eigen::VectorXd& u,
          double dt) {
  const int n = system.dof();
  try {
    dynamics::GeneralizedState next =
        dynamics::Rk4Step(system, {x.head(n), x.tail(n)}, u, dt);
    Eigen::VectorXd y(2 * n);
    y << next.q, next.qdot;
    if (!Healthy(y)) return false;
    x = y;
    return true;
  } catch (const NumericError&) {
    return false;
  }
}

}  // namespace

MbrlConfig::MbrlConfig() {
  train.learning_rate = 3e-4;
  dircol.cost = QuadraticCost::Default(2, 2);
}

int MbrlConfig::reach_steps() const {
  return static_cast<int>(std::ceil(reach_time / dt - 1e-9));
}

int MbrlConfig::steps() const {
  return reach_steps() + static_cast<int>(std::ceil(hold_time / dt - 1e-9));
}

void MbrlConfig::Validate() const {
  if (!(dt > 0.0) || !(reach_time > 0.0) || !(hold_time >= 0.0)) {
    throw ConfigError("horizon and time step must be positive");
  }
  if (!(clip > 0.0)) throw ConfigError("input clip must be positive");
  if (!(noise_std >= 0.0) || !(initial_input_std >= 0.0)) {
    throw ConfigError("noise levels must be non-negative");
  }
  if (initial_epochs < 0 || episode_epochs < 0 || max_episodes < 1) {
    throw ConfigError("epoch counts must be non-negative and max_episodes positive");
  }
  if (goal.size() != 4 || start.size() != 4) throw ConfigError("start and goal must be 4-vectors");
  if (!(success_threshold > 0.0)) throw ConfigError("success threshold must be positive");
  train.Validate();
}

Eigen::VectorXd WrapAngles(const Eigen::VectorXd& x, int dof) {
  if (dof < 0 || dof > x.size()) throw ShapeError("state is shorter than the coordinates");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  Eigen::VectorXd out = x;
  for (int i = 0; i < dof; ++i) {
    out(i) -= kTwoPi * std::floor((x(i) + std::numbers::pi) / kTwoPi);
    // Rounding can land exactly on +pi.
    if (out(i) >= std::numbers::pi) out(i) -= kTwoPi;
  }
  return out;
}

double WrappedStateDistance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int dof) {
  if (a.size() != b.size()) throw ShapeError("states differ in size");
  return WrapAngles(a - b, dof).norm();
}

Rollout OpenLoopRollout(const dynamics::Model& system, const Eigen::VectorXd& x0,
                        const Eigen::MatrixXd& controls, double dt, bool wrap_angles) {
  Rollout r;
  r.states.resize(x0.size(), controls.cols() + 1);
  r.inputs.resize(controls.rows(), controls.cols());
  r.states.col(0) = x0;
  Eigen::VectorXd x = x0;
  for (Eigen::Index t = 0; t < controls.cols(); ++t) {
    if (!Step(system, x, controls.col(t), dt)) {
      r.diverged = true;
      r.states.conservativeResize(Eigen::NoChange, t + 1);
      r.inputs.conservativeResize(Eigen::NoChange, t);
      return r;
    }
    if (wrap_angles) x = WrapAngles(x, system.dof());
    r.inputs.col(t) = controls.col(t);
    r.states.col(t + 1) = x;
  }
  return r;
}

Rollout PolicyRollout(const dynamics::Model& system, const TvlqrPolicy& policy,
                      const Eigen::VectorXd& x0, double clip) {
  const int h = policy.horizon();
  Rollout r;
  r.states.resize(x0.size(), h + 1);
  r.inputs.resize(system.inputs(), h);
  r.states.col(0) = x0;
  Eigen::VectorXd x = x0;
  for (int t = 0; t < h; ++t) {
    const Eigen::VectorXd u = ApplyPolicy(policy, x, t, clip);
    if (!Step(system, x, u, policy.nominal.dt)) {
      r.diverged = true;
      r.states.conservativeResize(Eigen::NoChange, t + 1);
      r.inputs.conservativeResize(Eigen::NoChange, t);
      return r;
    }
    r.inputs.col(t) = u;
    r.states.col(t + 1) = x;
  }
  return r;
}

double PerformanceMetric(const systems::DoublePendulumParams& params,
                         const Eigen::MatrixXd& states, int steps) {
  if (states.cols() == 0) throw ConfigError("performance needs a nonempty trajectory");
  const Eigen::Vector2d target(0.0, params.l1 + params.l2);
  const Eigen::Index knots = std::max<Eigen::Index>(steps + 1, states.cols());
  double total = 0.0;
  for (Eigen::Index k = 0; k < states.cols(); ++k) {
    total += (systems::EndEffector(params, states.col(k).head<2>()) - target).norm();
  }
  total += static_cast<double>(knots - states.cols()) * 2.0 * (params.l1 + params.l2);
  return total / static_cast<double>(knots);
}

training::TransitionDataset ToDataset(const Rollout& rollout, double dt) {
  const auto n = static_cast<int>(rollout.states.rows() / 2);
  const auto m = static_cast<int>(rollout.inputs.rows());
  auto d = training::TransitionDataset::Empty(n, m, dt, training::Provenance::kTrajectory);
  const Eigen::Index t = rollout.inputs.cols();
  d.q = rollout.states.topLeftCorner(n, t);
  d.qdot = rollout.states.bottomLeftCorner(n, t);
  d.u = rollout.inputs;
  d.q_next = rollout.states.block(0, 1, n, t);
  d.qdot_next = rollout.states.block(n, 1, n, t);
  return d;
}

EpisodeResult RunEpisode(const dynamics::Model& model, const dynamics::Model& system,
                         const systems::DoublePendulumParams& params, const MbrlConfig& config,
                         bool explore, std::uint64_t noise_seed, const Trajectory* warm_start) {
  config.Validate();
  const int steps = config.steps();
  DircolConfig dircol = config.dircol;
  dircol.clip = config.clip;
  dircol.track_from = config.reach_steps();
  EpisodeResult out;
  try {
    out.plan = DircolPlan(model, config.start, config.goal, steps, config.dt, dircol, warm_start);
    out.policy = Tvlqr(model, out.plan.trajectory, config.tracking);
  } catch (const NumericError&) {
    // The model cannot be planned on; fall back to doing nothing.
    out.plan = DircolResult{};
    out.plan.trajectory.dt = config.dt;
    out.plan.trajectory.states = config.start.replicate(1, steps + 1);
    out.plan.trajectory.inputs = Eigen::MatrixXd::Zero(system.inputs(), steps + 1);
    out.policy = TvlqrPolicy{out.plan.trajectory,
                             std::vector<Eigen::MatrixXd>(
                                 steps, Eigen::MatrixXd::Zero(system.inputs(), 4)),
                             config.tracking};
  }
  out.evaluation = PolicyRollout(system, out.policy, config.start, config.clip);
  out.performance = PerformanceMetric(params, out.evaluation.states, steps);
  if (explore) {
    const Trajectory noisy = PerturbNominal(out.plan.trajectory, config.noise_std, noise_seed);
    TvlqrPolicy exploring;
    try {
      exploring = Tvlqr(model, noisy, config.tracking);
    } catch (const NumericError&) {
      exploring = out.policy;
      exploring.nominal = noisy;
    }
    out.exploration = PolicyRollout(system, exploring, config.start, config.clip);
  }
  return out;
}

MbrlResult MbrlLoop(const modelzoo::ModelSpec& spec, const systems::DoublePendulumParams& truth,
                    const MbrlConfig& config, const EpisodeCallback& on_episode) {
  config.Validate();
  const dynamics::Model system = systems::TrueSystem(truth);
  const int steps = config.steps();
  MbrlResult result;

  // Episode 0: random actuation.
  std::mt19937_64 rng = MakeStream(config.seed, "explore");
  std::normal_distribution<double> input(0.0, config.initial_input_std);
  Eigen::MatrixXd controls(system.inputs(), steps);
  for (Eigen::Index t = 0; t < controls.cols(); ++t) {
    for (Eigen::Index j = 0; j < controls.rows(); ++j) {
      controls(j, t) = std::clamp(input(rng), -config.clip, config.clip);
    }
  }
  const Rollout random = OpenLoopRollout(system, config.start, controls, config.dt);
  result.data = ToDataset(random, config.dt);

  modelzoo::ModelSpec model_spec = spec;
  model_spec.seed = DeriveSeed(config.seed, "init", 0);
  dynamics::Model model = modelzoo::Build(model_spec);
  training::TrainConfig train = config.train;
  train.epochs = config.initial_epochs;
  train.seed = DeriveSeed(config.seed, "batches", 0);
  training::TrainResult trained = training::Train(model, result.data, train);

  auto record = [&](int episode, double performance, bool feasible) {
    EpisodeRecord r{episode, performance, feasible, result.data.size(),
                    performance <= config.success_threshold};
    if (r.success && !result.first_success) result.first_success = episode;
    result.episodes.push_back(r);
    if (on_episode) on_episode(r);
  };
  record(0, PerformanceMetric(truth, random.states, steps), false);

  std::optional<Trajectory> warm;
  for (int episode = 1; episode < config.max_episodes; ++episode) {
    EpisodeResult ep = RunEpisode(model, system, truth, config, true,
                                  DeriveSeed(config.seed, "noise", episode),
                                  warm ? &*warm : nullptr);
    if (ep.plan.trajectory.knots() == steps + 1) warm = ep.plan.trajectory;
    if (ep.exploration.inputs.cols() > 0) result.data.Append(ToDataset(ep.exploration, config.dt));
    record(episode, ep.performance, ep.plan.feasible);
    if (episode + 1 < config.max_episodes) {
      train.epochs = config.episode_epochs;
      train.seed = DeriveSeed(config.seed, "batches", static_cast<std::uint64_t>(episode));
      trained = training::Train(model, result.data, train, &trained.optimizer);
    }
  }
  return result;
}

void WriteEpisodeCsvHeader(std::ostream& out) {
  out << "episode,performance_m,plan_feasible,dataset_size\n";
}

void WriteEpisodeCsvRow(std::ostream& out, const EpisodeRecord& record) {
  out << record.episode << ',' << std::setprecision(17) << record.performance << ','
      << (record.plan_feasible ? "true" : "false") << ',' << record.dataset_size << '\n';
}

}  // namespace gbdyn::control
