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


#include "commands.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "gbdyn/control/mbrl.h"
#include "gbdyn/error.h"
#include "gbdyn/modelzoo/checkpoint.h"
#include "gbdyn/modelzoo/model_spec.h"
#include "gbdyn/modelzoo/zoo.h"
#include "gbdyn/random.h"
#include "gbdyn/systems/double_pendulum.h"
#include "gbdyn/systems/sampling.h"
#include "gbdyn/training/dataset.h"
#include "gbdyn/training/loss.h"
#include "gbdyn/training/sweep.h"
#include "gbdyn/training/trainer.h"
#include "output_dir.h"

namespace gbdyn::cli {

namespace {

std::mutex log_mutex;

void Log(const std::string& line) {
  std::lock_guard<std::mutex> lock(log_mutex);
  std::cerr << line << std::endl;
}

std::uint64_t SubSeed(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  return MakeStream(seed, name, index)();
}

// Jobs may finish in any order; callers index results by job number.
void RunJobs(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> threads;
    for (std::size_t w = 1; w < std::min(workers, count); ++w) threads.emplace_back(work);
    work();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::size_t Workers(const RunConfig& config, const std::string& key) {
  const std::int64_t fallback = std::max(1u, std::thread::hardware_concurrency());
  const std::int64_t workers = config.GetInt(key, fallback);
  if (workers < 1) throw ConfigError(key + " must be positive");
  return static_cast<std::size_t>(workers);
}

std::string Number(double value) {
  std::ostringstream out;
  out << std::setprecision(17) << value;
  return out.str();
}

systems::DoublePendulumParams ReadSystem(const RunConfig& config) {
  systems::DoublePendulumParams p;
  p.m1 = config.GetDouble("system.m1", p.m1);
  p.m2 = config.GetDouble("system.m2", p.m2);
  p.l1 = config.GetDouble("system.l1", p.l1);
  p.l2 = config.GetDouble("system.l2", p.l2);
  p.g = config.GetDouble("system.g", p.g);
  p.b1 = config.GetDouble("system.b1", p.b1);
  p.b2 = config.GetDouble("system.b2", p.b2);
  p.eta1 = config.GetDouble("system.eta1", p.eta1);
  p.eta2 = config.GetDouble("system.eta2", p.eta2);
  try {
    p.Validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return p;
}

systems::SamplingSpec ReadSampling(const RunConfig& config) {
  systems::SamplingSpec s;
  s.q_low = config.GetDouble("data.q_low", s.q_low);
  s.q_high = config.GetDouble("data.q_high", s.q_high);
  s.qdot_low = config.GetDouble("data.qdot_low", s.qdot_low);
  s.qdot_high = config.GetDouble("data.qdot_high", s.qdot_high);
  s.u_std = config.GetDouble("data.u_std", s.u_std);
  s.dt = config.GetDouble("data.dt", s.dt);
  s.count = config.GetInt("data.count", s.count);
  return s;
}

modelzoo::ModelSpec ReadModelSpec(const RunConfig& config) {
  modelzoo::ModelSpec m;
  m.dof = static_cast<int>(config.GetInt("model.dof", m.dof));
  m.inputs = static_cast<int>(config.GetInt("model.inputs", m.inputs));
  m.component_hidden = config.GetIntList("model.component_hidden", m.component_hidden);
  m.naive_hidden = config.GetIntList("model.naive_hidden", m.naive_hidden);
  m.delta = config.GetDouble("model.delta", m.delta);
  return m;
}

training::TrainConfig ReadTrain(const RunConfig& config, bool with_epochs) {
  training::TrainConfig t;
  t.lambda = config.GetDouble("train.lambda", t.lambda);
  t.learning_rate = config.GetDouble("train.learning_rate", t.learning_rate);
  t.white_box_learning_rate =
      config.GetDouble("train.white_box_learning_rate", t.white_box_learning_rate);
  t.batch_size = config.GetInt("train.batch_size", t.batch_size);
  t.threshold = config.GetDouble("train.threshold", t.threshold);
  if (with_epochs) t.epochs = static_cast<int>(config.GetInt("train.epochs", t.epochs));
  return t;
}

void ValidateSpec(const modelzoo::ModelSpec& spec) {
  try {
    spec.Validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

// Rejects unknown keys, then stages the output directory with the config.
std::unique_ptr<OutputDir> Prepare(const RunConfig& config) {
  const std::filesystem::path target = config.OutputPath();
  config.CheckAllRead();
  auto out = std::make_unique<OutputDir>(target);
  out->WriteText("config.ini", config.text());
  return out;
}

void Finish(const RunConfig& config, OutputDir& out) {
  config.WriteResolved(out.File("resolved.ini"));
  out.Commit();
}

std::string RowStats(const std::string& name, const Eigen::MatrixXd& values) {
  std::ostringstream out;
  out << std::setprecision(6);
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    const Eigen::ArrayXd row = values.row(r).transpose().array();
    const double mean = row.mean();
    const double std = std::sqrt((row - mean).square().mean());
    out << name << r + 1 << ',' << mean << ',' << std << ',' << row.minCoeff() << ','
        << row.maxCoeff() << '\n';
  }
  return out.str();
}

void GenerateData(const RunConfig& config) {
  const std::uint64_t seed = config.GetSeed();
  const systems::DoublePendulumParams params = ReadSystem(config);
  systems::SamplingSpec sampling = ReadSampling(config);
  sampling.seed = seed;
  try {
    sampling.Validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  auto out = Prepare(config);

  const training::TransitionDataset data =
      systems::SampleTransitions(systems::TrueSystem(params), sampling);
  training::SaveDataset(data, out->File("data.gbds").string());

  std::string stats = "variable,mean,std,min,max\n";
  stats += RowStats("q", data.q) + RowStats("qdot", data.qdot) + RowStats("u", data.u) +
           RowStats("q_next", data.q_next) + RowStats("qdot_next", data.qdot_next);
  out->WriteText("stats.csv", stats);
  std::cout << "samples " << data.size() << ", dt " << data.dt << "\n" << stats;
  Finish(config, *out);
}

void Train(const RunConfig& config) {
  const std::uint64_t seed = config.GetSeed();
  modelzoo::ModelSpec spec = ReadModelSpec(config);
  spec.name = config.GetString("model.name", spec.name);
  spec.seed = seed;
  ValidateSpec(spec);
  training::TrainConfig train = ReadTrain(config, true);
  train.seed = seed;
  try {
    train.Validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const std::filesystem::path dataset_path = config.GetInputPath("train.dataset");
  std::optional<std::filesystem::path> validation_path;
  if (config.Has("train.validation")) validation_path = config.GetInputPath("train.validation");
  std::optional<std::filesystem::path> resume_path;
  if (config.Has("train.resume")) resume_path = config.GetInputPath("train.resume");
  const int log_every = static_cast<int>(config.GetInt("train.log_every", 100));
  if (log_every < 1) throw ConfigError("train.log_every must be positive");

  const training::TransitionDataset data = training::LoadDataset(dataset_path.string());
  if (data.dof != spec.dof || data.inputs != spec.inputs) {
    throw ConfigError("dataset has " + std::to_string(data.dof) + " coordinates and " +
                      std::to_string(data.inputs) + " inputs but the model expects " +
                      std::to_string(spec.dof) + " and " + std::to_string(spec.inputs));
  }
  std::optional<training::TransitionDataset> validation;
  if (validation_path) {
    validation = training::LoadDataset(validation_path->string());
    if (validation->dof != data.dof || validation->inputs != data.inputs ||
        validation->dt != data.dt) {
      throw ConfigError("validation set does not match the training set");
    }
  }

  std::optional<dynamics::Model> model;
  std::optional<ad::AdamState> optimizer;
  if (resume_path) {
    modelzoo::Checkpoint checkpoint = modelzoo::LoadCheckpoint(resume_path->string());
    if (checkpoint.name != spec.name) {
      throw ConfigError("checkpoint holds model " + checkpoint.name + ", not " + spec.name);
    }
    if (checkpoint.model.dof() != spec.dof || checkpoint.model.inputs() != spec.inputs) {
      throw ConfigError("checkpoint dimensions do not match the model");
    }
    model.emplace(std::move(checkpoint.model));
    optimizer = std::move(checkpoint.optimizer);
  } else {
    model.emplace(modelzoo::Build(spec));
  }
  auto out = Prepare(config);

  std::ostringstream history;
  history << "epoch,train_loss\n" << std::setprecision(17);
  const training::TrainResult result = training::Train(
      *model, data, train, optimizer ? &*optimizer : nullptr, [&](int epoch, double loss) {
        history << epoch << ',' << loss << '\n';
        if ((epoch + 1) % log_every == 0) {
          Log("epoch " + std::to_string(epoch + 1) + " loss " + Number(loss));
        }
      });
  out->WriteText("history.csv", history.str());

  const double train_loss = training::PredictionLoss(*model, data, train.lambda);
  const double val_loss = validation ? training::Validate(*model, *validation, train.lambda)
                                     : std::numeric_limits<double>::quiet_NaN();
  std::ostringstream summary;
  summary << "model,samples,epochs,train_loss,val_loss,passed\n"
          << spec.name << ',' << data.size() << ',' << train.epochs << ','
          << std::setprecision(17) << train_loss << ',' << val_loss << ','
          << (validation && val_loss <= train.threshold ? "true" : "false") << '\n';
  out->WriteText("summary.csv", summary.str());
  std::cout << summary.str();

  modelzoo::SaveCheckpoint(out->File("model.ckpt").string(), spec.name, *model,
                           &result.optimizer);
  Finish(config, *out);
}

void Sweep(const RunConfig& config) {
  const std::uint64_t seed = config.GetSeed();
  training::SweepConfig sweep;
  sweep.system = ReadSystem(config);
  sweep.sampling = ReadSampling(config);
  sweep.train = ReadTrain(config, true);
  sweep.min_size = config.GetInt("sweep.min_size", sweep.min_size);
  sweep.max_size = config.GetInt("sweep.max_size", sweep.max_size);
  sweep.validation_size = config.GetInt("sweep.validation_size", sweep.validation_size);
  const std::vector<std::string> models =
      config.GetStringList("sweep.models", modelzoo::ModelNames());
  const std::int64_t seed_count = config.GetInt("sweep.seeds", 5);
  const std::size_t workers = Workers(config, "sweep.workers");
  modelzoo::ModelSpec base = ReadModelSpec(config);
  if (seed_count < 1) throw ConfigError("sweep.seeds must be positive");
  if (models.empty()) throw ConfigError("sweep.models is empty");
  try {
    sweep.Validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  for (const std::string& name : models) {
    base.name = name;
    ValidateSpec(base);
  }
  auto out = Prepare(config);

  const std::size_t seeds = static_cast<std::size_t>(seed_count);
  std::vector<training::SweepResult> results(models.size() * seeds);
  RunJobs(results.size(), workers, [&](std::size_t job) {
    modelzoo::ModelSpec spec = base;
    spec.name = models[job / seeds];
    const std::uint64_t job_seed = SubSeed(seed, "sweep", job % seeds);
    results[job] = training::DataEfficiencySweep(
        spec, sweep, {job_seed}, [&](const training::SweepCell& cell) {
          Log(cell.model + " seed " + std::to_string(job % seeds) + " size " +
              std::to_string(cell.size) + " val " + Number(cell.val_loss) +
              (cell.error.empty() ? "" : " error: " + cell.error));
        });
  });

  std::ostringstream cells;
  std::ostringstream brackets;
  training::WriteSweepCsvHeader(cells);
  brackets << "model,seed,largest_failing,smallest_passing\n";
  for (const training::SweepResult& result : results) {
    for (const training::SweepCell& cell : result.cells) training::WriteSweepCsvRow(cells, cell);
    for (const training::SweepBracket& b : result.brackets) {
      brackets << b.model << ',' << b.seed << ',' << b.failing << ','
               << (b.passing ? std::to_string(*b.passing) : "exceeds_max") << '\n';
    }
  }
  out->WriteText("sweep.csv", cells.str());
  out->WriteText("brackets.csv", brackets.str());
  std::cout << brackets.str();
  Finish(config, *out);
}

struct RolloutSource {
  std::string label;
  dynamics::Model model;
};

void RolloutEval(const RunConfig& config) {
  const std::uint64_t seed = config.GetSeed();
  const systems::DoublePendulumParams params = ReadSystem(config);
  const double dt = config.GetDouble("rollout.dt", 0.01);
  const double duration = config.GetDouble("rollout.duration", 5.0);
  const std::int64_t trajectories = config.GetInt("rollout.trajectories", 3);
  const double input_std = config.GetDouble("rollout.input_std", 120.0);
  const double q_low = config.GetDouble("rollout.q_low", -std::numbers::pi);
  const double q_high = config.GetDouble("rollout.q_high", std::numbers::pi);
  const double qdot_low = config.GetDouble("rollout.qdot_low", -1.0);
  const double qdot_high = config.GetDouble("rollout.qdot_high", 1.0);
  const std::vector<std::string> entries = config.GetStringList("rollout.checkpoints", {});
  if (!(dt > 0.0) || !(duration > 0.0)) throw ConfigError("rollout dt and duration must be positive");
  const double exact = duration / dt;
  const auto steps = static_cast<Eigen::Index>(std::llround(exact));
  if (steps < 1 || std::abs(exact - static_cast<double>(steps)) > 1e-9 * exact) {
    throw ConfigError("rollout duration is not a whole number of steps");
  }
  if (trajectories < 1) throw ConfigError("rollout.trajectories must be positive");
  if (!(input_std >= 0.0) || !(q_low <= q_high) || !(qdot_low <= qdot_high)) {
    throw ConfigError("invalid rollout sampling ranges");
  }

  std::vector<RolloutSource> sources;
  sources.push_back({"true", systems::TrueSystem(params)});
  for (const std::string& entry : entries) {
    if (entry == "true") continue;
    modelzoo::Checkpoint checkpoint = modelzoo::LoadCheckpoint(config.ResolveInput(entry).string());
    if (checkpoint.model.dof() != 2 || checkpoint.model.inputs() != 2) {
      throw ConfigError("checkpoint " + entry + " is not a double pendulum model");
    }
    for (const RolloutSource& s : sources) {
      if (s.label == checkpoint.name) throw ConfigError("two checkpoints named " + s.label);
    }
    sources.push_back({checkpoint.name, std::move(checkpoint.model)});
  }
  auto out = Prepare(config);

  std::ostringstream summary;
  summary << "trajectory,model,mean_error,final_error,diverged_step\n" << std::setprecision(17);
  for (std::int64_t k = 0; k < trajectories; ++k) {
    std::mt19937_64 rng = MakeStream(seed, "rollout", static_cast<std::uint64_t>(k));
    std::uniform_real_distribution<double> q(q_low, q_high);
    std::uniform_real_distribution<double> qdot(qdot_low, qdot_high);
    std::normal_distribution<double> input(0.0, input_std);
    Eigen::VectorXd x0(4);
    x0 << q(rng), q(rng), qdot(rng), qdot(rng);
    Eigen::MatrixXd controls(2, steps);
    for (Eigen::Index t = 0; t < steps; ++t) {
      controls(0, t) = input(rng);
      controls(1, t) = input(rng);
    }

    std::vector<control::Rollout> rollouts;
    for (const RolloutSource& s : sources) {
      rollouts.push_back(control::OpenLoopRollout(s.model, x0, controls, dt, true));
    }
    if (rollouts[0].diverged) throw NumericError("the true system diverged");

    std::ostringstream csv;
    csv << "step,time";
    for (const RolloutSource& s : sources) {
      csv << ',' << s.label << "_q1," << s.label << "_q2," << s.label << "_qdot1,"
          << s.label << "_qdot2," << s.label << "_error";
    }
    csv << '\n' << std::setprecision(17);
    const Eigen::MatrixXd& truth = rollouts[0].states;
    for (Eigen::Index t = 0; t <= steps; ++t) {
      csv << t << ',' << static_cast<double>(t) * dt;
      for (const control::Rollout& r : rollouts) {
        if (t < r.states.cols()) {
          for (Eigen::Index i = 0; i < 4; ++i) csv << ',' << r.states(i, t);
          csv << ',' << control::WrappedStateDistance(r.states.col(t), truth.col(t), 2);
        } else {
          csv << ",nan,nan,nan,nan,nan";
        }
      }
      csv << '\n';
    }
    out->WriteText("rollout_" + std::to_string(k) + ".csv", csv.str());

    for (std::size_t m = 0; m < sources.size(); ++m) {
      const control::Rollout& r = rollouts[m];
      const Eigen::Index n = r.states.cols();
      Eigen::VectorXd error(n);
      for (Eigen::Index t = 0; t < n; ++t) {
        error(t) = control::WrappedStateDistance(r.states.col(t), truth.col(t), 2);
      }
      const double infinity = std::numeric_limits<double>::infinity();
      summary << k << ',' << sources[m].label << ','
              << (r.diverged ? infinity : error.mean()) << ','
              << (r.diverged ? infinity : error(n - 1)) << ','
              << (r.diverged ? n - 1 : -1) << '\n';
    }
  }
  out->WriteText("summary.csv", summary.str());
  std::cout << summary.str();
  Finish(config, *out);
}

void Mbrl(const RunConfig& config) {
  const std::uint64_t seed = config.GetSeed();
  const systems::DoublePendulumParams params = ReadSystem(config);
  control::MbrlConfig mbrl;
  mbrl.train = ReadTrain(config, false);
  mbrl.reach_time = config.GetDouble("mbrl.reach_time", mbrl.reach_time);
  mbrl.hold_time = config.GetDouble("mbrl.hold_time", mbrl.hold_time);
  mbrl.dt = config.GetDouble("mbrl.dt", mbrl.dt);
  mbrl.clip = config.GetDouble("mbrl.clip", mbrl.clip);
  mbrl.noise_std = config.GetDouble("mbrl.noise_std", mbrl.noise_std);
  mbrl.initial_input_std = config.GetDouble("mbrl.initial_input_std", mbrl.initial_input_std);
  mbrl.initial_epochs = static_cast<int>(config.GetInt("mbrl.initial_epochs", mbrl.initial_epochs));
  mbrl.episode_epochs = static_cast<int>(config.GetInt("mbrl.episode_epochs", mbrl.episode_epochs));
  mbrl.max_episodes = static_cast<int>(config.GetInt("mbrl.max_episodes", mbrl.max_episodes));
  mbrl.success_threshold = config.GetDouble("mbrl.success_threshold", mbrl.success_threshold);
  mbrl.dircol.clip = mbrl.clip;
  mbrl.dircol.defect_tolerance =
      config.GetDouble("dircol.defect_tolerance", mbrl.dircol.defect_tolerance);
  mbrl.dircol.max_iterations =
      static_cast<int>(config.GetInt("dircol.max_iterations", mbrl.dircol.max_iterations));
  mbrl.dircol.initial_penalty =
      config.GetDouble("dircol.initial_penalty", mbrl.dircol.initial_penalty);
  const std::vector<std::string> models =
      config.GetStringList("mbrl.models", {"Naive", "MVF", "MVB"});
  const std::int64_t seed_count = config.GetInt("mbrl.seeds", 3);
  const std::size_t workers = Workers(config, "mbrl.workers");
  modelzoo::ModelSpec base = ReadModelSpec(config);
  if (seed_count < 1) throw ConfigError("mbrl.seeds must be positive");
  if (models.empty()) throw ConfigError("mbrl.models is empty");
  try {
    mbrl.Validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  for (const std::string& name : models) {
    base.name = name;
    ValidateSpec(base);
  }
  auto out = Prepare(config);

  const std::size_t seeds = static_cast<std::size_t>(seed_count);
  std::vector<control::MbrlResult> results(models.size() * seeds);
  RunJobs(results.size(), workers, [&](std::size_t job) {
    modelzoo::ModelSpec spec = base;
    spec.name = models[job / seeds];
    control::MbrlConfig job_config = mbrl;
    job_config.seed = SubSeed(seed, "mbrl", job % seeds);
    const std::string tag = spec.name + "_seed" + std::to_string(job % seeds);
    results[job] = control::MbrlLoop(spec, params, job_config,
                                     [&](const control::EpisodeRecord& r) {
                                       Log(tag + " episode " + std::to_string(r.episode) +
                                           " metric " + Number(r.performance));
                                     });
  });

  std::ostringstream summary;
  summary << "model,seed,first_success,episodes\n";
  for (std::size_t job = 0; job < results.size(); ++job) {
    const control::MbrlResult& result = results[job];
    const std::string tag = models[job / seeds] + "_seed" + std::to_string(job % seeds);
    std::ostringstream csv;
    control::WriteEpisodeCsvHeader(csv);
    for (const control::EpisodeRecord& r : result.episodes) control::WriteEpisodeCsvRow(csv, r);
    out->WriteText("episodes_" + tag + ".csv", csv.str());
    training::SaveDataset(result.data, out->File("data_" + tag + ".gbds").string());
    summary << models[job / seeds] << ',' << job % seeds << ','
            << (result.first_success ? std::to_string(*result.first_success) : "none") << ','
            << result.episodes.size() << '\n';
  }
  out->WriteText("summary.csv", summary.str());
  std::cout << summary.str();
  Finish(config, *out);
}

}  // namespace

const std::vector<std::string>& CommandNames() {
  static const std::vector<std::string> names = {"generate-data", "train", "sweep",
                                                 "rollout-eval", "mbrl"};
  return names;
}

void RunCommand(const std::string& command, const RunConfig& config) {
  static const std::map<std::string, void (*)(const RunConfig&)> table = {
      {"generate-data", GenerateData},
      {"train", Train},
      {"sweep", Sweep},
      {"rollout-eval", RolloutEval},
      {"mbrl", Mbrl},
  };
  const auto it = table.find(command);
  if (it == table.end()) throw ConfigError("unknown command " + command);
  it->second(config);
}

}  // namespace gbdyn::cli
