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

#include "gbdyn/training/sweep.h"

#include <iomanip>
#include <limits>

#include "gbdyn/error.h"
#include "gbdyn/modelzoo/zoo.h"
#include "gbdyn/random.h"
#include "gbdyn/training/loss.h"

namespace gbdyn::training {
namespace {

std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  return MakeStream(seed, name, index)();
}

}  // namespace

void SweepConfig::Validate() const {
  train.Validate();
  sampling.Validate();
  if (min_size < 1) throw ConfigError("minimum dataset size must be positive");
  std::int64_t s = min_size;
  while (s < max_size) s *= 2;
  if (s != max_size) throw ConfigError("max_size must be min_size times a power of two");
  if (validation_size < 1) throw ConfigError("validation set must be nonempty");
}

SweepResult DataEfficiencySweep(const modelzoo::ModelSpec& spec, const SweepConfig& config,
                                const std::vector<std::uint64_t>& seeds,
                                const CellCallback& on_cell) {
  config.Validate();
  spec.Validate();
  const dynamics::Model system = systems::TrueSystem(config.system);
  SweepResult result;
  for (std::uint64_t seed : seeds) {
    systems::SamplingSpec val_spec = config.sampling;
    val_spec.count = config.validation_size;
    val_spec.seed = DeriveSeed(seed, "validation", 0);
    const TransitionDataset val = systems::SampleTransitions(system, val_spec);

    SweepBracket bracket{spec.name, seed, 0, std::nullopt};
    for (std::int64_t size = config.min_size; size <= config.max_size; size *= 2) {
      systems::SamplingSpec train_spec = config.sampling;
      train_spec.count = size;
      train_spec.seed = DeriveSeed(seed, "train", static_cast<std::uint64_t>(size));
      const TransitionDataset train = systems::SampleTransitions(system, train_spec);

      modelzoo::ModelSpec cell_spec = spec;
      cell_spec.seed = DeriveSeed(seed, "model", static_cast<std::uint64_t>(size));
      dynamics::Model model = modelzoo::Build(cell_spec);
      TrainConfig train_config = config.train;
      train_config.seed = DeriveSeed(seed, "batches", static_cast<std::uint64_t>(size));

      SweepCell cell{spec.name, seed, size, 0.0, 0.0, false, ""};
      try {
        Train(model, train, train_config);
        cell.train_loss = PredictionLoss(model, train, config.train.lambda);
        cell.val_loss = Validate(model, val, config.train.lambda);
        cell.passed = cell.val_loss <= config.train.threshold;
      } catch (const NumericError& e) {
        cell.error = e.what();
        cell.train_loss = cell.val_loss = std::numeric_limits<double>::quiet_NaN();
      }
      result.cells.push_back(cell);
      if (on_cell) on_cell(cell);
      if (cell.passed) {
        bracket.passing = size;
        break;
      }
      bracket.failing = size;
    }
    result.brackets.push_back(bracket);
  }
  return result;
}

void WriteSweepCsvHeader(std::ostream& out) {
  out << "model,seed,size,train_loss,val_loss,passed\n";
}

void WriteSweepCsvRow(std::ostream& out, const SweepCell& cell) {
  out << cell.model << ',' << cell.seed << ',' << cell.size << ','
      << std::setprecision(17) << cell.train_loss << ',' << cell.val_loss << ','
      << (cell.passed ? "true" : "false") << '\n';
}

}  // namespace gbdyn::training
