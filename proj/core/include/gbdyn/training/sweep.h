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

#ifndef GBDYN_TRAINING_SWEEP_H_
#define GBDYN_TRAINING_SWEEP_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gbdyn/modelzoo/model_spec.h"
#include "gbdyn/systems/double_pendulum.h"
#include "gbdyn/systems/sampling.h"
#include "gbdyn/training/trainer.h"

namespace gbdyn::training {

struct SweepConfig {
  TrainConfig train;
  // Ranges, input noise and dt of every sampled set; count and seed are
  // overridden per set.
  systems::SamplingSpec sampling;
  systems::DoublePendulumParams system;
  std::int64_t min_size = 8;
  std::int64_t max_size = 8192;
  std::int64_t validation_size = 2048;

  void Validate() const;
};

// One trained (model, seed, size) combination.
struct SweepCell {
  std::string model;
  std::uint64_t seed = 0;
  std::int64_t size = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  bool passed = false;
  // Set when training aborted on a numeric failure; the cell then fails.
  std::string error;
};

// Smallest passing size and the failing size below it (0 when the first
// size passed). `passing` is empty when no size up to max_size passed.
struct SweepBracket {
  std::string model;
  std::uint64_t seed = 0;
  std::int64_t failing = 0;
  std::optional<std::int64_t> passing;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<SweepBracket> brackets;
};

using CellCallback = std::function<void(const SweepCell&)>;

// Doubles the training-set size from min_size until the validation loss after
// the full epoch budget is at most the threshold. Each size gets a fresh
// model and training set; the validation set is shared per seed.
SweepResult DataEfficiencySweep(const modelzoo::ModelSpec& spec, const SweepConfig& config,
                                const std::vector<std::uint64_t>& seeds,
                                const CellCallback& on_cell = nullptr);

void WriteSweepCsvHeader(std::ostream& out);
void WriteSweepCsvRow(std::ostream& out, const SweepCell& cell);

}  // namespace gbdyn::training

#endif  // GBDYN_TRAINING_SWEEP_H_
