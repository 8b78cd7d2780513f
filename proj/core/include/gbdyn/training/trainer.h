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

#ifndef GBDYN_TRAINING_TRAINER_H_
#define GBDYN_TRAINING_TRAINER_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "gbdyn/ad/adam.h"
#include "gbdyn/dynamics/dyn_model.h"
#include "gbdyn/training/dataset.h"

namespace gbdyn::training {

struct TrainConfig {
  double lambda = 0.1;
  // Network weights and biases.
  double learning_rate = 3e-4;
  // White-box physical constants (masses, lengths, g, b, eta).
  double white_box_learning_rate = 3e-2;
  // Full batch when the dataset is no larger than this.
  Eigen::Index batch_size = 1024;
  int epochs = 5000;
  std::uint64_t seed = 0;
  double threshold = 0.0031622776601683794;  // 10^-2.5

  void Validate() const;
};

struct TrainResult {
  // Mean training loss of each epoch, measured before that epoch's updates.
  std::vector<double> train_loss;
  ad::AdamState optimizer;
};

// Called after every epoch with (epoch index, epoch loss).
using EpochCallback = std::function<void(int, double)>;

// Adam on the prediction loss. Mini-batches are reshuffled every epoch from
// the config seed. `resume` continues from a saved optimizer state. Throws
// NumericError naming the epoch when the loss becomes non-finite.
TrainResult Train(dynamics::Model& model, const TransitionDataset& data,
                  const TrainConfig& config, const ad::AdamState* resume = nullptr,
                  const EpochCallback& on_epoch = nullptr);

}  // namespace gbdyn::training

#endif  // GBDYN_TRAINING_TRAINER_H_
