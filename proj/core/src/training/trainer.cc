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

#include "gbdyn/training/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "gbdyn/error.h"
#include "gbdyn/random.h"
#include "gbdyn/training/loss.h"

namespace gbdyn::training {

void TrainConfig::Validate() const {
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be non-negative");
  if (!(learning_rate > 0.0) || !(white_box_learning_rate > 0.0)) {
    throw ConfigError("learning rates must be positive");
  }
  if (batch_size < 1) throw ConfigError("batch size must be positive");
  if (epochs < 0) throw ConfigError("epoch count must be non-negative");
  if (!(threshold > 0.0)) throw ConfigError("validation threshold must be positive");
}

TrainResult Train(dynamics::Model& model, const TransitionDataset& data,
                  const TrainConfig& config, const ad::AdamState* resume,
                  const EpochCallback& on_epoch) {
  config.Validate();
  if (data.size() == 0) throw ConfigError("cannot train on an empty dataset");
  ad::AdamConfig adam;
  adam.learning_rate = config.learning_rate;
  TrainResult result;
  ad::ParamVector params = model.GetParams();
  if (resume) {
    if (resume->first_moment.size() != params.size()) {
      throw ShapeError("optimizer state does not match the model");
    }
    result.optimizer = *resume;
    result.optimizer.config.learning_rate = config.learning_rate;
  } else {
    result.optimizer = ad::AdamState::Zero(params.size(), adam);
  }

  Eigen::VectorXd rates = Eigen::VectorXd::Constant(params.size(), config.learning_rate);
  const ad::ParamLayout layout = model.Layout();
  for (const ad::ParamEntry& e : layout.entries()) {
    if (e.name.starts_with("wb.")) {
      rates.segment(e.offset, e.rows * e.cols).setConstant(config.white_box_learning_rate);
    }
  }

  const Eigen::Index n = data.size();
  const bool full_batch = n <= config.batch_size;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng = MakeStream(config.seed, "batch");
  ad::ParamVector grad;
  result.train_loss.reserve(static_cast<std::size_t>(config.epochs));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double weighted = 0.0;
    try {
      if (full_batch) {
        weighted = PredictionLossAndGrad(model, data, config.lambda, grad) *
                   static_cast<double>(n);
        if (!std::isfinite(weighted)) throw NumericError("loss is not finite");
        ad::AdamStep(result.optimizer, params, grad, rates);
        model.SetParams(params);
      } else {
        std::shuffle(order.begin(), order.end(), rng);
        for (Eigen::Index start = 0; start < n; start += config.batch_size) {
          const Eigen::Index len = std::min(config.batch_size, n - start);
          std::vector<Eigen::Index> cols(order.begin() + start, order.begin() + start + len);
          const double loss =
              PredictionLossAndGrad(model, data.Select(cols), config.lambda, grad);
          if (!std::isfinite(loss)) throw NumericError("loss is not finite");
          weighted += loss * static_cast<double>(len);
          ad::AdamStep(result.optimizer, params, grad, rates);
          model.SetParams(params);
        }
      }
      if (!params.allFinite()) throw NumericError("parameters became non-finite");
    } catch (const NumericError& e) {
      throw NumericError("training epoch " + std::to_string(epoch) + ": " + e.what());
    }
    const double epoch_loss = weighted / static_cast<double>(n);
    result.train_loss.push_back(epoch_loss);
    if (on_epoch) on_epoch(epoch, epoch_loss);
  }
  return result;
}

}  // namespace gbdyn::training
