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

#ifndef GBDYN_TRAINING_LOSS_H_
#define GBDYN_TRAINING_LOSS_H_

#include "gbdyn/ad/params.h"
#include "gbdyn/ad/tape.h"
#include "gbdyn/dynamics/dyn_model.h"
#include "gbdyn/training/dataset.h"

namespace gbdyn::training {

// (1/K) sum_k |q'_k - qhat'_k|^2 + lambda |qdot'_k - qhatdot'_k|^2, where the
// predictions are one RK4 step of the model over data.dt.
ad::Var PredictionLoss(ad::Tape& tape, const dynamics::BoundModel& bound,
                       const TransitionDataset& data, double lambda);

// Throws ConfigError for an empty batch or negative lambda, ShapeError when
// the data dimensions disagree with the model.
double PredictionLoss(const dynamics::Model& model, const TransitionDataset& data,
                      double lambda);
// Loss value; `grad` receives d loss / d params ordered like Model::Params().
double PredictionLossAndGrad(const dynamics::Model& model, const TransitionDataset& data,
                             double lambda, ad::ParamVector& grad);

// Prediction loss without gradients.
double Validate(const dynamics::Model& model, const TransitionDataset& data, double lambda);

}  // namespace gbdyn::training

#endif  // GBDYN_TRAINING_LOSS_H_
