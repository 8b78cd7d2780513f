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

#ifndef GBDYN_AD_MLP_H_
#define GBDYN_AD_MLP_H_

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "gbdyn/ad/tape.h"

namespace gbdyn::ad {

// Feed-forward network with tanh hidden layers and a linear output layer.
// widths = {input, hidden..., output}.
class Mlp {
 public:
  Mlp() = default;
  // All weights and biases zero.
  explicit Mlp(std::vector<int> widths);

  // Weights uniform in [-sqrt(1/fan_in), sqrt(1/fan_in)], biases zero.
  static Mlp Random(std::vector<int> widths, std::mt19937_64& rng);

  int input_dim() const { return widths_.front(); }
  int output_dim() const { return widths_.back(); }
  int num_layers() const { return static_cast<int>(weights_.size()); }
  const std::vector<int>& widths() const { return widths_; }
  std::int64_t parameter_count() const;

  Matrix& weight(int layer) { return weights_[layer]; }
  const Matrix& weight(int layer) const { return weights_[layer]; }
  // Column vector of the layer's biases.
  Matrix& bias(int layer) { return biases_[layer]; }
  const Matrix& bias(int layer) const { return biases_[layer]; }

  // Batched evaluation, one input per column. Throws ShapeError on mismatch.
  Matrix Forward(const Matrix& x) const;
  // d output / d input at a single point (output_dim x input_dim).
  Matrix InputJacobian(const Eigen::VectorXd& x) const;

 private:
  std::vector<int> widths_;
  std::vector<Matrix> weights_;
  std::vector<Matrix> biases_;
};

// Network parameters placed on a tape.
struct MlpVars {
  std::vector<Var> weights;
  std::vector<Var> biases;
};

MlpVars BindMlp(Tape& tape, const Mlp& net, bool trainable);

Var Forward(const MlpVars& net, Var x);

struct MlpWithTangents {
  Var output;
  // tangents[k] = d output / d x_k for each column (output_dim x batch).
  std::vector<Var> tangents;
};

// Output plus forward-mode tangents along the first `directions` input
// coordinates. Tangents are recorded operations, so they can be
// differentiated with respect to the network parameters and the inputs.
MlpWithTangents ForwardWithTangents(const MlpVars& net, Var x, int directions);

}  // namespace gbdyn::ad

#endif  // GBDYN_AD_MLP_H_
