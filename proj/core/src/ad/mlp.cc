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

#include "gbdyn/ad/mlp.h"

#include <cmath>
#include <string>

#include "gbdyn/ad/ops.h"
#include "gbdyn/error.h"

namespace gbdyn::ad {

Mlp::Mlp(std::vector<int> widths) : widths_(std::move(widths)) {
  if (widths_.size() < 2) throw ConfigError("an MLP needs at least two widths");
  for (int w : widths_) {
    if (w <= 0) throw ConfigError("MLP widths must be positive");
  }
  for (std::size_t l = 1; l < widths_.size(); ++l) {
    weights_.push_back(Matrix::Zero(widths_[l], widths_[l - 1]));
    biases_.push_back(Matrix::Zero(widths_[l], 1));
  }
}

Mlp Mlp::Random(std::vector<int> widths, std::mt19937_64& rng) {
  Mlp net(std::move(widths));
  for (int l = 0; l < net.num_layers(); ++l) {
    const double bound = std::sqrt(1.0 / net.widths_[l]);
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix& w = net.weights_[l];
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = dist(rng);
    }
  }
  return net;
}

std::int64_t Mlp::parameter_count() const {
  std::int64_t count = 0;
  for (std::size_t l = 1; l < widths_.size(); ++l) {
    count += static_cast<std::int64_t>(widths_[l]) * widths_[l - 1] + widths_[l];
  }
  return count;
}

Matrix Mlp::Forward(const Matrix& x) const {
  if (x.rows() != input_dim()) {
    throw ShapeError("MLP expects " + std::to_string(input_dim()) +
                     " inputs, got " + std::to_string(x.rows()));
  }
  Matrix h = x;
  for (int l = 0; l < num_layers(); ++l) {
    Matrix z = weights_[l] * h;
    z.colwise() += biases_[l].col(0);
    h = (l + 1 < num_layers()) ? Matrix(z.array().tanh()) : z;
  }
  return h;
}

Matrix Mlp::InputJacobian(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim()) {
    throw ShapeError("MLP expects " + std::to_string(input_dim()) +
                     " inputs, got " + std::to_string(x.size()));
  }
  Eigen::VectorXd h = x;
  Matrix jac = Matrix::Identity(input_dim(), input_dim());
  for (int l = 0; l < num_layers(); ++l) {
    Eigen::VectorXd z = weights_[l] * h + biases_[l].col(0);
    jac = weights_[l] * jac;
    if (l + 1 < num_layers()) {
      h = z.array().tanh();
      jac = (1.0 - h.array().square()).matrix().asDiagonal() * jac;
    } else {
      h = z;
    }
  }
  return jac;
}

MlpVars BindMlp(Tape& tape, const Mlp& net, bool trainable) {
  MlpVars vars;
  for (int l = 0; l < net.num_layers(); ++l) {
    vars.weights.push_back(trainable ? tape.Variable(net.weight(l))
                                     : tape.Constant(net.weight(l)));
    vars.biases.push_back(trainable ? tape.Variable(net.bias(l))
                                    : tape.Constant(net.bias(l)));
  }
  return vars;
}

Var Forward(const MlpVars& net, Var x) {
  const std::size_t layers = net.weights.size();
  if (x.rows() != net.weights.front().cols()) {
    throw ShapeError("MLP expects " + std::to_string(net.weights.front().cols()) +
                     " inputs, got " + std::to_string(x.rows()));
  }
  Var h = x;
  for (std::size_t l = 0; l < layers; ++l) {
    Var z = Affine(net.weights[l], h, net.biases[l]);
    h = (l + 1 < layers) ? Tanh(z) : z;
  }
  return h;
}

MlpWithTangents ForwardWithTangents(const MlpVars& net, Var x, int directions) {
  const std::size_t layers = net.weights.size();
  if (x.rows() != net.weights.front().cols()) {
    throw ShapeError("MLP expects " + std::to_string(net.weights.front().cols()) +
                     " inputs, got " + std::to_string(x.rows()));
  }
  if (directions < 0 || directions > x.rows()) {
    throw ShapeError("tangent direction count exceeds the input dimension");
  }
  MlpWithTangents out;
  Var h = x;
  std::vector<Var> tangents(directions);
  for (std::size_t l = 0; l < layers; ++l) {
    Var z = Affine(net.weights[l], h, net.biases[l]);
    for (int k = 0; k < directions; ++k) {
      // The input tangent is the unit vector e_k, so the first layer's
      // tangent is the k-th weight column broadcast over the batch.
      tangents[k] = (l == 0) ? Cols(net.weights[l], k, 1)
                             : MatMul(net.weights[l], tangents[k]);
    }
    if (l + 1 < layers) {
      h = Tanh(z);
      Var slope = OneMinusSquare(h);
      for (int k = 0; k < directions; ++k) tangents[k] = slope * tangents[k];
    } else {
      h = z;
    }
  }
  // A single-layer network leaves column tangents unbroadcast.
  for (int k = 0; k < directions; ++k) {
    if (tangents[k].cols() != h.cols()) {
      tangents[k] = tangents[k] + h.tape().Constant(Matrix::Zero(1, h.cols()));
    }
  }
  out.output = h;
  out.tangents = std::move(tangents);
  return out;
}

}  // namespace gbdyn::ad
