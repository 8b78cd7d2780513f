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

#ifndef GBDYN_TESTS_SUPPORT_TEST_SUPPORT_H_
#define GBDYN_TESTS_SUPPORT_TEST_SUPPORT_H_

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Dense>

#include "gbdyn/ad/gradcheck.h"
#include "gbdyn/ad/mlp.h"
#include "gbdyn/dynamics/dyn_model.h"
#include "gbdyn/training/dataset.h"
#include "gbdyn/training/loss.h"

namespace gbdyn::testing {

// Value plus one directional derivative.
struct Dual {
  double v = 0.0;
  double d = 0.0;
};
inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual Tanh(Dual a) {
  const double t = std::tanh(a.v);
  return {t, (1.0 - t * t) * a.d};
}

// Plain loop evaluation of a network along input direction `dir`.
inline std::vector<Dual> EvalMlpDual(const ad::Mlp& net, const Eigen::VectorXd& x, int dir) {
  std::vector<Dual> h(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) h[i] = {x(i), i == dir ? 1.0 : 0.0};
  for (int l = 0; l < net.num_layers(); ++l) {
    const Eigen::MatrixXd& w = net.weight(l);
    std::vector<Dual> next(static_cast<std::size_t>(w.rows()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      Dual acc{net.bias(l)(r, 0), 0.0};
      for (Eigen::Index c = 0; c < w.cols(); ++c) acc = acc + Dual{w(r, c), 0.0} * h[c];
      next[r] = l + 1 < net.num_layers() ? Tanh(acc) : acc;
    }
    h = std::move(next);
  }
  return h;
}

// Mass matrix L L^T of a learned Cholesky model and dM/dq_dir, assembled from
// scratch: diagonal raw_i + delta, then the strict lower triangle row by row.
inline void MassAndDerivative(const ad::Mlp& net, double delta, const Eigen::VectorXd& q,
                              int dir, Eigen::MatrixXd& m, Eigen::MatrixXd& dm) {
  const auto n = static_cast<int>(q.size());
  const std::vector<Dual> raw = EvalMlpDual(net, q, dir);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd dl = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    l(i, i) = raw[i].v + delta;
    dl(i, i) = raw[i].d;
  }
  int k = n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j, ++k) {
      l(i, j) = raw[k].v;
      dl(i, j) = raw[k].d;
    }
  }
  m = l * l.transpose();
  dm = dl * l.transpose() + l * dl.transpose();
}

// Objective over a model's flat parameters for the prediction loss.
inline ad::Objective LossObjective(dynamics::Model& model, const training::TransitionDataset& data,
                                   double lambda) {
  ad::Objective obj;
  obj.value = [&model, &data, lambda](const ad::ParamVector& p) {
    dynamics::Model copy = model;
    copy.SetParams(p);
    return training::PredictionLoss(copy, data, lambda);
  };
  obj.value_and_grad = [&model, &data, lambda](const ad::ParamVector& p, ad::ParamVector& g) {
    dynamics::Model copy = model;
    copy.SetParams(p);
    return training::PredictionLossAndGrad(copy, data, lambda, g);
  };
  return obj;
}

inline Eigen::MatrixXd Uniform(Eigen::Index rows, Eigen::Index cols, double lo, double hi,
                               std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

// Random network with weights uniform in [-scale, scale] and random biases.
inline ad::Mlp RandomNet(std::vector<int> widths, double scale, std::mt19937_64& rng) {
  ad::Mlp net(std::move(widths));
  for (int l = 0; l < net.num_layers(); ++l) {
    net.weight(l) = Uniform(net.weight(l).rows(), net.weight(l).cols(), -scale, scale, rng);
    net.bias(l) = Uniform(net.bias(l).rows(), 1, -scale, scale, rng);
  }
  return net;
}

}  // namespace gbdyn::testing

#endif  // GBDYN_TESTS_SUPPORT_TEST_SUPPORT_H_
