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

#include "gbdyn/control/tvlqr.h"

#include <Eigen/Cholesky>
#include <random>
#include <string>

#include "gbdyn/error.h"
#include "gbdyn/random.h"

namespace gbdyn::control {

QuadraticCost QuadraticCost::Default(int dof, int inputs) {
  QuadraticCost c;
  Eigen::VectorXd diag(2 * dof);
  diag.head(dof).setConstant(10.0);
  diag.tail(dof).setConstant(1.0);
  c.q = diag.asDiagonal();
  c.r = 1e-3 * Eigen::MatrixXd::Identity(inputs, inputs);
  c.qf = 100.0 * Eigen::MatrixXd::Identity(2 * dof, 2 * dof);
  return c;
}

void QuadraticCost::Validate(int state_dim, int inputs) const {
  if (q.rows() != state_dim || q.cols() != state_dim || qf.rows() != state_dim ||
      qf.cols() != state_dim || r.rows() != inputs || r.cols() != inputs) {
    throw ConfigError("cost weights do not match the state and input dimensions");
  }
  if (!q.allFinite() || !qf.allFinite() || !r.allFinite()) {
    throw ConfigError("cost weights must be finite");
  }
}

std::vector<Eigen::MatrixXd> RiccatiGains(const std::vector<Linearization>& dynamics,
                                          const QuadraticCost& cost) {
  if (dynamics.empty()) return {};
  const auto nx = static_cast<int>(dynamics.front().a.rows());
  const auto nu = static_cast<int>(dynamics.front().b.cols());
  cost.Validate(nx, nu);
  std::vector<Eigen::MatrixXd> gains(dynamics.size());
  Eigen::MatrixXd p = cost.qf;
  for (int t = static_cast<int>(dynamics.size()) - 1; t >= 0; --t) {
    const Eigen::MatrixXd& a = dynamics[t].a;
    const Eigen::MatrixXd& b = dynamics[t].b;
    const Eigen::MatrixXd pb = p * b;
    const Eigen::MatrixXd s = cost.r + b.transpose() * pb;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
    if (ldlt.info() != Eigen::Success) {
      throw NumericError("Riccati step " + std::to_string(t) + ": singular input Hessian");
    }
    gains[t] = ldlt.solve(pb.transpose() * a);
    p = cost.q + a.transpose() * p * (a - b * gains[t]);
    p = 0.5 * (p + p.transpose()).eval();
    if (!p.allFinite() || !gains[t].allFinite()) {
      throw NumericError("Riccati iterate not finite at step " + std::to_string(t));
    }
  }
  return gains;
}

TvlqrPolicy Tvlqr(const dynamics::Model& model, const Trajectory& nominal,
                  const QuadraticCost& cost) {
  nominal.Validate();
  const Eigen::Index h = nominal.knots() - 1;
  std::vector<Linearization> lin =
      LinearizeBatch(model, nominal.states.leftCols(h), nominal.inputs.leftCols(h), nominal.dt);
  return TvlqrPolicy{nominal, RiccatiGains(lin, cost), cost};
}

Eigen::VectorXd ApplyPolicy(const TvlqrPolicy& policy, const Eigen::VectorXd& x, int t,
                            double clip) {
  if (t < 0 || t >= policy.horizon()) throw ConfigError("policy time index out of range");
  if (!(clip > 0.0)) throw ConfigError("input clip must be positive");
  Eigen::VectorXd u =
      policy.nominal.inputs.col(t) - policy.gains[t] * (x - policy.nominal.states.col(t));
  return u.cwiseMax(-clip).cwiseMin(clip);
}

Trajectory PerturbNominal(const Trajectory& trajectory, double std, std::uint64_t seed) {
  if (!(std >= 0.0)) throw ConfigError("noise standard deviation must be non-negative");
  Trajectory out = trajectory;
  if (std == 0.0) return out;
  std::mt19937_64 rng = MakeStream(seed, "noise");
  std::normal_distribution<double> noise(0.0, std);
  for (Eigen::Index k = 0; k < out.knots(); ++k) {
    for (Eigen::Index i = 0; i < out.states.rows(); ++i) out.states(i, k) += noise(rng);
    for (Eigen::Index i = 0; i < out.inputs.rows(); ++i) out.inputs(i, k) += noise(rng);
  }
  return out;
}

}  // namespace gbdyn::control
