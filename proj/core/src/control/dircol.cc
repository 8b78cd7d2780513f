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

#include "gbdyn/control/dircol.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "gbdyn/control/linearize.h"
#include "gbdyn/error.h"

namespace gbdyn::control {

void Trajectory::Validate() const {
  if (states.cols() < 2 || inputs.cols() != states.cols() || states.rows() % 2 != 0 ||
      states.rows() == 0) {
    throw ShapeError("trajectory needs K >= 2 knots of states [q; qdot] and inputs");
  }
  if (!(dt > 0.0)) throw ShapeError("trajectory time step must be positive");
}

namespace {

Eigen::MatrixXd SymmetricSqrt(const Eigen::MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (w + w.transpose()));
  Eigen::VectorXd s = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * s.asDiagonal() * eig.eigenvectors().transpose();
}

// Residual vector and Jacobian of the augmented-Lagrangian subproblem
// 0.5 |r(z)|^2 with z = [x_1 .. x_{K-1}, u_0 .. u_{K-1}].
class Problem {
 public:
  Problem(const dynamics::Model& model, const Eigen::VectorXd& x0, const Eigen::VectorXd& goal,
          int knots, double dt, const DircolConfig& config)
      : model_(model),
        x0_(x0),
        goal_(goal),
        k_(knots),
        dt_(dt),
        config_(config),
        nx_(static_cast<int>(x0.size())),
        nu_(model.inputs()),
        sq_(SymmetricSqrt(config.cost.q)),
        sr_(SymmetricSqrt(config.cost.r)),
        sqf_(SymmetricSqrt(config.cost.qf)) {}

  Eigen::Index size() const { return static_cast<Eigen::Index>(k_ - 1) * nx_ + k_ * nu_; }
  Eigen::Index num_defects() const { return static_cast<Eigen::Index>(k_ - 1) * nx_; }
  Eigen::Index num_equalities() const { return num_defects() + nx_; }
  Eigen::Index num_inequalities() const { return 2 * static_cast<Eigen::Index>(k_) * nu_; }

  Eigen::VectorXd Pack(const Trajectory& t) const {
    Eigen::VectorXd z(size());
    for (int i = 1; i < k_; ++i) z.segment(XOff(i), nx_) = t.states.col(i);
    for (int i = 0; i < k_; ++i) z.segment(UOff(i), nu_) = t.inputs.col(i);
    return z;
  }

  Trajectory Unpack(const Eigen::VectorXd& z) const {
    Trajectory t;
    t.dt = dt_;
    t.states.resize(nx_, k_);
    t.inputs.resize(nu_, k_);
    t.states.col(0) = x0_;
    for (int i = 1; i < k_; ++i) t.states.col(i) = z.segment(XOff(i), nx_);
    for (int i = 0; i < k_; ++i) t.inputs.col(i) = z.segment(UOff(i), nu_);
    return t;
  }

  // Cost residuals r_c (J = |r_c|^2), equality constraints c and inequality
  // constraints g <= 0, each with Jacobians w.r.t. z.
  struct Terms {
    Eigen::VectorXd rc, c, g;
    Eigen::MatrixXd jrc, jc, jg;
  };

  Terms Evaluate(const Eigen::VectorXd& z, bool with_jacobians) const {
    const Trajectory t = Unpack(z);
    const ContinuousEval f = EvalContinuous(model_, t.states, t.inputs, with_jacobians);
    Terms out;
    const Eigen::Index nz = size();

    // Cost.
    std::vector<std::pair<int, const Eigen::MatrixXd*>> tracked;
    for (int i = std::max(config_.track_from, 0); i < k_ - 1; ++i) tracked.push_back({i, &sq_});
    tracked.push_back({k_ - 1, &sqf_});
    const Eigen::Index n_rc = static_cast<Eigen::Index>(tracked.size()) * nx_ + k_ * nu_;
    out.rc.resize(n_rc);
    if (with_jacobians) out.jrc = Eigen::MatrixXd::Zero(n_rc, nz);
    Eigen::Index row = 0;
    for (const auto& [i, w] : tracked) {
      out.rc.segment(row, nx_) = *w * (t.states.col(i) - goal_);
      if (with_jacobians && i > 0) out.jrc.block(row, XOff(i), nx_, nx_) = *w;
      row += nx_;
    }
    for (int i = 0; i < k_; ++i) {
      out.rc.segment(row, nu_) = sr_ * t.inputs.col(i);
      if (with_jacobians) out.jrc.block(row, UOff(i), nu_, nu_) = sr_;
      row += nu_;
    }

    // Defects and terminal condition.
    out.c.resize(num_equalities());
    if (with_jacobians) out.jc = Eigen::MatrixXd::Zero(num_equalities(), nz);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(nx_, nx_);
    for (int i = 0; i + 1 < k_; ++i) {
      const Eigen::Index r = static_cast<Eigen::Index>(i) * nx_;
      out.c.segment(r, nx_) = t.states.col(i + 1) - t.states.col(i) -
                              0.5 * dt_ * (f.xdot.col(i) + f.xdot.col(i + 1));
      if (!with_jacobians) continue;
      const Linearization& a = f.jacobians[i];
      const Linearization& b = f.jacobians[i + 1];
      if (i > 0) out.jc.block(r, XOff(i), nx_, nx_) = -eye - 0.5 * dt_ * a.a;
      out.jc.block(r, XOff(i + 1), nx_, nx_) = eye - 0.5 * dt_ * b.a;
      out.jc.block(r, UOff(i), nx_, nu_) = -0.5 * dt_ * a.b;
      out.jc.block(r, UOff(i + 1), nx_, nu_) = -0.5 * dt_ * b.b;
    }
    out.c.tail(nx_) = t.states.col(k_ - 1) - goal_;
    if (with_jacobians) out.jc.block(num_defects(), XOff(k_ - 1), nx_, nx_) = eye;

    // Input bounds.
    out.g.resize(num_inequalities());
    if (with_jacobians) out.jg = Eigen::MatrixXd::Zero(num_inequalities(), nz);
    for (int i = 0; i < k_; ++i) {
      for (int j = 0; j < nu_; ++j) {
        const Eigen::Index r = 2 * (static_cast<Eigen::Index>(i) * nu_ + j);
        const double u = t.inputs(j, i);
        out.g(r) = u - config_.clip;
        out.g(r + 1) = -u - config_.clip;
        if (with_jacobians) {
          out.jg(r, UOff(i) + j) = 1.0;
          out.jg(r + 1, UOff(i) + j) = -1.0;
        }
      }
    }
    return out;
  }

  double MaxDefect(const Terms& t) const { return t.c.head(num_defects()).lpNorm<Eigen::Infinity>(); }
  double TerminalError(const Terms& t) const { return t.c.tail(nx_).lpNorm<Eigen::Infinity>(); }
  double BoundViolation(const Terms& t) const {
    return t.g.size() ? std::max(0.0, t.g.maxCoeff()) : 0.0;
  }

 private:
  Eigen::Index XOff(int i) const { return static_cast<Eigen::Index>(i - 1) * nx_; }
  Eigen::Index UOff(int i) const {
    return static_cast<Eigen::Index>(k_ - 1) * nx_ + static_cast<Eigen::Index>(i) * nu_;
  }

  const dynamics::Model& model_;
  Eigen::VectorXd x0_;
  Eigen::VectorXd goal_;
  int k_;
  double dt_;
  const DircolConfig& config_;
  int nx_;
  int nu_;
  Eigen::MatrixXd sq_, sr_, sqf_;
};

struct Multipliers {
  Eigen::VectorXd lambda;  // equalities
  Eigen::VectorXd nu;      // inequalities, >= 0
  double mu;
};

// 0.5 |r|^2 = J + lambda^T c + mu/2 |c|^2 + (inequality terms) + const.
Eigen::VectorXd AlResidual(const Problem::Terms& t, const Multipliers& m) {
  const double s = std::sqrt(m.mu);
  Eigen::VectorXd r(t.rc.size() + t.c.size() + t.g.size());
  r << std::sqrt(2.0) * t.rc, s * (t.c + m.lambda / m.mu),
      s * (t.g + m.nu / m.mu).cwiseMax(0.0);
  return r;
}

Eigen::MatrixXd AlJacobian(const Problem::Terms& t, const Multipliers& m) {
  const double s = std::sqrt(m.mu);
  Eigen::MatrixXd j(t.jrc.rows() + t.jc.rows() + t.jg.rows(), t.jrc.cols());
  j.topRows(t.jrc.rows()) = std::sqrt(2.0) * t.jrc;
  j.middleRows(t.jrc.rows(), t.jc.rows()) = s * t.jc;
  Eigen::MatrixXd jg = s * t.jg;
  const Eigen::VectorXd active = t.g + m.nu / m.mu;
  for (Eigen::Index i = 0; i < jg.rows(); ++i) {
    if (active(i) <= 0.0) jg.row(i).setZero();
  }
  j.bottomRows(t.jg.rows()) = jg;
  return j;
}

Trajectory InitialGuess(const Eigen::VectorXd& x0, const Eigen::VectorXd& goal, int knots,
                        int inputs, double dt) {
  Trajectory t;
  t.dt = dt;
  t.states.resize(x0.size(), knots);
  t.inputs = Eigen::MatrixXd::Zero(inputs, knots);
  const Eigen::Index n = x0.size() / 2;
  const double span = dt * (knots - 1);
  for (int i = 0; i < knots; ++i) {
    const double s = static_cast<double>(i) / (knots - 1);
    t.states.col(i).head(n) = (1.0 - s) * x0.head(n) + s * goal.head(n);
    t.states.col(i).tail(n) = (goal.head(n) - x0.head(n)) / span;
  }
  t.states.col(knots - 1) = goal;
  return t;
}

}  // namespace

double MaxDefect(const dynamics::Model& model, const Trajectory& trajectory) {
  trajectory.Validate();
  const ContinuousEval f = EvalContinuous(model, trajectory.states, trajectory.inputs, false);
  double worst = 0.0;
  for (Eigen::Index i = 0; i + 1 < trajectory.knots(); ++i) {
    const Eigen::VectorXd d = trajectory.states.col(i + 1) - trajectory.states.col(i) -
                              0.5 * trajectory.dt * (f.xdot.col(i) + f.xdot.col(i + 1));
    worst = std::max(worst, d.lpNorm<Eigen::Infinity>());
  }
  return worst;
}

double TrajectoryCost(const Trajectory& trajectory, const Eigen::VectorXd& goal,
                      const DircolConfig& config) {
  const Eigen::Index k = trajectory.knots();
  double cost = 0.0;
  for (Eigen::Index i = std::max<Eigen::Index>(config.track_from, 0); i + 1 < k; ++i) {
    const Eigen::VectorXd e = trajectory.states.col(i) - goal;
    cost += e.dot(config.cost.q * e);
  }
  const Eigen::VectorXd e = trajectory.states.col(k - 1) - goal;
  cost += e.dot(config.cost.qf * e);
  for (Eigen::Index i = 0; i < k; ++i) {
    cost += trajectory.inputs.col(i).dot(config.cost.r * trajectory.inputs.col(i));
  }
  return cost;
}

DircolResult DircolPlan(const dynamics::Model& model, const Eigen::VectorXd& x0,
                        const Eigen::VectorXd& goal, int steps, double dt,
                        const DircolConfig& config, const Trajectory* warm_start) {
  const int nx = 2 * model.dof();
  const int nu = model.inputs();
  if (steps < 2) throw ConfigError("collocation needs at least two intervals");
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (x0.size() != nx || goal.size() != nx) throw ShapeError("x0 and goal must have 2N entries");
  if (!(config.clip > 0.0) || !(config.defect_tolerance > 0.0) || config.max_iterations < 0 ||
      !(config.initial_penalty > 0.0)) {
    throw ConfigError("invalid collocation settings");
  }
  config.cost.Validate(nx, nu);
  const int knots = steps + 1;
  Problem problem(model, x0, goal, knots, dt, config);

  Trajectory guess = InitialGuess(x0, goal, knots, nu, dt);
  if (warm_start) {
    warm_start->Validate();
    if (warm_start->knots() != knots || warm_start->states.rows() != nx ||
        warm_start->inputs.rows() != nu) {
      throw ShapeError("warm start does not match the collocation grid");
    }
    guess.states = warm_start->states;
    guess.inputs = warm_start->inputs;
    guess.states.col(0) = x0;
  }
  Eigen::VectorXd z = problem.Pack(guess);
  z.tail(static_cast<Eigen::Index>(knots) * nu) =
      z.tail(static_cast<Eigen::Index>(knots) * nu).cwiseMax(-config.clip).cwiseMin(config.clip);

  Multipliers mult{Eigen::VectorXd::Zero(problem.num_equalities()),
                   Eigen::VectorXd::Zero(problem.num_inequalities()), config.initial_penalty};
  constexpr double kMaxPenalty = 1e6;
  constexpr int kInnerIterations = 50;

  DircolResult best;
  double best_violation = std::numeric_limits<double>::infinity();
  auto consider = [&](const Eigen::VectorXd& zc, const Problem::Terms& t, int iterations) {
    const double defect = problem.MaxDefect(t);
    const double terminal = problem.TerminalError(t);
    const double violation = std::max({defect, terminal, problem.BoundViolation(t)});
    const bool feasible = violation <= config.defect_tolerance;
    const double cost = t.rc.squaredNorm();
    // Later feasible iterates have tighter multipliers, so they win.
    const bool better = feasible || (!best.feasible && violation < best_violation);
    if (better) {
      best.trajectory = problem.Unpack(zc);
      best.feasible = feasible;
      best.max_defect = defect;
      best.terminal_error = terminal;
      best.cost = cost;
      best_violation = violation;
    }
    best.iterations = iterations;
  };

  int iterations = 0;
  Problem::Terms terms = problem.Evaluate(z, true);
  consider(z, terms, iterations);
  double previous_violation = std::numeric_limits<double>::infinity();
  double previous_cost = std::numeric_limits<double>::infinity();
  while (iterations < config.max_iterations) {
    // Inner damped Gauss-Newton on the current augmented Lagrangian.
    double damping = 1e-6;
    Eigen::VectorXd r = AlResidual(terms, mult);
    double merit = 0.5 * r.squaredNorm();
    for (int inner = 0; inner < kInnerIterations && iterations < config.max_iterations; ++inner) {
      ++iterations;
      const Eigen::MatrixXd j = AlJacobian(terms, mult);
      const Eigen::VectorXd grad = j.transpose() * r;
      Eigen::MatrixXd h = j.transpose() * j;
      const double scale = std::max(1.0, h.diagonal().maxCoeff());
      bool accepted = false;
      for (int tries = 0; tries < 12 && !accepted; ++tries) {
        Eigen::MatrixXd damped = h;
        damped.diagonal().array() += damping * scale;
        const Eigen::VectorXd step = -damped.ldlt().solve(grad);
        if (!step.allFinite()) {
          damping *= 10.0;
          continue;
        }
        const Eigen::VectorXd trial = z + step;
        Problem::Terms trial_terms;
        try {
          trial_terms = problem.Evaluate(trial, false);
        } catch (const NumericError&) {
          damping *= 10.0;
          continue;
        }
        const Eigen::VectorXd trial_r = AlResidual(trial_terms, mult);
        const double trial_merit = 0.5 * trial_r.squaredNorm();
        if (trial_merit < merit) {
          z = trial;
          damping = std::max(damping / 3.0, 1e-12);
          accepted = true;
          const double decrease = merit - trial_merit;
          merit = trial_merit;
          terms = problem.Evaluate(z, true);
          r = AlResidual(terms, mult);
          if (decrease <= 1e-12 * std::max(1.0, merit)) inner = kInnerIterations;
        } else {
          damping *= 10.0;
        }
      }
      if (!accepted || grad.lpNorm<Eigen::Infinity>() <= 1e-9 * std::max(1.0, merit)) break;
    }
    consider(z, terms, iterations);

    const double violation = std::max(
        {problem.MaxDefect(terms), problem.TerminalError(terms), problem.BoundViolation(terms)});
    const double cost = terms.rc.squaredNorm();
    if (violation <= config.defect_tolerance * 1e-2 &&
        std::abs(cost - previous_cost) <= 1e-6 * std::max(1.0, cost)) {
      break;
    }
    mult.lambda += mult.mu * terms.c;
    mult.nu = (mult.nu + mult.mu * terms.g).cwiseMax(0.0);
    if (violation > 0.25 * previous_violation) mult.mu = std::min(mult.mu * 10.0, kMaxPenalty);
    previous_violation = violation;
    previous_cost = cost;
  }
  best.iterations = iterations;
  // Snap tiny bound violations onto the box.
  best.trajectory.inputs = best.trajectory.inputs.cwiseMax(-config.clip).cwiseMin(config.clip);
  best.max_defect = MaxDefect(model, best.trajectory);
  best.cost = TrajectoryCost(best.trajectory, goal, config);
  best.feasible = best.feasible && best.max_defect <= config.defect_tolerance;
  return best;
}

}  // namespace gbdyn::control
