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

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "gbdyn/ad/gradcheck.h"
#include "gbdyn/ad/ops.h"
#include "gbdyn/dynamics/cholesky.h"
#include "gbdyn/dynamics/dyn_model.h"
#include "gbdyn/dynamics/integrator.h"
#include "gbdyn/dynamics/lagrangian.h"
#include "gbdyn/error.h"
#include "gbdyn/systems/double_pendulum.h"
#include "test_support.h"

namespace gbdyn::dynamics {
namespace {

using ::gbdyn::testing::MassAndDerivative;
using ::gbdyn::testing::RandomNet;
using ::gbdyn::testing::Uniform;

constexpr double kPi = std::numbers::pi;

// Learned mass, potential and generic force, each a random network.
Model RandomLearnedModel(int n, int m, std::mt19937_64& rng, double scale = 0.5) {
  const int packed = PackedTriangleSize(n);
  return DynModel(n, m, LearnedCholeskyMass{RandomNet({n, 8, 8, packed}, scale, rng), 1.0},
                  LearnedPotential{RandomNet({n, 8, 1}, scale, rng)},
                  GenericForce{RandomNet({2 * n + m, 8, n}, scale, rng)}, WhiteBoxParams{});
}

// Identity mass, zero potential, zero force.
Model ZeroDynamicsModel(int n, int m) {
  return DynModel(n, m, LearnedCholeskyMass{ad::Mlp({n, 4, PackedTriangleSize(n)}), 1.0},
                  LearnedPotential{ad::Mlp({n, 4, 1})}, GenericForce{ad::Mlp({2 * n + m, 4, n})},
                  WhiteBoxParams{});
}

Model UndampedPendulum() {
  systems::DoublePendulumParams p;
  p.eta1 = 0.0;
  p.eta2 = 0.0;
  return systems::TrueSystem(p);
}

// Inertia and potential gradient of the pendulum written out directly.
struct PendulumOracle {
  double m1 = 10, m2 = 10, l1 = 1, l2 = 1, g = 10;
  Eigen::Matrix2d Mass(const Eigen::Vector2d& q) const {
    const double i1 = m1 * l1 * l1 / 3.0, i2 = m2 * l2 * l2 / 3.0;
    const double c2 = std::cos(q(1));
    Eigen::Matrix2d m;
    m(0, 0) = i1 + i2 + m2 * l1 * l1 + m2 * l1 * l2 * c2;
    m(0, 1) = m(1, 0) = i2 + 0.5 * m2 * l1 * l2 * c2;
    m(1, 1) = i2;
    return m;
  }
  double Energy(const Eigen::Vector2d& q) const {
    return -0.5 * m1 * g * l1 * std::cos(q(0)) -
           m2 * g * (l1 * std::cos(q(0)) + 0.5 * l2 * std::cos(q(0) + q(1)));
  }
  Eigen::Vector2d Gradient(const Eigen::Vector2d& q) const {
    const double s12 = std::sin(q(0) + q(1));
    return {0.5 * m1 * g * l1 * std::sin(q(0)) + m2 * g * (l1 * std::sin(q(0)) + 0.5 * l2 * s12),
            0.5 * m2 * g * l2 * s12};
  }
};

TEST(AssembleCholeskyTest, ZeroRawWithUnitOffsetIsIdentity) {
  EXPECT_EQ(AssembleCholesky(Eigen::Vector3d::Zero(), 2, 1.0), Eigen::MatrixXd::Identity(2, 2));
}

TEST(AssembleCholeskyTest, PackingRule) {
  Eigen::Matrix2d expected;
  expected << 1, 0, 3, 2;
  EXPECT_EQ(AssembleCholesky(Eigen::Vector3d(1, 2, 3), 2, 0.0), Eigen::MatrixXd(expected));
}

TEST(AssembleCholeskyTest, ThreeByThreeRowMajorLowerTriangle) {
  Eigen::VectorXd raw(6);
  raw << 1, 2, 3, 4, 5, 6;
  Eigen::Matrix3d expected;
  expected << 1.5, 0, 0, 4, 2.5, 0, 5, 6, 3.5;
  EXPECT_EQ(AssembleCholesky(raw, 3, 0.5), Eigen::MatrixXd(expected));
  EXPECT_THROW(AssembleCholesky(Eigen::VectorXd::Zero(5), 3, 1.0), ShapeError);
}

TEST(AssembleCholeskyTest, TapeVersionAgreesWithPlain) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd raw = Uniform(6, 5, -1, 1, rng);
  ad::Tape tape;
  const Eigen::MatrixXd packed = AssembleCholesky(tape.Constant(raw), 3, 1.0).value();
  for (int c = 0; c < 5; ++c) {
    const Eigen::MatrixXd l = AssembleCholesky(Eigen::VectorXd(raw.col(c)), 3, 1.0);
    EXPECT_EQ(packed.col(c), l.transpose().reshaped()) << "column " << c;
  }
}

TEST(MassMatrixTest, ZeroNetworkGivesIdentity) {
  EXPECT_EQ(MassMatrix(ZeroDynamicsModel(2, 1), Eigen::Vector2d(0.3, -2.0)),
            Eigen::MatrixXd::Identity(2, 2));
}

TEST(MassMatrixTest, PendulumAtRest) {
  const Eigen::MatrixXd m = MassMatrix(systems::TrueSystem({}), Eigen::Vector2d::Zero());
  EXPECT_NEAR(m(0, 0), 80.0 / 3.0, 1e-12);
  EXPECT_NEAR(m(0, 1), 25.0 / 3.0, 1e-12);
  EXPECT_NEAR(m(1, 0), 25.0 / 3.0, 1e-12);
  EXPECT_NEAR(m(1, 1), 10.0 / 3.0, 1e-12);
}

TEST(MassMatrixTest, PendulumMatchesInertiaFormulas) {
  std::mt19937_64 rng(8);
  const Model model = systems::TrueSystem({});
  const PendulumOracle oracle;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector2d q = Uniform(2, 1, -kPi, kPi, rng);
    EXPECT_LT((MassMatrix(model, q) - oracle.Mass(q)).norm(), 1e-12);
  }
}

TEST(MassMatrixTest, LearnedMassIsSymmetricPositiveDefinite) {
  std::mt19937_64 rng(21);
  for (int n : {1, 2, 3}) {
    ad::Mlp net = ad::Mlp::Random({n, 32, 32, 32, PackedTriangleSize(n)}, rng);
    const Model model =
        DynModel(n, 1, LearnedCholeskyMass{net, 1.0}, LearnedPotential{ad::Mlp({n, 1})},
                 GenericForce{ad::Mlp({2 * n + 1, n})}, WhiteBoxParams{});
    for (int i = 0; i < 1000; ++i) {
      const Eigen::VectorXd q = Uniform(n, 1, -kPi, kPi, rng);
      const Eigen::MatrixXd m = MassMatrix(model, q);
      ASSERT_EQ((m - m.transpose()).norm(), 0.0);
      ASSERT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff(), 0.0);
    }
  }
}

TEST(PotentialTest, PendulumEquilibria) {
  const Model model = systems::TrueSystem({});
  EXPECT_NEAR(Potential(model, Eigen::Vector2d(0, 0)), -200.0, 1e-12);
  EXPECT_NEAR(Potential(model, Eigen::Vector2d(kPi, 0)), 200.0, 1e-12);
  EXPECT_EQ(Potential(ZeroDynamicsModel(2, 1), Eigen::Vector2d(1, 2)), 0.0);
}

TEST(PotentialTest, PendulumMatchesFormula) {
  std::mt19937_64 rng(12);
  const Model model = systems::TrueSystem({});
  const PendulumOracle oracle;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector2d q = Uniform(2, 1, -kPi, kPi, rng);
    EXPECT_NEAR(Potential(model, q), oracle.Energy(q), 1e-11);
  }
}

TEST(ConservativeForceTest, VanishesAtEquilibria) {
  const Model model = systems::TrueSystem({});
  EXPECT_LT(ConservativeForce(model, Eigen::Vector2d(0, 0)).norm(), 1e-12);
  EXPECT_LT(ConservativeForce(model, Eigen::Vector2d(kPi, 0)).norm(), 1e-12);
}

TEST(ConservativeForceTest, IsNegativeFiniteDifferenceOfPotential) {
  std::mt19937_64 rng(13);
  const std::vector<Model> models = {systems::TrueSystem({}), RandomLearnedModel(2, 2, rng, 1.0),
                                     RandomLearnedModel(3, 1, rng, 1.0)};
  for (const Model& model : models) {
    const int n = model.dof();
    for (int i = 0; i < 20; ++i) {
      const Eigen::VectorXd q = Uniform(n, 1, -kPi, kPi, rng);
      const Eigen::VectorXd force = ConservativeForce(model, q);
      const double h = 1e-5;
      for (int k = 0; k < n; ++k) {
        Eigen::VectorXd qp = q, qm = q;
        qp(k) += h;
        qm(k) -= h;
        const double fd = -(Potential(model, qp) - Potential(model, qm)) / (2 * h);
        EXPECT_LE(std::abs(fd - force(k)), 1e-6 * std::max(std::abs(fd), 1.0));
      }
    }
  }
}

TEST(CoriolisTest, VanishesForZeroVelocity) {
  std::mt19937_64 rng(4);
  const Model model = RandomLearnedModel(2, 1, rng, 1.0);
  EXPECT_EQ(CoriolisTimesQdot(model, Eigen::Vector2d(0.4, 1.0), Eigen::Vector2d::Zero()).norm(),
            0.0);
}

TEST(CoriolisTest, VanishesForConstantMass) {
  const Model model = ZeroDynamicsModel(3, 1);
  EXPECT_EQ(CoriolisTimesQdot(model, Eigen::Vector3d(0.4, 1.0, 2.0), Eigen::Vector3d(3, -2, 1))
                .norm(),
            0.0);
}

TEST(CoriolisTest, MatchesChristoffelConstruction) {
  std::mt19937_64 rng(17);
  for (int n : {1, 2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Model model = RandomLearnedModel(n, 1, rng, 1.0);
      const auto& mass = std::get<LearnedCholeskyMass>(model.dyn().mass());
      const Eigen::VectorXd q = Uniform(n, 1, -kPi, kPi, rng);
      const Eigen::VectorXd qdot = Uniform(n, 1, -3, 3, rng);
      std::vector<Eigen::MatrixXd> dm(n);
      Eigen::MatrixXd m;
      for (int k = 0; k < n; ++k) MassAndDerivative(mass.net, mass.delta, q, k, m, dm[k]);
      Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            c(i, j) += 0.5 * (dm[k](i, j) + dm[j](i, k) - dm[i](j, k)) * qdot(k);
          }
        }
      }
      EXPECT_LT((CoriolisTimesQdot(model, q, qdot) - c * qdot).cwiseAbs().maxCoeff(), 1e-8)
          << "n=" << n << " trial " << trial;
      EXPECT_LT((MassMatrix(model, q) - m).norm(), 1e-12);
    }
  }
}

TEST(ForwardDynamicsTest, PendulumEquilibriaAreStill) {
  const Model model = systems::TrueSystem({});
  EXPECT_LT(ForwardDynamics(model, Eigen::Vector2d(0, 0), Eigen::Vector2d::Zero(),
                            Eigen::Vector2d::Zero())
                .norm(),
            1e-12);
  EXPECT_LT(ForwardDynamics(model, Eigen::Vector2d(kPi, 0), Eigen::Vector2d::Zero(),
                            Eigen::Vector2d::Zero())
                .norm(),
            1e-12);
}

TEST(ForwardDynamicsTest, PendulumHorizontalFromFormulas) {
  const Eigen::Vector2d q(kPi / 2, 0);
  const PendulumOracle oracle;
  const Eigen::Vector2d expected = -oracle.Mass(q).inverse() * oracle.Gradient(q);
  const Eigen::VectorXd qddot = ForwardDynamics(systems::TrueSystem({}), q,
                                                Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero());
  EXPECT_NEAR(qddot(0), -90.0 / 7.0, 1e-10);
  EXPECT_NEAR(qddot(1), 120.0 / 7.0, 1e-10);
  EXPECT_LT((qddot - expected).norm(), 1e-10);
}

TEST(ForwardDynamicsTest, PendulumWithVelocityMatchesEulerLagrange) {
  std::mt19937_64 rng(30);
  const Model model = systems::TrueSystem({});
  const PendulumOracle oracle;
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector2d q = Uniform(2, 1, -kPi, kPi, rng);
    const Eigen::Vector2d qd = Uniform(2, 1, -5, 5, rng);
    const Eigen::Vector2d u = Uniform(2, 1, -50, 50, rng);
    // dM/dq2 is the only nonzero partial.
    const double s2 = std::sin(q(1));
    Eigen::Matrix2d dm2;
    dm2 << -2 * 5 * s2, -5 * s2, -5 * s2, 0;
    const Eigen::Vector2d mdot_qd = dm2 * qd * qd(1);
    const Eigen::Vector2d dt_dq(0, 0.5 * qd.dot(dm2 * qd));
    const Eigen::Vector2d force = u - 0.5 * qd;
    const Eigen::Vector2d expected =
        oracle.Mass(q).inverse() * (force - (mdot_qd - dt_dq) - oracle.Gradient(q));
    EXPECT_LT((ForwardDynamics(model, q, qd, u) - expected).norm(), 1e-9);
  }
}

TEST(ForwardDynamicsTest, IdentityMassZeroPotentialReducesToForceNetwork) {
  std::mt19937_64 rng(31);
  ad::Mlp force = RandomNet({5, 16, 2}, 1.0, rng);
  const Model model =
      DynModel(2, 1, LearnedCholeskyMass{ad::Mlp({2, 8, 3}), 1.0}, LearnedPotential{ad::Mlp({2, 8, 1})},
               GenericForce{force}, WhiteBoxParams{});
  const Eigen::MatrixXd q = Uniform(2, 7, -3, 3, rng);
  const Eigen::MatrixXd qd = Uniform(2, 7, -3, 3, rng);
  const Eigen::MatrixXd u = Uniform(1, 7, -3, 3, rng);
  Eigen::MatrixXd stacked(5, 7);
  stacked << q, qd, u;
  EXPECT_LT((ForwardDynamicsBatch(model, q, qd, u) - force.Forward(stacked)).norm(), 1e-13);
}

TEST(ForwardDynamicsTest, BatchAgreesWithSingleSample) {
  std::mt19937_64 rng(32);
  const Model model = RandomLearnedModel(3, 2, rng);
  const Eigen::MatrixXd q = Uniform(3, 6, -3, 3, rng);
  const Eigen::MatrixXd qd = Uniform(3, 6, -3, 3, rng);
  const Eigen::MatrixXd u = Uniform(2, 6, -3, 3, rng);
  const Eigen::MatrixXd batch = ForwardDynamicsBatch(model, q, qd, u);
  for (int c = 0; c < 6; ++c) {
    EXPECT_LT((batch.col(c) - ForwardDynamics(model, q.col(c), qd.col(c), u.col(c))).norm(),
              1e-12);
  }
}

TEST(ForwardDynamicsTest, RejectsWrongInputSize) {
  const Model model = systems::TrueSystem({});
  EXPECT_THROW(ForwardDynamics(model, Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
                               Eigen::Vector3d::Zero()),
               ShapeError);
}

TEST(Rk4Test, ZeroDynamicsAdvancesLinearly) {
  const Model model = ZeroDynamicsModel(2, 1);
  const GeneralizedState next =
      Rk4Step(model, {Eigen::Vector2d(0.5, -1.0), Eigen::Vector2d(2.0, 3.0)},
              Eigen::VectorXd::Zero(1), 0.25);
  EXPECT_EQ(next.q, Eigen::VectorXd(Eigen::Vector2d(1.0, -0.25)));
  EXPECT_EQ(next.qdot, Eigen::VectorXd(Eigen::Vector2d(2.0, 3.0)));
}

TEST(Rk4Test, ExponentialFlowMatchesHandStages) {
  // A naive network with qddot = qdot makes qdot follow xdot = x.
  ad::Mlp net({3, 1});
  net.weight(0) << 0, 1, 0;
  const Model model = NaiveModel{net, 1, 1};
  const double h = 0.1;
  const double k1 = 1.0, k2 = 1.0 + h * k1 / 2, k3 = 1.0 + h * k2 / 2, k4 = 1.0 + h * k3;
  const double expected = 1.0 + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6;
  const GeneralizedState next = Rk4Step(
      model, {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)}, Eigen::VectorXd::Zero(1), h);
  EXPECT_DOUBLE_EQ(next.qdot(0), expected);
  EXPECT_NEAR(next.qdot(0), 1.1051708333333333, 1e-15);
  EXPECT_NEAR(next.qdot(0), std::exp(0.1), 1e-7);
}

TEST(Rk4Test, SingleStepConservesEnergy) {
  std::mt19937_64 rng(40);
  const Model model = UndampedPendulum();
  for (int i = 0; i < 10; ++i) {
    const GeneralizedState x{Uniform(2, 1, -kPi, kPi, rng), Uniform(2, 1, -2, 2, rng)};
    const GeneralizedState next = Rk4Step(model, x, Eigen::Vector2d::Zero(), 1e-3);
    const double e0 = TotalEnergy(model, x);
    EXPECT_LE(std::abs(TotalEnergy(model, next) - e0), 1e-9 * std::abs(e0));
  }
}

TEST(Rk4Test, RejectsNonPositiveStep) {
  const Model model = systems::TrueSystem({});
  const GeneralizedState x{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
  EXPECT_THROW(Rk4Step(model, x, Eigen::Vector2d::Zero(), 0.0), ConfigError);
  EXPECT_THROW(Rk4Step(model, x, Eigen::Vector2d::Zero(), -0.1), ConfigError);
}

TEST(Rk4Test, BatchAgreesWithSingleStep) {
  std::mt19937_64 rng(41);
  const Model model = systems::TrueSystem({});
  const Eigen::MatrixXd q = Uniform(2, 5, -3, 3, rng);
  const Eigen::MatrixXd qd = Uniform(2, 5, -3, 3, rng);
  const Eigen::MatrixXd u = Uniform(2, 5, -30, 30, rng);
  const auto [qn, qdn] = Rk4StepBatch(model, q, qd, u, 0.01);
  for (int c = 0; c < 5; ++c) {
    const GeneralizedState s = Rk4Step(model, {q.col(c), qd.col(c)}, u.col(c), 0.01);
    EXPECT_LT((qn.col(c) - s.q).norm(), 1e-13);
    EXPECT_LT((qdn.col(c) - s.qdot).norm(), 1e-13);
  }
}

TEST(Rk4Test, StepGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(42);
  for (Model model : {systems::TrueSystem({}), RandomLearnedModel(2, 2, rng)}) {
    const Eigen::MatrixXd q = Uniform(2, 3, -2, 2, rng);
    const Eigen::MatrixXd qd = Uniform(2, 3, -2, 2, rng);
    const Eigen::MatrixXd u = Uniform(2, 3, -2, 2, rng);
    const Eigen::MatrixXd w = Uniform(4, 3, -1, 1, rng);
    ad::Objective obj;
    obj.value_and_grad = [&](const ad::ParamVector& p, ad::ParamVector& g) {
      Model copy = model;
      copy.SetParams(p);
      ad::Tape tape;
      BoundModel bound = copy.Bind(tape, true);
      StateVars next = Rk4Step(bound, {tape.Constant(q), tape.Constant(qd)}, tape.Constant(u), 0.05);
      ad::Var f = ad::Sum(ad::VStack({next.q, next.qdot}) * tape.Constant(w));
      tape.Backward(f);
      g = copy.CollectGrad(tape, bound);
      return f.scalar();
    };
    obj.value = [&](const ad::ParamVector& p) {
      ad::ParamVector g;
      return obj.value_and_grad(p, g);
    };
    EXPECT_LE(ad::FiniteDifferenceCheck(obj, model.GetParams(), 1e-6).max_relative_error, 1e-5);
  }
}

TEST(RolloutTest, ZeroDynamicsStaysConstant) {
  const Model model = ZeroDynamicsModel(2, 1);
  const GeneralizedState x0{Eigen::Vector2d(0.2, 0.1), Eigen::Vector2d::Zero()};
  const auto states = Rollout(model, x0, Eigen::MatrixXd::Zero(1, 50), 0.1);
  ASSERT_EQ(states.size(), 51u);
  EXPECT_EQ(states.front().q, x0.q);
  for (const GeneralizedState& s : states) {
    EXPECT_EQ(s.q, x0.q);
    EXPECT_EQ(s.qdot, x0.qdot);
  }
}

TEST(RolloutTest, RejectsEmptyControls) {
  const GeneralizedState x0{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
  EXPECT_THROW(Rollout(systems::TrueSystem({}), x0, Eigen::MatrixXd::Zero(2, 0), 0.1),
               ConfigError);
}

TEST(RolloutTest, ErrorNamesStep) {
  ad::Mlp net({3, 1});
  net.weight(0) << 0, 1e200, 0;
  const Model model = NaiveModel{net, 1, 1};
  const GeneralizedState x0{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)};
  try {
    Rollout(model, x0, Eigen::MatrixXd::Zero(1, 10), 0.1);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("rollout step"), std::string::npos) << e.what();
  }
}

TEST(RolloutTest, UndampedPendulumConservesEnergy) {
  const Model model = UndampedPendulum();
  const GeneralizedState x0{Eigen::Vector2d(0.1, 0), Eigen::Vector2d::Zero()};
  const double e0 = TotalEnergy(model, x0);
  for (auto [dt, steps] : {std::pair{0.01, 500}, std::pair{1e-3, 5000}}) {
    const auto states = Rollout(model, x0, Eigen::MatrixXd::Zero(2, steps), dt);
    double drift = 0.0;
    for (const GeneralizedState& s : states) {
      drift = std::max(drift, std::abs(TotalEnergy(model, s) - e0) / std::abs(e0));
    }
    EXPECT_LE(drift, 1e-4) << "dt=" << dt;
  }
}

TEST(RolloutTest, LargeSwingConservesEnergy) {
  const Model model = UndampedPendulum();
  const GeneralizedState x0{Eigen::Vector2d(2.0, -1.0), Eigen::Vector2d(1.0, 0.5)};
  const double e0 = TotalEnergy(model, x0);
  const auto states = Rollout(model, x0, Eigen::MatrixXd::Zero(2, 5000), 1e-3);
  EXPECT_LE(std::abs(TotalEnergy(model, states.back()) - e0), 1e-4 * std::abs(e0));
}

TEST(AccelLossTest, ExactTargetsGiveZero) {
  std::mt19937_64 rng(50);
  const Model model = systems::TrueSystem({});
  AccelBatch batch{Uniform(2, 64, -kPi, kPi, rng), Uniform(2, 64, -10, 10, rng),
                   Uniform(2, 64, -120, 120, rng), {}};
  batch.qddot = ForwardDynamicsBatch(model, batch.q, batch.qdot, batch.u);
  EXPECT_LE(AccelLoss(model, batch), 1e-10);
}

TEST(AccelLossTest, SingleSampleOffset) {
  const Model model = systems::TrueSystem({});
  AccelBatch batch{Eigen::Vector2d(0, 0), Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
                   Eigen::Vector2d(0.1, 0)};
  EXPECT_NEAR(AccelLoss(model, batch), 0.01, 1e-15);
}

TEST(AccelLossTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(51);
  Model model = RandomLearnedModel(2, 2, rng);
  AccelBatch batch{Uniform(2, 8, -kPi, kPi, rng), Uniform(2, 8, -3, 3, rng),
                   Uniform(2, 8, -3, 3, rng), Uniform(2, 8, -3, 3, rng)};
  ad::Objective obj;
  obj.value_and_grad = [&](const ad::ParamVector& p, ad::ParamVector& g) {
    Model copy = model;
    copy.SetParams(p);
    ad::Tape tape;
    BoundModel bound = copy.Bind(tape, true);
    ad::Var f = AccelLoss(tape, bound, batch);
    tape.Backward(f);
    g = copy.CollectGrad(tape, bound);
    return f.scalar();
  };
  obj.value = [&](const ad::ParamVector& p) {
    Model copy = model;
    copy.SetParams(p);
    return AccelLoss(copy, batch);
  };
  EXPECT_LE(ad::FiniteDifferenceCheck(obj, model.GetParams(), 1e-6).max_relative_error, 1e-5);
}

}  // namespace
}  // namespace gbdyn::dynamics
