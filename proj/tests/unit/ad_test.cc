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
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "gbdyn/ad/adam.h"
#include "gbdyn/ad/gradcheck.h"
#include "gbdyn/ad/mlp.h"
#include "gbdyn/ad/ops.h"
#include "gbdyn/ad/params.h"
#include "gbdyn/ad/tape.h"
#include "gbdyn/error.h"
#include "test_support.h"

namespace gbdyn::ad {
namespace {

using ::gbdyn::testing::RandomNet;

TEST(MlpForwardTest, ZeroNetworkGivesZero) {
  Mlp net({3, 5, 2});
  Eigen::VectorXd x(3);
  x << 0.3, -1.2, 4.0;
  EXPECT_EQ(net.Forward(x), Eigen::MatrixXd::Zero(2, 1));
}

TEST(MlpForwardTest, IdentityLinearLayer) {
  Mlp net({2, 2});
  net.weight(0) = Eigen::MatrixXd::Identity(2, 2);
  EXPECT_EQ(net.Forward(Eigen::Vector2d(1, 2)), Eigen::MatrixXd(Eigen::Vector2d(1, 2)));
}

TEST(MlpForwardTest, SingleHiddenUnit) {
  Mlp net({1, 1, 1});
  net.weight(0).setOnes();
  net.weight(1).setOnes();
  Eigen::VectorXd x(1);
  x << 0.5;
  EXPECT_NEAR(net.Forward(x)(0, 0), 0.46211715726000974, 1e-15);
}

TEST(MlpForwardTest, RejectsWrongInputSize) {
  Mlp net({3, 4, 1});
  EXPECT_THROW(net.Forward(Eigen::Vector2d(1, 2)), ShapeError);
  EXPECT_THROW(net.InputJacobian(Eigen::Vector2d(1, 2)), ShapeError);
}

TEST(MlpForwardTest, ParameterCountMatchesLayerSum) {
  Mlp net({6, 64, 64, 64, 2});
  EXPECT_EQ(net.parameter_count(), (6 * 64 + 64) + 2 * (64 * 64 + 64) + (64 * 2 + 2));
}

TEST(MlpForwardTest, RandomInitWithinFanInBound) {
  std::mt19937_64 rng(7);
  Mlp net = Mlp::Random({4, 16, 3}, rng);
  EXPECT_LE(net.weight(0).cwiseAbs().maxCoeff(), std::sqrt(1.0 / 4));
  EXPECT_LE(net.weight(1).cwiseAbs().maxCoeff(), std::sqrt(1.0 / 16));
  EXPECT_EQ(net.bias(0).norm(), 0.0);
}

TEST(MlpForwardTest, BitwiseDeterministic) {
  std::mt19937_64 rng(3);
  Mlp net = RandomNet({3, 8, 8, 2}, 1.0, rng);
  Eigen::MatrixXd x = testing::Uniform(3, 10, -1, 1, rng);
  EXPECT_EQ(net.Forward(x), net.Forward(x));
}

TEST(MlpJacobianTest, LinearLayerJacobianIsWeight) {
  std::mt19937_64 rng(1);
  Mlp net = RandomNet({3, 2}, 1.0, rng);
  EXPECT_EQ(net.InputJacobian(Eigen::Vector3d(0.1, 2.0, -3.0)), net.weight(0));
}

TEST(MlpJacobianTest, ZeroNetworkJacobianIsZero) {
  Mlp net({3, 4, 2});
  EXPECT_EQ(net.InputJacobian(Eigen::Vector3d(1, 2, 3)), Eigen::MatrixXd::Zero(2, 3));
}

TEST(MlpJacobianTest, MatchesCentralDifferences) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Mlp net = RandomNet({3, 10, 10, 4}, 1.0, rng);
    const Eigen::VectorXd x = testing::Uniform(3, 1, -1, 1, rng);
    const Eigen::MatrixXd jac = net.InputJacobian(x);
    const double h = 1e-5;
    for (int k = 0; k < 3; ++k) {
      Eigen::VectorXd xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      const Eigen::VectorXd fd = (net.Forward(xp) - net.Forward(xm)) / (2 * h);
      for (int r = 0; r < 4; ++r) {
        const double err = std::abs(fd(r) - jac(r, k)) /
                           std::max({std::abs(fd(r)), std::abs(jac(r, k)), 1e-8});
        EXPECT_LE(err, 1e-6) << "trial " << trial << " entry " << r << "," << k;
      }
    }
  }
}

TEST(MlpJacobianTest, TapeTangentsMatchPlainJacobian) {
  std::mt19937_64 rng(5);
  Mlp net = RandomNet({3, 6, 6, 2}, 1.0, rng);
  const Eigen::MatrixXd x = testing::Uniform(3, 4, -1, 1, rng);
  Tape tape;
  MlpVars vars = BindMlp(tape, net, true);
  MlpWithTangents out = ForwardWithTangents(vars, tape.Constant(x), 3);
  for (int c = 0; c < 4; ++c) {
    const Eigen::MatrixXd jac = net.InputJacobian(x.col(c));
    for (int k = 0; k < 3; ++k) {
      EXPECT_LT((out.tangents[k].value().col(c) - jac.col(k)).norm(), 1e-14);
    }
  }
  EXPECT_LT((out.output.value() - net.Forward(x)).norm(), 1e-14);
}

// d/dtheta of sum(dy/dx) exercises differentiation through the tangents.
TEST(MlpJacobianTest, JacobianIsDifferentiableInParameters) {
  std::mt19937_64 rng(9);
  Mlp net = RandomNet({2, 5, 5, 1}, 1.0, rng);
  const Eigen::MatrixXd x = testing::Uniform(2, 3, -1, 1, rng);
  auto refs = [](Mlp& m) {
    std::vector<ParamRef> r;
    for (int l = 0; l < m.num_layers(); ++l) {
      r.emplace_back("w" + std::to_string(l), m.weight(l));
      r.emplace_back("b" + std::to_string(l), m.bias(l));
    }
    return r;
  };
  Objective obj;
  obj.value_and_grad = [&](const ParamVector& p, ParamVector& g) {
    Mlp copy = net;
    Unflatten(p, refs(copy));
    Tape tape;
    MlpVars vars = BindMlp(tape, copy, true);
    MlpWithTangents out = ForwardWithTangents(vars, tape.Constant(x), 2);
    Var f = Sum(Square(out.tangents[0])) + Sum(out.tangents[1] * out.output);
    tape.Backward(f);
    g.resize(p.size());
    Eigen::Index off = 0;
    for (int l = 0; l < copy.num_layers(); ++l) {
      const Eigen::MatrixXd gw = tape.Grad(vars.weights[l]);
      const Eigen::MatrixXd gb = tape.Grad(vars.biases[l]);
      g.segment(off, gw.size()) = Eigen::Map<const Eigen::VectorXd>(gw.data(), gw.size());
      off += gw.size();
      g.segment(off, gb.size()) = Eigen::Map<const Eigen::VectorXd>(gb.data(), gb.size());
      off += gb.size();
    }
    return f.scalar();
  };
  obj.value = [&](const ParamVector& p) {
    ParamVector g;
    return obj.value_and_grad(p, g);
  };
  const GradCheckReport report = FiniteDifferenceCheck(obj, Flatten(refs(net)), 1e-5);
  EXPECT_LE(report.max_relative_error, 1e-6);
}

TEST(GradTest, ZeroNetworkSquaredOutputHasZeroGradient) {
  Mlp net({2, 4, 2});
  Tape tape;
  MlpVars vars = BindMlp(tape, net, true);
  Var f = Sum(Square(Forward(vars, tape.Constant(Eigen::Vector2d(0.3, -0.7)))));
  tape.Backward(f);
  for (int l = 0; l < 2; ++l) {
    EXPECT_EQ(tape.Grad(vars.weights[l]).norm(), 0.0);
    EXPECT_EQ(tape.Grad(vars.biases[l]).norm(), 0.0);
  }
}

TEST(GradTest, BiasPathMatchesFiniteDifferences) {
  std::mt19937_64 rng(2);
  Mlp net = RandomNet({2, 4, 2}, 0.5, rng);
  const Eigen::Vector2d x(0.3, -0.7);
  Objective obj;
  obj.value_and_grad = [&](const ParamVector& p, ParamVector& g) {
    Tape tape;
    MlpVars vars = BindMlp(tape, net, false);
    vars.biases[1] = tape.Variable(p);
    vars.biases[0] = tape.Constant(net.bias(0));
    Var f = Sum(Square(Forward(vars, tape.Constant(x))));
    tape.Backward(f);
    g = tape.Grad(vars.biases[1]);
    return f.scalar();
  };
  obj.value = [&](const ParamVector& p) {
    ParamVector g;
    return obj.value_and_grad(p, g);
  };
  EXPECT_LE(FiniteDifferenceCheck(obj, net.bias(1), 1e-5).max_relative_error, 1e-8);
}

TEST(GradTest, ConstantFunctionHasZeroGradient) {
  Tape tape;
  Var theta = tape.Variable(Eigen::MatrixXd::Constant(3, 1, 2.0));
  Var f = Sum(tape.Constant(Eigen::MatrixXd::Ones(2, 2))) + Sum(theta * 0.0);
  tape.Backward(f);
  EXPECT_EQ(tape.Grad(theta).norm(), 0.0);
}

TEST(GradTest, LearnedPotentialMinusScalar) {
  std::mt19937_64 rng(4);
  Mlp net = RandomNet({2, 8, 8, 1}, 1.0, rng);
  const Eigen::Vector2d q(0.4, -1.1);
  Objective obj;
  obj.value_and_grad = [&](const ParamVector& p, ParamVector& g) {
    Mlp copy = net;
    copy.weight(0) = Eigen::Map<const Eigen::MatrixXd>(p.data(), 8, 2);
    Tape tape;
    MlpVars vars = BindMlp(tape, copy, false);
    vars.weights[0] = tape.Variable(copy.weight(0));
    Var f = Forward(vars, tape.Constant(q)) - 3.0;
    tape.Backward(f);
    const Eigen::MatrixXd gw = tape.Grad(vars.weights[0]);
    g = Eigen::Map<const Eigen::VectorXd>(gw.data(), gw.size());
    return f.scalar();
  };
  obj.value = [&](const ParamVector& p) {
    ParamVector g;
    return obj.value_and_grad(p, g);
  };
  ParamVector p0 = Eigen::Map<const Eigen::VectorXd>(net.weight(0).data(), 16);
  EXPECT_LE(FiniteDifferenceCheck(obj, p0, 1e-5).max_relative_error, 1e-5);
}

TEST(GradTest, NonFiniteIntermediateNamesPrimitive) {
  Tape tape;
  Var a = tape.Variable(Eigen::MatrixXd::Constant(1, 1, 1e200));
  try {
    Var b = a * a;
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("mul"), std::string::npos) << e.what();
  }
}

TEST(GradTest, BroadcastAndBatchedOpsMatchFiniteDifferences) {
  std::mt19937_64 rng(6);
  const int n = 3;
  const Eigen::MatrixXd a0 = testing::Uniform(n * n, 4, -1, 1, rng);
  const Eigen::MatrixXd rhs = testing::Uniform(n, 4, -1, 1, rng);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  Objective obj;
  obj.value_and_grad = [&](const ParamVector& p, ParamVector& g) {
    Tape tape;
    Var a = tape.Variable(Eigen::Map<const Eigen::MatrixXd>(p.data(), n * n, 4));
    // SPD per column: A A^T + I.
    Var m = BatchedMatMul(a, BatchedTranspose(a, n, n), n, n, n) +
            tape.Constant(eye.reshaped());
    Var x = BatchedSpdSolve(m, tape.Constant(rhs), n);
    Var f = Sum(Sin(x) * Cos(ColSum(x))) + Mean(Tanh(Rows(x, 1, 2)));
    tape.Backward(f);
    const Eigen::MatrixXd ga = tape.Grad(a);
    g = Eigen::Map<const Eigen::VectorXd>(ga.data(), ga.size());
    return f.scalar();
  };
  obj.value = [&](const ParamVector& p) {
    ParamVector g;
    return obj.value_and_grad(p, g);
  };
  ParamVector p0 = Eigen::Map<const Eigen::VectorXd>(a0.data(), a0.size());
  EXPECT_LE(FiniteDifferenceCheck(obj, p0, 1e-5).max_relative_error, 1e-6);
}

TEST(GradTest, SpdSolveRejectsIndefiniteMatrix) {
  Tape tape;
  Eigen::VectorXd m(4);
  m << 1, 0, 0, -1;
  EXPECT_THROW(BatchedSpdSolve(tape.Constant(m), tape.Constant(Eigen::Vector2d(1, 1)), 2),
               NumericError);
}

TEST(AdamTest, ZeroGradientLeavesParametersUnchanged) {
  AdamState state = AdamState::Zero(3, AdamConfig{});
  ParamVector p(3);
  p << 1, -2, 3;
  const ParamVector before = p;
  AdamStep(state, p, ParamVector::Zero(3));
  EXPECT_EQ(p, before);
  EXPECT_EQ(state.step, 1);
}

TEST(AdamTest, FirstStepByHand) {
  AdamConfig c;
  c.learning_rate = 0.01;
  AdamState state = AdamState::Zero(1, c);
  ParamVector p(1), g(1);
  p << 0.5;
  g << 4.0;
  AdamStep(state, p, g);
  // m_hat = g, v_hat = g^2, so the step is lr * g / (|g| + eps).
  EXPECT_NEAR(p(0), 0.5 - 0.01 * 4.0 / (4.0 + 1e-8), 1e-15);
}

TEST(AdamTest, TwoStepsMatchScriptedTrace) {
  const double lr = 0.1, b1 = 0.9, b2 = 0.999, eps = 1e-8, grad = -3.0;
  double x = 1.0, m = 0.0, v = 0.0;
  for (int t = 1; t <= 2; ++t) {
    m = b1 * m + (1 - b1) * grad;
    v = b2 * v + (1 - b2) * grad * grad;
    x -= lr * (m / (1 - std::pow(b1, t))) / (std::sqrt(v / (1 - std::pow(b2, t))) + eps);
  }
  AdamConfig c;
  c.learning_rate = lr;
  AdamState state = AdamState::Zero(1, c);
  ParamVector p = ParamVector::Constant(1, 1.0);
  for (int t = 0; t < 2; ++t) AdamStep(state, p, ParamVector::Constant(1, grad));
  EXPECT_DOUBLE_EQ(p(0), x);
  EXPECT_EQ(state.step, 2);
}

TEST(AdamTest, ShapeMismatchThrows) {
  AdamState state = AdamState::Zero(2, AdamConfig{});
  ParamVector p = ParamVector::Zero(2);
  EXPECT_THROW(AdamStep(state, p, ParamVector::Zero(3)), ShapeError);
  EXPECT_THROW(AdamStep(state, p, ParamVector::Zero(2), Eigen::VectorXd::Ones(1)), ShapeError);
}

TEST(AdamTest, PerEntryRatesScaleSteps) {
  AdamState state = AdamState::Zero(2, AdamConfig{});
  ParamVector p = ParamVector::Zero(2);
  AdamStep(state, p, ParamVector::Ones(2), Eigen::Vector2d(0.1, 0.001));
  EXPECT_NEAR(p(0) / p(1), 100.0, 1e-9);
}

TEST(FiniteDifferenceTest, QuadraticIsExact) {
  Eigen::MatrixXd a(3, 3);
  a << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  const Eigen::Vector3d b(1, -2, 0.5);
  Objective obj;
  obj.value = [&](const ParamVector& p) { return 0.5 * p.dot(a * p) + b.dot(p); };
  obj.value_and_grad = [&](const ParamVector& p, ParamVector& g) {
    g = a * p + b;
    return obj.value(p);
  };
  EXPECT_LE(FiniteDifferenceCheck(obj, Eigen::Vector3d(0.3, 0.2, -1), 1e-4).max_relative_error,
            1e-9);
}

TEST(FiniteDifferenceTest, ConstantHasZeroError) {
  Objective obj;
  obj.value = [](const ParamVector&) { return 2.0; };
  obj.value_and_grad = [](const ParamVector& p, ParamVector& g) {
    g = ParamVector::Zero(p.size());
    return 2.0;
  };
  EXPECT_EQ(FiniteDifferenceCheck(obj, Eigen::Vector2d(1, 2), 1e-4).max_relative_error, 0.0);
}

TEST(FiniteDifferenceTest, RejectsBadStepAndNonFiniteValues) {
  Objective obj;
  obj.value = [](const ParamVector& p) { return p(0) > 1.0 ? std::nan("") : p(0); };
  obj.value_and_grad = [&](const ParamVector& p, ParamVector& g) {
    g = ParamVector::Ones(1);
    return obj.value(p);
  };
  EXPECT_THROW(FiniteDifferenceCheck(obj, ParamVector::Constant(1, 0.0), 0.0), ConfigError);
  EXPECT_THROW(FiniteDifferenceCheck(obj, ParamVector::Constant(1, 1.0), 1e-3), NumericError);
}

TEST(ParamsTest, FlattenUnflattenRoundTrip) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Random(3, 2);
  Eigen::VectorXd b = Eigen::VectorXd::Random(4);
  double s = 1.25;
  std::vector<ParamRef> refs{{"w", w}, {"b", b}, {"s", s}};
  const ParamVector flat = Flatten(refs);
  ASSERT_EQ(flat.size(), 11);
  Eigen::MatrixXd w2 = Eigen::MatrixXd::Zero(3, 2);
  Eigen::VectorXd b2 = Eigen::VectorXd::Zero(4);
  double s2 = 0.0;
  std::vector<ParamRef> refs2{{"w", w2}, {"b", b2}, {"s", s2}};
  Unflatten(flat, refs2);
  EXPECT_EQ(w2, w);
  EXPECT_EQ(b2, b);
  EXPECT_EQ(s2, s);
  EXPECT_EQ(Flatten(refs2), flat);
  EXPECT_THROW(Unflatten(ParamVector::Zero(10), refs2), ShapeError);
}

TEST(ParamsTest, LayoutIsDeterministic) {
  Eigen::MatrixXd w(2, 2);
  double s = 0.0;
  ParamLayout a({{"w", w}, {"s", s}});
  ParamLayout b({{"w", w}, {"s", s}});
  ASSERT_EQ(a.entries().size(), b.entries().size());
  EXPECT_EQ(a.Find("s").offset, 4);
  EXPECT_EQ(b.Find("s").offset, 4);
  EXPECT_THROW(a.Find("missing"), ConfigError);
}

}  // namespace
}  // namespace gbdyn::ad
