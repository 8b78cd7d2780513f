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

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "gbdyn/ad/adam.h"
#include "gbdyn/dynamics/lagrangian.h"
#include "gbdyn/error.h"
#include "gbdyn/modelzoo/checkpoint.h"
#include "gbdyn/modelzoo/model_spec.h"
#include "gbdyn/modelzoo/zoo.h"
#include "gbdyn/systems/double_pendulum.h"
#include "gbdyn/systems/sampling.h"
#include "gbdyn/training/dataset.h"
#include "test_support.h"

namespace gbdyn::modelzoo {
namespace {

using ::gbdyn::testing::Uniform;

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("gbdyn_zoo_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string File(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

dynamics::Model BuildNamed(const std::string& name, std::uint64_t seed = 1) {
  ModelSpec spec;
  spec.name = name;
  spec.seed = seed;
  return Build(spec);
}

TEST(ModelSpecTest, NamesCoverTheTable) {
  EXPECT_EQ(ModelNames(), (std::vector<std::string>{"W-B", "B", "F", "V", "M", "MB", "VB", "MV",
                                                    "MVB", "MVF", "Naive"}));
}

TEST(ModelSpecTest, ComponentMappingMatchesTable) {
  using F = ForceKind;
  constexpr auto kL = MassKind::kLearned, kW = MassKind::kWhiteBox;
  constexpr auto pL = PotentialKind::kLearned, pW = PotentialKind::kWhiteBox;
  const std::map<std::string, Components> table = {
      {"W-B", {kW, pW, F::kWhiteBox}},      {"B", {kW, pW, F::kControlAffine}},
      {"F", {kW, pW, F::kGeneric}},         {"V", {kW, pL, F::kWhiteBox}},
      {"M", {kL, pW, F::kWhiteBox}},        {"MB", {kL, pW, F::kControlAffine}},
      {"VB", {kW, pL, F::kControlAffine}},  {"MV", {kL, pL, F::kWhiteBox}},
      {"MVB", {kL, pL, F::kControlAffine}}, {"MVF", {kL, pL, F::kGeneric}},
  };
  for (const auto& [name, expected] : table) {
    const Components c = ComponentsFor(name);
    EXPECT_EQ(c.mass, expected.mass) << name;
    EXPECT_EQ(c.potential, expected.potential) << name;
    EXPECT_EQ(c.force, expected.force) << name;
    const Components built = Describe(BuildNamed(name).dyn());
    EXPECT_EQ(built.mass, expected.mass) << name;
    EXPECT_EQ(built.potential, expected.potential) << name;
    EXPECT_EQ(built.force, expected.force) << name;
  }
}

TEST(ModelSpecTest, RejectsUnknownNameAndBadDims) {
  ModelSpec spec;
  spec.name = "XYZ";
  EXPECT_THROW(Build(spec), ConfigError);
  spec.name = "W-B";
  spec.dof = 3;
  spec.inputs = 3;
  EXPECT_THROW(Build(spec), ConfigError);
  spec = {};
  spec.delta = 0.0;
  EXPECT_THROW(Build(spec), ConfigError);
}

TEST(BuildTest, WhiteBoxHasNineTrainableParameters) {
  const dynamics::Model model = BuildNamed("W-B");
  EXPECT_EQ(model.ParameterCount(), 9);
}

TEST(BuildTest, WhiteBoxSubsetsFollowComponents) {
  auto count_wb = [](const dynamics::Model& m) {
    Eigen::Index n = 0;
    const ad::ParamLayout layout = m.Layout();
    for (const auto& e : layout.entries()) {
      if (e.name.rfind("wb.", 0) == 0) n += e.rows * e.cols;
    }
    return n;
  };
  EXPECT_EQ(count_wb(BuildNamed("B")), 5);    // masses, lengths, g
  EXPECT_EQ(count_wb(BuildNamed("MB")), 5);   // potential still needs masses, lengths, g
  EXPECT_EQ(count_wb(BuildNamed("M")), 9);
  EXPECT_EQ(count_wb(BuildNamed("VB")), 4);   // inertia constants only
  EXPECT_EQ(count_wb(BuildNamed("MV")), 4);   // b and eta
  EXPECT_EQ(count_wb(BuildNamed("MVF")), 0);
  EXPECT_EQ(count_wb(BuildNamed("Naive")), 0);
}

TEST(BuildTest, NaiveParameterCountFollowsArchitecture) {
  const dynamics::Model model = BuildNamed("Naive");
  ASSERT_TRUE(model.is_naive());
  EXPECT_EQ(model.ParameterCount(), 6 * 64 + 64 + 2 * (64 * 64 + 64) + 64 * 2 + 2);
  EXPECT_EQ(model.ParameterCount(), 8898);
}

TEST(BuildTest, NaiveAndMvfHaveComparableSize) {
  const double naive = static_cast<double>(BuildNamed("Naive").ParameterCount());
  const double mvf = static_cast<double>(BuildNamed("MVF").ParameterCount());
  EXPECT_LE(std::abs(naive - mvf), 0.25 * std::max(naive, mvf));
}

TEST(BuildTest, WhiteBoxGuessesInRange) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const dynamics::Model model = BuildNamed("W-B", seed);
    const ad::ParamVector p = model.GetParams();
    EXPECT_GE(p.minCoeff(), 0.5);
    EXPECT_LE(p.maxCoeff(), 2.0);
  }
  EXPECT_NE(BuildNamed("W-B", 1).GetParams(), BuildNamed("W-B", 2).GetParams());
}

TEST(BuildTest, DeterministicForSeed) {
  for (const std::string& name : ModelNames()) {
    EXPECT_EQ(BuildNamed(name, 7).GetParams(), BuildNamed(name, 7).GetParams()) << name;
  }
}

TEST(BuildTest, ExplicitWhiteBoxGuessIsUsed) {
  ModelSpec spec;
  spec.name = "W-B";
  spec.white_box = systems::DoublePendulumParams{}.ToWhiteBox();
  const dynamics::Model model = Build(spec);
  const dynamics::Model truth = systems::TrueSystem({});
  EXPECT_EQ(model.GetParams(), truth.GetParams());
}

TEST(NaiveTest, ZeroNetworkGivesZeroAcceleration) {
  dynamics::Model model = BuildNamed("Naive");
  model.SetParams(ad::ParamVector::Zero(model.ParameterCount()));
  EXPECT_EQ(dynamics::ForwardDynamics(model, Eigen::Vector2d(1, 2), Eigen::Vector2d(3, 4),
                                      Eigen::Vector2d(5, 6))
                .norm(),
            0.0);
}

TEST(NaiveTest, EqualsNetworkOnConcatenatedInput) {
  const dynamics::Model model = BuildNamed("Naive", 3);
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd q = Uniform(2, 9, -3, 3, rng);
  const Eigen::MatrixXd qd = Uniform(2, 9, -9, 9, rng);
  const Eigen::MatrixXd u = Uniform(2, 9, -100, 100, rng);
  Eigen::MatrixXd x(6, 9);
  x << q, qd, u;
  EXPECT_EQ(dynamics::ForwardDynamicsBatch(model, q, qd, u), model.naive().net.Forward(x));
}

TEST(NaiveTest, MvfWithIdentityMassAndFlatPotentialMatchesNaive) {
  dynamics::Model mvf = BuildNamed("MVF", 4);
  auto& d = mvf.dyn();
  auto& mass = std::get<dynamics::LearnedCholeskyMass>(d.mass()).net;
  auto& potential = std::get<dynamics::LearnedPotential>(d.potential()).net;
  for (ad::Mlp* net : {&mass, &potential}) {
    for (int l = 0; l < net->num_layers(); ++l) {
      net->weight(l).setZero();
      net->bias(l).setZero();
    }
  }
  const dynamics::Model naive =
      dynamics::NaiveModel{std::get<dynamics::GenericForce>(d.force()).net, 2, 2};
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd q = Uniform(2, 100, -3, 3, rng);
  const Eigen::MatrixXd qd = Uniform(2, 100, -9, 9, rng);
  const Eigen::MatrixXd u = Uniform(2, 100, -100, 100, rng);
  EXPECT_LT((dynamics::ForwardDynamicsBatch(mvf, q, qd, u) -
             dynamics::ForwardDynamicsBatch(naive, q, qd, u))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(CheckpointTest, RoundTripIsBitExact) {
  TempDir dir;
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd q = Uniform(2, 16, -3, 3, rng);
  const Eigen::MatrixXd qd = Uniform(2, 16, -9, 9, rng);
  const Eigen::MatrixXd u = Uniform(2, 16, -100, 100, rng);
  for (const std::string& name : ModelNames()) {
    const dynamics::Model model = BuildNamed(name, 11);
    const std::string path = dir.File(name + ".ckpt");
    SaveCheckpoint(path, name, model);
    const Checkpoint loaded = LoadCheckpoint(path);
    EXPECT_EQ(loaded.name, name);
    EXPECT_FALSE(loaded.optimizer.has_value());
    EXPECT_EQ(loaded.model.GetParams(), model.GetParams()) << name;
    EXPECT_EQ(dynamics::ForwardDynamicsBatch(loaded.model, q, qd, u),
              dynamics::ForwardDynamicsBatch(model, q, qd, u))
        << name;
  }
}

TEST(CheckpointTest, CustomArchitectureRoundTrips) {
  TempDir dir;
  ModelSpec spec;
  spec.name = "MVB";
  spec.component_hidden = {7, 5};
  spec.delta = 0.25;
  const dynamics::Model model = Build(spec);
  SaveCheckpoint(dir.File("m.ckpt"), "MVB", model);
  const Checkpoint loaded = LoadCheckpoint(dir.File("m.ckpt"));
  EXPECT_EQ(std::get<dynamics::LearnedCholeskyMass>(loaded.model.dyn().mass()).delta, 0.25);
  EXPECT_EQ(loaded.model.GetParams(), model.GetParams());
}

TEST(CheckpointTest, OptimizerStateRoundTrips) {
  TempDir dir;
  const dynamics::Model model = BuildNamed("B");
  ad::AdamConfig config;
  config.learning_rate = 0.002;
  ad::AdamState state = ad::AdamState::Zero(model.ParameterCount(), config);
  state.step = 17;
  state.first_moment.setRandom();
  state.second_moment.setRandom();
  SaveCheckpoint(dir.File("b.ckpt"), "B", model, &state);
  const Checkpoint loaded = LoadCheckpoint(dir.File("b.ckpt"));
  ASSERT_TRUE(loaded.optimizer.has_value());
  EXPECT_EQ(loaded.optimizer->step, 17);
  EXPECT_EQ(loaded.optimizer->config.learning_rate, 0.002);
  EXPECT_EQ(loaded.optimizer->first_moment, state.first_moment);
  EXPECT_EQ(loaded.optimizer->second_moment, state.second_moment);

  ad::AdamState wrong = ad::AdamState::Zero(3, config);
  EXPECT_THROW(SaveCheckpoint(dir.File("x.ckpt"), "B", model, &wrong), ShapeError);
}

TEST(CheckpointTest, DatasetFileIsRejected) {
  TempDir dir;
  systems::SamplingSpec spec;
  spec.count = 4;
  training::SaveDataset(systems::SampleTransitions(systems::TrueSystem({}), spec),
                        dir.File("d.gbds"));
  EXPECT_THROW(LoadCheckpoint(dir.File("d.gbds")), FormatError);
}

TEST(CheckpointTest, CorruptFilesAreRejected) {
  TempDir dir;
  const dynamics::Model model = BuildNamed("MV");
  SaveCheckpoint(dir.File("ok.ckpt"), "MV", model);
  std::string bytes;
  {
    std::ifstream in(dir.File("ok.ckpt"), std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(dir.File(name), std::ios::binary);
    out << content;
    return dir.File(name);
  };
  EXPECT_THROW(LoadCheckpoint(write("short.ckpt", bytes.substr(0, bytes.size() - 3))),
               FormatError);
  EXPECT_THROW(LoadCheckpoint(write("long.ckpt", bytes + "x")), FormatError);
  std::string version = bytes;
  version[6] = 9;
  EXPECT_THROW(LoadCheckpoint(write("version.ckpt", version)), FormatError);
  EXPECT_THROW(LoadCheckpoint(dir.File("missing.ckpt")), Error);
}

}  // namespace
}  // namespace gbdyn::modelzoo
