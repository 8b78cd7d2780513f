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


#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.h"
#include "gbdyn/error.h"
#include "run_config.h"

namespace {

constexpr int kConfigFailure = 2;
constexpr int kNumericFailure = 3;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> epochs;
  std::optional<std::string> model;
};

void ApplyOverrides(const std::string& command, const Flags& flags,
                    gbdyn::cli::RunConfig& config) {
  if (flags.seed) config.Override("seed", std::to_string(*flags.seed));
  if (flags.out) config.Override("out", *flags.out);
  if (flags.epochs) {
    if (command != "train" && command != "sweep") {
      throw gbdyn::ConfigError("--epochs applies to train and sweep only");
    }
    config.Override("train.epochs", std::to_string(*flags.epochs));
  }
  if (flags.model) {
    if (command == "train") {
      config.Override("model.name", *flags.model);
    } else if (command == "sweep" || command == "mbrl") {
      config.Override(command + ".models", *flags.model);
    } else {
      throw gbdyn::ConfigError("--model does not apply to " + command);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gray-box Lagrangian dynamics learning experiments"};
  app.require_subcommand(1);
  Flags flags;
  for (const std::string& name : gbdyn::cli::CommandNames()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config, "INI configuration file")->required();
    sub->add_option("--seed", flags.seed, "Global seed");
    sub->add_option("--out", flags.out, "Output directory, must not exist");
    sub->add_option("--epochs", flags.epochs, "Training epochs")->check(CLI::NonNegativeNumber);
    sub->add_option("--model", flags.model, "Model name, or a comma list for sweep and mbrl");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigFailure;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    gbdyn::cli::RunConfig config = gbdyn::cli::RunConfig::Load(flags.config);
    ApplyOverrides(command, flags, config);
    gbdyn::cli::RunCommand(command, config);
  } catch (const gbdyn::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const gbdyn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const gbdyn::FormatError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
