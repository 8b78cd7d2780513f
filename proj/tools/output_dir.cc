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


#include "output_dir.h"

#include <fstream>
#include <system_error>

#include <unistd.h>

#include "gbdyn/error.h"

namespace gbdyn::cli {

namespace fs = std::filesystem;

OutputDir::OutputDir(fs::path target) : target_(std::move(target)) {
  if (target_.empty()) throw ConfigError("output directory is empty");
  if (target_.filename().empty()) target_ = target_.parent_path();
  std::error_code ec;
  if (fs::exists(target_, ec) && !(fs::is_directory(target_) && fs::is_empty(target_))) {
    throw ConfigError("output directory " + target_.string() + " already exists");
  }
  fs::path parent = target_.parent_path();
  if (parent.empty()) parent = ".";
  fs::create_directories(parent, ec);
  if (ec) throw ConfigError("cannot create " + parent.string() + ": " + ec.message());
  staging_ = parent / ("." + target_.filename().string() + ".partial-" +
                       std::to_string(::getpid()));
  fs::remove_all(staging_, ec);
  if (!fs::create_directory(staging_, ec) || ec) {
    throw ConfigError("cannot create " + staging_.string() + ": " + ec.message());
  }
}

OutputDir::~OutputDir() {
  if (committed_) return;
  std::error_code ec;
  fs::remove_all(staging_, ec);
}

void OutputDir::WriteText(const std::string& name, const std::string& text) const {
  std::ofstream out(File(name), std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + File(name).string());
}

void OutputDir::Commit() {
  std::error_code ec;
  if (fs::is_directory(target_, ec)) fs::remove(target_, ec);
  fs::rename(staging_, target_, ec);
  if (ec) throw Error("cannot move output into " + target_.string() + ": " + ec.message());
  committed_ = true;
}

}  // namespace gbdyn::cli
