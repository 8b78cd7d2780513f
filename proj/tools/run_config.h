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


#ifndef GBDYN_TOOLS_RUN_CONFIG_H_
#define GBDYN_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

namespace gbdyn::cli {

// Sectioned key-value configuration. Every value read is recorded so the
// effective configuration, defaults included, can be written back out.
class RunConfig {
 public:
  RunConfig() = default;

  static RunConfig Load(const std::filesystem::path& path);
  static RunConfig FromString(const std::string& text);

  // Replaces a value before any reads, used for command-line overrides.
  void Override(const std::string& key, const std::string& value);

  bool Has(const std::string& key) const;
  std::string GetString(const std::string& key, const std::string& fallback) const;
  std::string RequireString(const std::string& key) const;
  double GetDouble(const std::string& key, double fallback) const;
  std::int64_t GetInt(const std::string& key, std::int64_t fallback) const;
  std::uint64_t GetSeed() const;
  bool GetBool(const std::string& key, bool fallback) const;
  std::vector<int> GetIntList(const std::string& key, const std::vector<int>& fallback) const;
  std::vector<std::string> GetStringList(const std::string& key,
                                         const std::vector<std::string>& fallback) const;

  // Relative paths resolve against the directory holding the config file.
  // Throws ConfigError when the file is missing.
  std::filesystem::path GetInputPath(const std::string& key) const;
  std::filesystem::path ResolveInput(const std::filesystem::path& raw) const;
  // Not recorded in the resolved config, which stays identical across reruns.
  std::filesystem::path OutputPath() const;

  // Throws ConfigError naming the first key no command asked for.
  void CheckAllRead() const;

  const std::string& text() const { return text_; }
  void WriteResolved(const std::filesystem::path& path) const;

 private:
  std::string Raw(const std::string& key) const;

  boost::property_tree::ptree tree_;
  std::filesystem::path base_dir_;
  std::string text_;
  std::vector<std::string> overridden_;
  mutable boost::property_tree::ptree resolved_;
};

}  // namespace gbdyn::cli

#endif  // GBDYN_TOOLS_RUN_CONFIG_H_
