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


#include "run_config.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "gbdyn/error.h"

namespace gbdyn::cli {

namespace pt = boost::property_tree;

namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> Split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& text) {
  T value{};
  const std::string s = Trim(text);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
    throw ConfigError("config key '" + key + "' has invalid value '" + text + "'");
  }
  return value;
}

}  // namespace

RunConfig RunConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  RunConfig config = FromString(buffer.str());
  config.base_dir_ = path.parent_path();
  return config;
}

RunConfig RunConfig::FromString(const std::string& text) {
  RunConfig config;
  config.text_ = text;
  std::istringstream in(text);
  try {
    pt::read_ini(in, config.tree_);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return config;
}

void RunConfig::Override(const std::string& key, const std::string& value) {
  tree_.put(key, value);
  overridden_.push_back(key);
}

bool RunConfig::Has(const std::string& key) const {
  return static_cast<bool>(tree_.get_optional<std::string>(key));
}

std::string RunConfig::Raw(const std::string& key) const {
  return Trim(tree_.get<std::string>(key));
}

std::string RunConfig::GetString(const std::string& key, const std::string& fallback) const {
  const std::string value = Has(key) ? Raw(key) : fallback;
  resolved_.put(key, value);
  return value;
}

std::string RunConfig::RequireString(const std::string& key) const {
  if (!Has(key)) throw ConfigError("config key '" + key + "' is required");
  return GetString(key, "");
}

double RunConfig::GetDouble(const std::string& key, double fallback) const {
  if (!Has(key)) {
    std::ostringstream text;
    text.precision(17);
    text << fallback;
    resolved_.put(key, text.str());
    return fallback;
  }
  resolved_.put(key, Raw(key));
  return ParseNumber<double>(key, Raw(key));
}

std::int64_t RunConfig::GetInt(const std::string& key, std::int64_t fallback) const {
  if (!Has(key)) {
    resolved_.put(key, std::to_string(fallback));
    return fallback;
  }
  resolved_.put(key, Raw(key));
  return ParseNumber<std::int64_t>(key, Raw(key));
}

std::uint64_t RunConfig::GetSeed() const {
  if (!Has("seed")) {
    resolved_.put("seed", "0");
    return 0;
  }
  resolved_.put("seed", Raw("seed"));
  return ParseNumber<std::uint64_t>("seed", Raw("seed"));
}

bool RunConfig::GetBool(const std::string& key, bool fallback) const {
  if (!Has(key)) {
    resolved_.put(key, fallback ? "true" : "false");
    return fallback;
  }
  std::string value = Raw(key);
  std::transform(value.begin(), value.end(), value.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  resolved_.put(key, value);
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "' is not a boolean");
}

std::vector<int> RunConfig::GetIntList(const std::string& key,
                                       const std::vector<int>& fallback) const {
  if (!Has(key)) {
    std::string text;
    for (std::size_t i = 0; i < fallback.size(); ++i) {
      text += (i ? "," : "") + std::to_string(fallback[i]);
    }
    resolved_.put(key, text);
    return fallback;
  }
  resolved_.put(key, Raw(key));
  std::vector<int> out;
  for (const std::string& item : Split(Raw(key))) out.push_back(ParseNumber<int>(key, item));
  return out;
}

std::vector<std::string> RunConfig::GetStringList(
    const std::string& key, const std::vector<std::string>& fallback) const {
  std::vector<std::string> out = fallback;
  if (Has(key)) out = Split(Raw(key));
  std::string text;
  for (std::size_t i = 0; i < out.size(); ++i) text += (i ? "," : "") + out[i];
  resolved_.put(key, text);
  return out;
}

std::filesystem::path RunConfig::GetInputPath(const std::string& key) const {
  return ResolveInput(RequireString(key));
}

std::filesystem::path RunConfig::ResolveInput(const std::filesystem::path& raw) const {
  const std::filesystem::path path = raw.is_absolute() ? raw : base_dir_ / raw;
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError("input file " + path.string() + " does not exist");
  }
  return path;
}

std::filesystem::path RunConfig::OutputPath() const {
  if (!Has("out")) throw ConfigError("an output directory is required");
  const std::filesystem::path raw = Raw("out");
  const bool from_command_line =
      std::find(overridden_.begin(), overridden_.end(), "out") != overridden_.end();
  if (raw.is_absolute() || from_command_line) return raw;
  return base_dir_ / raw;
}

void RunConfig::CheckAllRead() const {
  for (const auto& [name, node] : tree_) {
    if (node.empty()) {
      if (name != "out" && !resolved_.get_child_optional(name)) {
        throw ConfigError("unknown config key '" + name + "'");
      }
      continue;
    }
    for (const auto& [key, unused] : node) {
      const std::string full = name + "." + key;
      if (!resolved_.get_child_optional(full)) {
        throw ConfigError("unknown config key '" + full + "'");
      }
    }
  }
}

void RunConfig::WriteResolved(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  pt::write_ini(out, resolved_);
}

}  // namespace gbdyn::cli
