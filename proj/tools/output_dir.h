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


#ifndef GBDYN_TOOLS_OUTPUT_DIR_H_
#define GBDYN_TOOLS_OUTPUT_DIR_H_

#include <filesystem>
#include <string>

namespace gbdyn::cli {

// Files are written into a hidden staging directory beside the target and
// renamed into place by Commit. An uncommitted directory is removed.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path target);
  ~OutputDir();

  OutputDir(const OutputDir&) = delete;
  OutputDir& operator=(const OutputDir&) = delete;

  std::filesystem::path File(const std::string& name) const { return staging_ / name; }
  void WriteText(const std::string& name, const std::string& text) const;
  void Commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path staging_;
  bool committed_ = false;
};

}  // namespace gbdyn::cli

#endif  // GBDYN_TOOLS_OUTPUT_DIR_H_
