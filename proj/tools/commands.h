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


#ifndef GBDYN_TOOLS_COMMANDS_H_
#define GBDYN_TOOLS_COMMANDS_H_

#include <string>
#include <vector>

#include "run_config.h"

namespace gbdyn::cli {

const std::vector<std::string>& CommandNames();

// Runs one command to completion. Library errors propagate unchanged.
void RunCommand(const std::string& command, const RunConfig& config);

}  // namespace gbdyn::cli

#endif  // GBDYN_TOOLS_COMMANDS_H_
