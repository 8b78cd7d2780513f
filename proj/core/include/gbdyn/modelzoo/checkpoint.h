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

#ifndef GBDYN_MODELZOO_CHECKPOINT_H_
#define GBDYN_MODELZOO_CHECKPOINT_H_

#include <optional>
#include <string>

#include "gbdyn/ad/adam.h"
#include "gbdyn/dynamics/dyn_model.h"

namespace gbdyn::modelzoo {

struct Checkpoint {
  std::string name;
  dynamics::Model model;
  // Present when training state was saved alongside the parameters.
  std::optional<ad::AdamState> optimizer;
};

// "GBDYN1" file: header, text structure descriptor, then the flat parameter
// vector (and optionally the optimizer moments) as little-endian doubles.
void SaveCheckpoint(const std::string& path, const std::string& name,
                    const dynamics::Model& model,
                    const ad::AdamState* optimizer = nullptr);
// Throws FormatError for a foreign, corrupt or version-mismatched file.
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace gbdyn::modelzoo

#endif  // GBDYN_MODELZOO_CHECKPOINT_H_
