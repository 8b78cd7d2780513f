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

#include "gbdyn/ad/params.h"

#include <string>

#include "gbdyn/error.h"

namespace gbdyn::ad {

ParamLayout::ParamLayout(const std::vector<ParamRef>& refs) {
  for (const ParamRef& ref : refs) {
    Add(ref.name, ref.rows, ref.cols);
  }
}

void ParamLayout::Add(std::string name, Eigen::Index rows, Eigen::Index cols) {
  entries_.push_back({std::move(name), size_, rows, cols});
  size_ += rows * cols;
}

const ParamEntry& ParamLayout::Find(std::string_view name) const {
  for (const ParamEntry& e : entries_) {
    if (e.name == name) return e;
  }
  throw ConfigError("no parameter block named '" + std::string(name) + "'");
}

std::string ParamLayout::Describe(Eigen::Index i) const {
  for (const ParamEntry& e : entries_) {
    if (i >= e.offset && i < e.offset + e.rows * e.cols) {
      const Eigen::Index local = i - e.offset;
      return e.name + "(" + std::to_string(local % e.rows) + "," +
             std::to_string(local / e.rows) + ")";
    }
  }
  return "index " + std::to_string(i);
}

ParamVector Flatten(const std::vector<ParamRef>& refs) {
  Eigen::Index total = 0;
  for (const ParamRef& ref : refs) total += ref.size();
  ParamVector flat(total);
  Eigen::Index offset = 0;
  for (const ParamRef& ref : refs) {
    flat.segment(offset, ref.size()) =
        Eigen::Map<const Eigen::VectorXd>(ref.data, ref.size());
    offset += ref.size();
  }
  return flat;
}

void Unflatten(const ParamVector& flat, const std::vector<ParamRef>& refs) {
  Eigen::Index total = 0;
  for (const ParamRef& ref : refs) total += ref.size();
  if (flat.size() != total) {
    throw ShapeError("parameter vector has " + std::to_string(flat.size()) +
                     " entries, model expects " + std::to_string(total));
  }
  Eigen::Index offset = 0;
  for (const ParamRef& ref : refs) {
    Eigen::Map<Eigen::VectorXd>(ref.data, ref.size()) =
        flat.segment(offset, ref.size());
    offset += ref.size();
  }
}

}  // namespace gbdyn::ad
