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

#ifndef GBDYN_AD_PARAMS_H_
#define GBDYN_AD_PARAMS_H_

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace gbdyn::ad {

// Flat list of every trainable scalar of a model.
using ParamVector = Eigen::VectorXd;

// Mutable view of one named, column-major parameter block owned by a model.
struct ParamRef {
  ParamRef(std::string name, Eigen::MatrixXd& m)
      : name(std::move(name)), data(m.data()), rows(m.rows()), cols(m.cols()) {}
  ParamRef(std::string name, Eigen::VectorXd& v)
      : name(std::move(name)), data(v.data()), rows(v.size()), cols(1) {}
  ParamRef(std::string name, double& x)
      : name(std::move(name)), data(&x), rows(1), cols(1) {}

  Eigen::Index size() const { return rows * cols; }
  Eigen::Map<Eigen::MatrixXd> matrix() const { return {data, rows, cols}; }

  std::string name;
  double* data;
  Eigen::Index rows;
  Eigen::Index cols;
};

struct ParamEntry {
  std::string name;
  Eigen::Index offset = 0;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

// Maps offsets of a ParamVector back to named blocks. Blocks are laid out in
// registration order, each block column-major.
class ParamLayout {
 public:
  ParamLayout() = default;
  explicit ParamLayout(const std::vector<ParamRef>& refs);

  void Add(std::string name, Eigen::Index rows, Eigen::Index cols);

  const std::vector<ParamEntry>& entries() const { return entries_; }
  Eigen::Index size() const { return size_; }
  // Throws ConfigError for unknown names.
  const ParamEntry& Find(std::string_view name) const;
  // Name of the block holding flat index i, with the in-block position.
  std::string Describe(Eigen::Index i) const;

 private:
  std::vector<ParamEntry> entries_;
  Eigen::Index size_ = 0;
};

ParamVector Flatten(const std::vector<ParamRef>& refs);
// Throws ShapeError if the vector length does not match the blocks.
void Unflatten(const ParamVector& flat, const std::vector<ParamRef>& refs);

}  // namespace gbdyn::ad

#endif  // GBDYN_AD_PARAMS_H_
