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

#ifndef GBDYN_TRAINING_DATASET_H_
#define GBDYN_TRAINING_DATASET_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace gbdyn::training {

enum class Provenance : std::uint32_t { kIid = 0, kTrajectory = 1 };

// Transitions (q, qdot, u) -> (q', qdot'), one per column.
struct TransitionDataset {
  int dof = 0;
  int inputs = 0;
  double dt = 0.0;
  Provenance provenance = Provenance::kIid;
  Eigen::MatrixXd q;
  Eigen::MatrixXd qdot;
  Eigen::MatrixXd u;
  Eigen::MatrixXd q_next;
  Eigen::MatrixXd qdot_next;

  static TransitionDataset Empty(int dof, int inputs, double dt, Provenance provenance);

  Eigen::Index size() const { return q.cols(); }
  // Throws ShapeError when dimensions disagree.
  void Validate() const;
  // Appends every transition of `other`; dimensions and dt must agree. A mix
  // of sources is tagged as trajectory data.
  void Append(const TransitionDataset& other);
  TransitionDataset Slice(Eigen::Index start, Eigen::Index count) const;
  TransitionDataset Select(const std::vector<Eigen::Index>& columns) const;
};

// "GBDS1" file; throws FormatError on malformed input and Error on I/O failure.
void SaveDataset(const TransitionDataset& data, const std::string& path);
TransitionDataset LoadDataset(const std::string& path);

}  // namespace gbdyn::training

#endif  // GBDYN_TRAINING_DATASET_H_
