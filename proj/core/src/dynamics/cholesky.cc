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

#include "gbdyn/dynamics/cholesky.h"

#include <string>
#include <vector>

#include "gbdyn/ad/ops.h"
#include "gbdyn/error.h"

namespace gbdyn::dynamics {
namespace {

// Index into the packed vector of the strict-lower entry (i, j), i > j.
int OffDiagonalIndex(int n, int i, int j) { return n + i * (i - 1) / 2 + j; }

void CheckLength(Eigen::Index length, int n) {
  if (n < 1 || length != PackedTriangleSize(n)) {
    throw ShapeError("Cholesky packing for N=" + std::to_string(n) + " needs " +
                     std::to_string(PackedTriangleSize(n)) + " entries, got " +
                     std::to_string(length));
  }
}

}  // namespace

Eigen::MatrixXd AssembleCholesky(const Eigen::VectorXd& raw, int n, double delta) {
  CheckLength(raw.size(), n);
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    lower(i, i) = raw[i] + delta;
    for (int j = 0; j < i; ++j) lower(i, j) = raw[OffDiagonalIndex(n, i, j)];
  }
  return lower;
}

ad::Var AssembleCholesky(ad::Var raw, int n, double delta) {
  CheckLength(raw.rows(), n);
  ad::Var zero = raw.tape().Constant(ad::Matrix::Zero(1, raw.cols()));
  std::vector<ad::Var> rows;
  rows.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        rows.push_back(delta != 0.0 ? ad::Rows(raw, i, 1) + delta : ad::Rows(raw, i, 1));
      } else if (i > j) {
        rows.push_back(ad::Rows(raw, OffDiagonalIndex(n, i, j), 1));
      } else {
        rows.push_back(zero);
      }
    }
  }
  return ad::VStack(rows);
}

}  // namespace gbdyn::dynamics
