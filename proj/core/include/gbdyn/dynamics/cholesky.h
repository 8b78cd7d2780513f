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

#ifndef GBDYN_DYNAMICS_CHOLESKY_H_
#define GBDYN_DYNAMICS_CHOLESKY_H_

#include <Eigen/Core>

#include "gbdyn/ad/tape.h"

namespace gbdyn::dynamics {

// Number of free entries of an N x N lower-triangular factor.
constexpr int PackedTriangleSize(int n) { return (n * n + n) / 2; }

// Builds the lower-triangular factor from a packed vector of length
// (N^2+N)/2: the first N entries plus `delta` form the diagonal and the rest
// fill the strict lower triangle row by row ((1,0), (2,0), (2,1), ...).
// Throws ShapeError when the length does not match N.
Eigen::MatrixXd AssembleCholesky(const Eigen::VectorXd& raw, int n, double delta);

// Batched form on a tape. `raw` is (N^2+N)/2 x batch; the result stores each
// factor row-major in N*N rows.
ad::Var AssembleCholesky(ad::Var raw, int n, double delta);

}  // namespace gbdyn::dynamics

#endif  // GBDYN_DYNAMICS_CHOLESKY_H_
