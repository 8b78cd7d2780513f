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

#ifndef GBDYN_AD_OPS_H_
#define GBDYN_AD_OPS_H_

#include <vector>

#include "gbdyn/ad/tape.h"

// Differentiable primitives over Tape nodes.
//
// Elementwise binary operations broadcast a dimension of extent 1 against any
// extent, so a 1x1 parameter scales a whole batch and an r x 1 bias is added
// to every column. Batched small-matrix operations store an n x m matrix per
// column in row-major order (entry (i, j) at row i * m + j).
namespace gbdyn::ad {

Var operator+(Var a, Var b);
Var operator-(Var a, Var b);
Var operator*(Var a, Var b);  // elementwise
Var operator-(Var a);
Var operator+(Var a, double s);
Var operator+(double s, Var a);
Var operator-(Var a, double s);
Var operator-(double s, Var a);
Var operator*(Var a, double s);
Var operator*(double s, Var a);

Var MatMul(Var a, Var b);
// weight * x + bias, bias broadcast over columns.
Var Affine(Var weight, Var x, Var bias);

Var Tanh(Var x);
// 1 - y^2, the tanh derivative expressed through its output.
Var OneMinusSquare(Var y);
Var Sin(Var x);
Var Cos(Var x);
Var Square(Var x);

// Sum of all entries (1x1).
Var Sum(Var x);
Var Mean(Var x);
// Per-column sum over rows (1 x cols).
Var ColSum(Var x);

Var Rows(Var x, Eigen::Index start, Eigen::Index count);
Var Cols(Var x, Eigen::Index start, Eigen::Index count);
Var VStack(const std::vector<Var>& parts);

// Per-column product of an n x k matrix and a k x m matrix.
Var BatchedMatMul(Var a, Var b, int n, int k, int m);
// Per-column transpose of an n x m matrix.
Var BatchedTranspose(Var a, int n, int m);
// Per-column solve of M x = rhs with M symmetric positive definite (n x n)
// and rhs n x 1. A column whose Cholesky factorization fails is retried once
// with 1e-9 added to the diagonal; a second failure throws NumericError.
Var BatchedSpdSolve(Var mass, Var rhs, int n);

}  // namespace gbdyn::ad

#endif  // GBDYN_AD_OPS_H_
