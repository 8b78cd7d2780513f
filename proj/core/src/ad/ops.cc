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

#include "gbdyn/ad/ops.h"

#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "gbdyn/error.h"

namespace gbdyn::ad {
namespace {

using Index = Eigen::Index;
using RowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Index BroadcastDim(Index a, Index b, const char* op) {
  if (a == b || b == 1) return a;
  if (a == 1) return b;
  throw ShapeError(std::string("incompatible shapes for '") + op + "': " +
                   std::to_string(a) + " vs " + std::to_string(b));
}

Matrix Expand(const Matrix& m, Index rows, Index cols) {
  if (m.rows() == rows && m.cols() == cols) return m;
  return m.replicate(rows / m.rows(), cols / m.cols());
}

// Sums an adjoint over the dimensions that were broadcast.
void AccumulateReduced(Tape& tape, int id, const Matrix& g) {
  const Matrix& v = tape.value(id);
  const bool rows_match = v.rows() == g.rows();
  const bool cols_match = v.cols() == g.cols();
  if (rows_match && cols_match) {
    tape.Accumulate(id, g);
  } else if (!rows_match && !cols_match) {
    tape.Accumulate(id, Matrix::Constant(1, 1, g.sum()));
  } else if (!rows_match) {
    tape.Accumulate(id, g.colwise().sum());
  } else {
    tape.Accumulate(id, g.rowwise().sum());
  }
}

template <typename ValueFn>
Matrix Broadcast(const Var& a, const Var& b, const char* op, ValueFn&& fn) {
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.rows() == bv.rows() && av.cols() == bv.cols()) return fn(av, bv);
  const Index rows = BroadcastDim(av.rows(), bv.rows(), op);
  const Index cols = BroadcastDim(av.cols(), bv.cols(), op);
  return fn(Expand(av, rows, cols), Expand(bv, rows, cols));
}

void CheckSameTape(const Var& a, const Var& b) {
  if (&a.tape() != &b.tape()) throw ShapeError("operands live on different tapes");
}

}  // namespace

Var operator+(Var a, Var b) {
  CheckSameTape(a, b);
  Tape& t = a.tape();
  Matrix v = Broadcast(a, b, "add",
                       [](const Matrix& x, const Matrix& y) -> Matrix { return x + y; });
  const int ia = a.id(), ib = b.id();
  return t.Record(std::move(v), t.AnyRequiresGrad({a, b}),
                  [ia, ib](Tape& tape, const Matrix&, const Matrix& g) {
                    AccumulateReduced(tape, ia, g);
                    AccumulateReduced(tape, ib, g);
                  },
                  "add");
}

Var operator-(Var a, Var b) {
  CheckSameTape(a, b);
  Tape& t = a.tape();
  Matrix v = Broadcast(a, b, "sub",
                       [](const Matrix& x, const Matrix& y) -> Matrix { return x - y; });
  const int ia = a.id(), ib = b.id();
  return t.Record(std::move(v), t.AnyRequiresGrad({a, b}),
                  [ia, ib](Tape& tape, const Matrix&, const Matrix& g) {
                    AccumulateReduced(tape, ia, g);
                    AccumulateReduced(tape, ib, -g);
                  },
                  "sub");
}

Var operator*(Var a, Var b) {
  CheckSameTape(a, b);
  Tape& t = a.tape();
  Matrix v = Broadcast(a, b, "mul", [](const Matrix& x, const Matrix& y) -> Matrix {
    return x.cwiseProduct(y);
  });
  const int ia = a.id(), ib = b.id();
  return t.Record(
      std::move(v), t.AnyRequiresGrad({a, b}),
      [ia, ib](Tape& tape, const Matrix&, const Matrix& g) {
        const Matrix& av = tape.value(ia);
        const Matrix& bv = tape.value(ib);
        const Index rows = g.rows(), cols = g.cols();
        AccumulateReduced(tape, ia, g.cwiseProduct(Expand(bv, rows, cols)));
        AccumulateReduced(tape, ib, g.cwiseProduct(Expand(av, rows, cols)));
      },
      "mul");
}

Var operator-(Var a) { return a * -1.0; }

Var operator+(Var a, double s) {
  Tape& t = a.tape();
  const int ia = a.id();
  return t.Record(a.value().array() + s, t.RequiresGrad(a),
                  [ia](Tape& tape, const Matrix&, const Matrix& g) {
                    tape.Accumulate(ia, g);
                  },
                  "add_scalar");
}

Var operator+(double s, Var a) { return a + s; }
Var operator-(Var a, double s) { return a + (-s); }
Var operator-(double s, Var a) { return (a * -1.0) + s; }

Var operator*(Var a, double s) {
  Tape& t = a.tape();
  const int ia = a.id();
  return t.Record(a.value() * s, t.RequiresGrad(a),
                  [ia, s](Tape& tape, const Matrix&, const Matrix& g) {
                    tape.Accumulate(ia, g * s);
                  },
                  "scale");
}

Var operator*(double s, Var a) { return a * s; }

Var MatMul(Var a, Var b) {
  CheckSameTape(a, b);
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul inner dimensions differ: " +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()));
  }
  Tape& t = a.tape();
  const int ia = a.id(), ib = b.id();
  return t.Record(a.value() * b.value(), t.AnyRequiresGrad({a, b}),
                  [ia, ib](Tape& tape, const Matrix&, const Matrix& g) {
                    if (tape.RequiresGrad(Var(&tape, ia))) {
                      tape.Accumulate(ia, g * tape.value(ib).transpose());
                    }
                    if (tape.RequiresGrad(Var(&tape, ib))) {
                      tape.Accumulate(ib, tape.value(ia).transpose() * g);
                    }
                  },
                  "matmul");
}

Var Affine(Var weight, Var x, Var bias) {
  CheckSameTape(weight, x);
  CheckSameTape(weight, bias);
  if (weight.cols() != x.rows() || bias.rows() != weight.rows() ||
      bias.cols() != 1) {
    throw ShapeError("affine shape mismatch: weight " +
                     std::to_string(weight.rows()) + "x" +
                     std::to_string(weight.cols()) + ", input rows " +
                     std::to_string(x.rows()));
  }
  Tape& t = weight.tape();
  Matrix v = weight.value() * x.value();
  v.colwise() += bias.value().col(0);
  const int iw = weight.id(), ix = x.id(), ib = bias.id();
  return t.Record(
      std::move(v), t.AnyRequiresGrad({weight, x, bias}),
      [iw, ix, ib](Tape& tape, const Matrix&, const Matrix& g) {
        if (tape.RequiresGrad(Var(&tape, iw))) {
          tape.Accumulate(iw, g * tape.value(ix).transpose());
        }
        if (tape.RequiresGrad(Var(&tape, ix))) {
          tape.Accumulate(ix, tape.value(iw).transpose() * g);
        }
        tape.Accumulate(ib, g.rowwise().sum());
      },
      "affine");
}

Var Tanh(Var x) {
  Tape& t = x.tape();
  const int ix = x.id();
  return t.Record(x.value().array().tanh().matrix(), t.RequiresGrad(x),
                  [ix](Tape& tape, const Matrix& y, const Matrix& g) {
                    tape.Accumulate(
                        ix, (g.array() * (1.0 - y.array().square())).matrix());
                  },
                  "tanh");
}

Var OneMinusSquare(Var y) {
  Tape& t = y.tape();
  const int iy = y.id();
  return t.Record((1.0 - y.value().array().square()).matrix(), t.RequiresGrad(y),
                  [iy](Tape& tape, const Matrix&, const Matrix& g) {
                    tape.Accumulate(
                        iy, (-2.0 * g.array() * tape.value(iy).array()).matrix());
                  },
                  "one_minus_square");
}

Var Sin(Var x) {
  Tape& t = x.tape();
  const int ix = x.id();
  return t.Record(x.value().array().sin().matrix(), t.RequiresGrad(x),
                  [ix](Tape& tape, const Matrix&, const Matrix& g) {
                    tape.Accumulate(
                        ix, (g.array() * tape.value(ix).array().cos()).matrix());
                  },
                  "sin");
}

Var Cos(Var x) {
  Tape& t = x.tape();
  const int ix = x.id();
  return t.Record(x.value().array().cos().matrix(), t.RequiresGrad(x),
                  [ix](Tape& tape, const Matrix&, const Matrix& g) {
                    tape.Accumulate(
                        ix, (-g.array() * tape.value(ix).array().sin()).matrix());
                  },
                  "cos");
}

Var Square(Var x) {
  Tape& t = x.tape();
  const int ix = x.id();
  return t.Record(x.value().array().square().matrix(), t.RequiresGrad(x),
                  [ix](Tape& tape, const Matrix&, const Matrix& g) {
                    tape.Accumulate(
                        ix, (2.0 * g.array() * tape.value(ix).array()).matrix());
                  },
                  "square");
}

Var Sum(Var x) {
  Tape& t = x.tape();
  const int ix = x.id();
  const Index rows = x.rows(), cols = x.cols();
  return t.Record(Matrix::Constant(1, 1, x.value().sum()), t.RequiresGrad(x),
                  [ix, rows, cols](Tape& tape, const Matrix&, const Matrix& g) {
                    tape.Accumulate(ix, Matrix::Constant(rows, cols, g(0, 0)));
                  },
                  "sum");
}

Var Mean(Var x) {
  const double n = static_cast<double>(x.value().size());
  return Sum(x) * (1.0 / n);
}

Var ColSum(Var x) {
  Tape& t = x.tape();
  const int ix = x.id();
  const Index rows = x.rows();
  return t.Record(x.value().colwise().sum(), t.RequiresGrad(x),
                  [ix, rows](Tape& tape, const Matrix&, const Matrix& g) {
                    tape.Accumulate(ix, g.replicate(rows, 1));
                  },
                  "colsum");
}

Var Rows(Var x, Index start, Index count) {
  if (start < 0 || count < 0 || start + count > x.rows()) {
    throw ShapeError("row slice out of range");
  }
  Tape& t = x.tape();
  const int ix = x.id();
  return t.Record(x.value().middleRows(start, count), t.RequiresGrad(x),
                  [ix, start, count](Tape& tape, const Matrix&, const Matrix& g) {
                    const Matrix& xv = tape.value(ix);
                    Matrix full = Matrix::Zero(xv.rows(), xv.cols());
                    full.middleRows(start, count) = g;
                    tape.Accumulate(ix, full);
                  },
                  "rows");
}

Var Cols(Var x, Index start, Index count) {
  if (start < 0 || count < 0 || start + count > x.cols()) {
    throw ShapeError("column slice out of range");
  }
  Tape& t = x.tape();
  const int ix = x.id();
  return t.Record(x.value().middleCols(start, count), t.RequiresGrad(x),
                  [ix, start, count](Tape& tape, const Matrix&, const Matrix& g) {
                    const Matrix& xv = tape.value(ix);
                    Matrix full = Matrix::Zero(xv.rows(), xv.cols());
                    full.middleCols(start, count) = g;
                    tape.Accumulate(ix, full);
                  },
                  "cols");
}

Var VStack(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("vstack of nothing");
  Tape& t = parts.front().tape();
  const Index cols = parts.front().cols();
  Index rows = 0;
  bool requires_grad = false;
  for (const Var& p : parts) {
    CheckSameTape(parts.front(), p);
    if (p.cols() != cols) throw ShapeError("vstack column counts differ");
    rows += p.rows();
    requires_grad = requires_grad || t.RequiresGrad(p);
  }
  Matrix v(rows, cols);
  std::vector<int> ids;
  std::vector<Index> offsets;
  Index offset = 0;
  for (const Var& p : parts) {
    v.middleRows(offset, p.rows()) = p.value();
    ids.push_back(p.id());
    offsets.push_back(offset);
    offset += p.rows();
  }
  return t.Record(std::move(v), requires_grad,
                  [ids, offsets](Tape& tape, const Matrix&, const Matrix& g) {
                    for (std::size_t i = 0; i < ids.size(); ++i) {
                      tape.Accumulate(
                          ids[i], g.middleRows(offsets[i], tape.value(ids[i]).rows()));
                    }
                  },
                  "vstack");
}

Var BatchedMatMul(Var a, Var b, int n, int k, int m) {
  CheckSameTape(a, b);
  if (a.rows() != n * k || b.rows() != k * m || a.cols() != b.cols()) {
    throw ShapeError("batched matmul shape mismatch");
  }
  Tape& t = a.tape();
  const Index batch = a.cols();
  Matrix v(n * m, batch);
  for (Index s = 0; s < batch; ++s) {
    Eigen::Map<const RowMajor> as(a.value().col(s).data(), n, k);
    Eigen::Map<const RowMajor> bs(b.value().col(s).data(), k, m);
    Eigen::Map<RowMajor> cs(v.col(s).data(), n, m);
    cs.noalias() = as * bs;
  }
  const int ia = a.id(), ib = b.id();
  return t.Record(
      std::move(v), t.AnyRequiresGrad({a, b}),
      [ia, ib, n, k, m](Tape& tape, const Matrix&, const Matrix& g) {
        const Matrix& av = tape.value(ia);
        const Matrix& bv = tape.value(ib);
        const bool need_a = tape.RequiresGrad(Var(&tape, ia));
        const bool need_b = tape.RequiresGrad(Var(&tape, ib));
        Matrix ga = need_a ? Matrix(n * k, av.cols()) : Matrix();
        Matrix gb = need_b ? Matrix(k * m, bv.cols()) : Matrix();
        for (Index s = 0; s < g.cols(); ++s) {
          Eigen::Map<const RowMajor> gs(g.col(s).data(), n, m);
          if (need_a) {
            Eigen::Map<const RowMajor> bs(bv.col(s).data(), k, m);
            Eigen::Map<RowMajor>(ga.col(s).data(), n, k).noalias() =
                gs * bs.transpose();
          }
          if (need_b) {
            Eigen::Map<const RowMajor> as(av.col(s).data(), n, k);
            Eigen::Map<RowMajor>(gb.col(s).data(), k, m).noalias() =
                as.transpose() * gs;
          }
        }
        if (need_a) tape.Accumulate(ia, ga);
        if (need_b) tape.Accumulate(ib, gb);
      },
      "batched_matmul");
}

Var BatchedTranspose(Var a, int n, int m) {
  if (a.rows() != n * m) throw ShapeError("batched transpose shape mismatch");
  Tape& t = a.tape();
  Matrix v(n * m, a.cols());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) v.row(j * n + i) = a.value().row(i * m + j);
  }
  const int ia = a.id();
  return t.Record(std::move(v), t.RequiresGrad(a),
                  [ia, n, m](Tape& tape, const Matrix&, const Matrix& g) {
                    Matrix ga(n * m, g.cols());
                    for (int i = 0; i < n; ++i) {
                      for (int j = 0; j < m; ++j) ga.row(i * m + j) = g.row(j * n + i);
                    }
                    tape.Accumulate(ia, ga);
                  },
                  "batched_transpose");
}

namespace {

// Factorizes column s of a batched SPD matrix, regularizing once on failure.
Eigen::LLT<Matrix> FactorColumn(const Matrix& mass, Index s, int n,
                                bool regularize) {
  Matrix ms = Eigen::Map<const RowMajor>(mass.col(s).data(), n, n);
  if (regularize) ms.diagonal().array() += 1e-9;
  return Eigen::LLT<Matrix>(ms);
}

}  // namespace

Var BatchedSpdSolve(Var mass, Var rhs, int n) {
  CheckSameTape(mass, rhs);
  if (mass.rows() != n * n || rhs.rows() != n || mass.cols() != rhs.cols()) {
    throw ShapeError("batched solve shape mismatch");
  }
  Tape& t = mass.tape();
  const Matrix& mv = mass.value();
  const Index batch = mv.cols();
  Matrix v(n, batch);
  std::vector<bool> regularized(batch, false);
  for (Index s = 0; s < batch; ++s) {
    Eigen::LLT<Matrix> llt = FactorColumn(mv, s, n, false);
    if (llt.info() != Eigen::Success) {
      regularized[s] = true;
      llt = FactorColumn(mv, s, n, true);
      if (llt.info() != Eigen::Success) {
        Matrix ms = Eigen::Map<const RowMajor>(mv.col(s).data(), n, n);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(ms, Eigen::EigenvaluesOnly);
        throw NumericError(
            "mass matrix is not positive definite in sample " +
            std::to_string(s) + " (eigenvalues " +
            std::to_string(eig.eigenvalues().minCoeff()) + " .. " +
            std::to_string(eig.eigenvalues().maxCoeff()) + ")");
      }
    }
    v.col(s) = llt.solve(rhs.value().col(s));
  }
  const int im = mass.id(), ir = rhs.id();
  return t.Record(
      std::move(v), t.AnyRequiresGrad({mass, rhs}),
      [im, ir, n, regularized](Tape& tape, const Matrix& x, const Matrix& g) {
        const Matrix& mv = tape.value(im);
        const bool need_m = tape.RequiresGrad(Var(&tape, im));
        Matrix grhs(n, g.cols());
        Matrix gm = need_m ? Matrix(n * n, g.cols()) : Matrix();
        for (Index s = 0; s < g.cols(); ++s) {
          Eigen::LLT<Matrix> llt = FactorColumn(mv, s, n, regularized[s]);
          grhs.col(s) = llt.solve(g.col(s));
          if (need_m) {
            Eigen::Map<RowMajor>(gm.col(s).data(), n, n).noalias() =
                -grhs.col(s) * x.col(s).transpose();
          }
        }
        tape.Accumulate(ir, grhs);
        if (need_m) tape.Accumulate(im, gm);
      },
      "batched_spd_solve");
}

}  // namespace gbdyn::ad
