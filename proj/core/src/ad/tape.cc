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

#include "gbdyn/ad/tape.h"

#include <string>

#include "gbdyn/error.h"

namespace gbdyn::ad {

double Var::scalar() const {
  const Matrix& v = value();
  if (v.rows() != 1 || v.cols() != 1) {
    throw ShapeError("scalar() on a " + std::to_string(v.rows()) + "x" +
                     std::to_string(v.cols()) + " node");
  }
  return v(0, 0);
}

Var Tape::Variable(Matrix value) {
  return Record(std::move(value), true, nullptr, "variable");
}

Var Tape::Constant(Matrix value) {
  return Record(std::move(value), false, nullptr, "constant");
}

Var Tape::Record(Matrix value, bool requires_grad, BackwardFn backward,
                 const char* op) {
  if (!value.allFinite()) {
    throw NumericError(std::string("non-finite value produced by '") + op +
                       "'");
  }
  Node& node = nodes_.emplace_back();
  node.value = std::move(value);
  node.requires_grad = requires_grad;
  node.op = op;
  if (requires_grad) node.backward = std::move(backward);
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

bool Tape::AnyRequiresGrad(std::initializer_list<Var> vars) const {
  for (const Var& v : vars) {
    if (nodes_[v.id()].requires_grad) return true;
  }
  return false;
}

void Tape::Backward(Var output) {
  if (output.rows() != 1 || output.cols() != 1) {
    throw ShapeError("Backward(output) requires a 1x1 output");
  }
  Backward(output, Matrix::Ones(1, 1));
}

void Tape::Backward(Var output, const Matrix& seed) {
  if (seed.rows() != output.rows() || seed.cols() != output.cols()) {
    throw ShapeError("backward seed shape does not match output");
  }
  Accumulate(output.id(), seed);
  for (int id = output.id(); id >= 0; --id) {
    Node& node = nodes_[id];
    if (!node.has_grad || !node.backward) continue;
    node.backward(*this, node.value, node.grad);
  }
}

Matrix Tape::Grad(Var v) const {
  const Node& node = nodes_[v.id()];
  if (!node.has_grad) return Matrix::Zero(node.value.rows(), node.value.cols());
  return node.grad;
}

void Tape::ZeroGrad() {
  for (Node& node : nodes_) {
    node.has_grad = false;
    node.grad.resize(0, 0);
  }
}

}  // namespace gbdyn::ad
