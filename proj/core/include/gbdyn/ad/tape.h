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

#ifndef GBDYN_AD_TAPE_H_
#define GBDYN_AD_TAPE_H_

#include <deque>
#include <functional>
#include <initializer_list>

#include <Eigen/Core>

namespace gbdyn::ad {

using Matrix = Eigen::MatrixXd;

class Tape;

// Handle to a node recorded on a Tape. Batched quantities store one sample
// per column. Handles are cheap to copy and stay valid while the tape lives.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  // Value of a 1x1 node.
  double scalar() const;

  Tape& tape() const { return *tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  Tape* tape_ = nullptr;
  int id_ = -1;
};

// Reverse-mode recording of matrix-valued operations.
//
// Every node owns its value; operations append nodes and register a closure
// that maps the node's output adjoint to adjoints of its parents. Because
// closures are themselves written in terms of differentiable values, a
// forward-mode tangent built from recorded operations (for example an input
// Jacobian of a network) is differentiated like any other node.
class Tape {
 public:
  // Receives the node's own value and its accumulated adjoint.
  using BackwardFn =
      std::function<void(Tape& tape, const Matrix& value, const Matrix& grad)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // A leaf that receives a gradient.
  Var Variable(Matrix value);
  // A leaf excluded from differentiation.
  Var Constant(Matrix value);

  // Appends an operation result. Throws NumericError naming `op` when the
  // value contains NaN or Inf. The closure is dropped when no gradient flows.
  Var Record(Matrix value, bool requires_grad, BackwardFn backward,
             const char* op);

  bool RequiresGrad(Var v) const { return nodes_[v.id()].requires_grad; }
  bool AnyRequiresGrad(std::initializer_list<Var> vars) const;

  // Seeds a 1x1 output with 1 and propagates adjoints to every leaf.
  void Backward(Var output);
  void Backward(Var output, const Matrix& seed);

  // Accumulated adjoint; zeros when nothing reached the node.
  Matrix Grad(Var v) const;
  void ZeroGrad();

  template <typename Derived>
  void Accumulate(int id, const Eigen::MatrixBase<Derived>& g) {
    Node& node = nodes_[id];
    if (!node.requires_grad) return;
    if (node.has_grad) {
      node.grad += g;
    } else {
      node.grad = g;
      node.has_grad = true;
    }
  }

  const Matrix& value(int id) const { return nodes_[id].value; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    BackwardFn backward;
    const char* op = "";
    bool requires_grad = false;
    bool has_grad = false;
  };

  std::deque<Node> nodes_;
};

inline const Matrix& Var::value() const { return tape_->value(id_); }

}  // namespace gbdyn::ad

#endif  // GBDYN_AD_TAPE_H_
