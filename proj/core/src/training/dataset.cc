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

#include "gbdyn/training/dataset.h"

#include <cmath>
#include <fstream>

#include "gbdyn/error.h"
#include "gbdyn/io/binary.h"

namespace gbdyn::training {
namespace {

constexpr char kMagic[] = "GBDS1";

Eigen::MatrixXd Concat(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

Eigen::MatrixXd Gather(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& columns) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i) out.col(i) = m.col(columns[i]);
  return out;
}

}  // namespace

TransitionDataset TransitionDataset::Empty(int dof, int inputs, double dt,
                                           Provenance provenance) {
  TransitionDataset d;
  d.dof = dof;
  d.inputs = inputs;
  d.dt = dt;
  d.provenance = provenance;
  d.q.resize(dof, 0);
  d.qdot.resize(dof, 0);
  d.u.resize(inputs, 0);
  d.q_next.resize(dof, 0);
  d.qdot_next.resize(dof, 0);
  return d;
}

void TransitionDataset::Validate() const {
  const Eigen::Index n = size();
  if (dof < 1 || inputs < 0) throw ShapeError("dataset needs N >= 1 and M >= 0");
  if (q.rows() != dof || qdot.rows() != dof || q_next.rows() != dof ||
      qdot_next.rows() != dof || u.rows() != inputs) {
    throw ShapeError("dataset rows disagree with N and M");
  }
  if (qdot.cols() != n || u.cols() != n || q_next.cols() != n || qdot_next.cols() != n) {
    throw ShapeError("dataset columns disagree");
  }
  if (!(dt > 0.0)) throw ShapeError("dataset time step must be positive");
}

void TransitionDataset::Append(const TransitionDataset& other) {
  if (other.dof != dof || other.inputs != inputs || other.dt != dt) {
    throw ShapeError("cannot append datasets with different N, M or dt");
  }
  if (other.provenance != provenance && other.size() > 0) provenance = Provenance::kTrajectory;
  q = Concat(q, other.q);
  qdot = Concat(qdot, other.qdot);
  u = Concat(u, other.u);
  q_next = Concat(q_next, other.q_next);
  qdot_next = Concat(qdot_next, other.qdot_next);
}

TransitionDataset TransitionDataset::Slice(Eigen::Index start, Eigen::Index count) const {
  if (start < 0 || count < 0 || start + count > size()) {
    throw ShapeError("dataset slice out of range");
  }
  TransitionDataset d = Empty(dof, inputs, dt, provenance);
  d.q = q.middleCols(start, count);
  d.qdot = qdot.middleCols(start, count);
  d.u = u.middleCols(start, count);
  d.q_next = q_next.middleCols(start, count);
  d.qdot_next = qdot_next.middleCols(start, count);
  return d;
}

TransitionDataset TransitionDataset::Select(const std::vector<Eigen::Index>& columns) const {
  for (Eigen::Index c : columns) {
    if (c < 0 || c >= size()) throw ShapeError("dataset index out of range");
  }
  TransitionDataset d = Empty(dof, inputs, dt, provenance);
  d.q = Gather(q, columns);
  d.qdot = Gather(qdot, columns);
  d.u = Gather(u, columns);
  d.q_next = Gather(q_next, columns);
  d.qdot_next = Gather(qdot_next, columns);
  return d;
}

void SaveDataset(const TransitionDataset& data, const std::string& path) {
  data.Validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  io::WriteBytes(out, kMagic);
  io::WriteU32(out, static_cast<std::uint32_t>(data.dof));
  io::WriteU32(out, static_cast<std::uint32_t>(data.inputs));
  io::WriteF64(out, data.dt);
  io::WriteU64(out, static_cast<std::uint64_t>(data.size()));
  io::WriteU32(out, static_cast<std::uint32_t>(data.provenance));
  for (Eigen::Index k = 0; k < data.size(); ++k) {
    for (const Eigen::MatrixXd* m :
         {&data.q, &data.qdot, &data.u, &data.q_next, &data.qdot_next}) {
      for (Eigen::Index r = 0; r < m->rows(); ++r) io::WriteF64(out, (*m)(r, k));
    }
  }
  if (!out) throw Error("failed writing " + path);
}

TransitionDataset LoadDataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  io::ExpectMagic(in, kMagic, "dataset");
  const std::uint32_t dof = io::ReadU32(in);
  const std::uint32_t inputs = io::ReadU32(in);
  const double dt = io::ReadF64(in);
  const std::uint64_t count = io::ReadU64(in);
  const std::uint32_t provenance = io::ReadU32(in);
  if (dof < 1 || dof > 64 || inputs > 64 || !(dt > 0.0) || !std::isfinite(dt) ||
      provenance > 1) {
    throw FormatError("corrupt dataset header in " + path);
  }
  const std::uint64_t row = 4 * dof + inputs;
  in.seekg(0, std::ios::end);
  const std::uint64_t remaining =
      static_cast<std::uint64_t>(in.tellg()) - (sizeof(kMagic) - 1 + 4 + 4 + 8 + 8 + 4);
  if (count > remaining / (8 * row) || remaining != count * 8 * row) {
    throw FormatError("dataset " + path + " is truncated or has trailing bytes");
  }
  in.seekg(sizeof(kMagic) - 1 + 4 + 4 + 8 + 8 + 4);
  TransitionDataset d;
  d.dof = static_cast<int>(dof);
  d.inputs = static_cast<int>(inputs);
  d.dt = dt;
  d.provenance = static_cast<Provenance>(provenance);
  const auto n = static_cast<Eigen::Index>(count);
  d.q.resize(dof, n);
  d.qdot.resize(dof, n);
  d.u.resize(inputs, n);
  d.q_next.resize(dof, n);
  d.qdot_next.resize(dof, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::MatrixXd* m : {&d.q, &d.qdot, &d.u, &d.q_next, &d.qdot_next}) {
      for (Eigen::Index r = 0; r < m->rows(); ++r) (*m)(r, k) = io::ReadF64(in);
    }
  }
  return d;
}

}  // namespace gbdyn::training
