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

#include "gbdyn/modelzoo/checkpoint.h"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "gbdyn/error.h"
#include "gbdyn/io/binary.h"

namespace gbdyn::modelzoo {
namespace {

constexpr char kMagic[] = "GBDYN1";
constexpr std::uint32_t kVersion = 1;

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double ParseDouble(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("bad number '" + s + "' in checkpoint descriptor");
  }
  return v;
}

std::vector<std::string> Split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::string Join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += FormatDouble(values[i]);
  }
  return out;
}

std::vector<int> ParseWidths(const std::string& s) {
  std::vector<int> widths;
  for (const std::string& item : Split(s)) {
    const double v = ParseDouble(item);
    if (v < 1 || v > 1e6 || v != static_cast<int>(v)) {
      throw FormatError("bad layer width in checkpoint descriptor");
    }
    widths.push_back(static_cast<int>(v));
  }
  if (widths.size() < 2) throw FormatError("network needs at least two widths");
  return widths;
}

std::string WidthsOf(const ad::Mlp& net) {
  std::vector<double> w(net.widths().begin(), net.widths().end());
  return Join(w);
}

std::string Describe(const std::string& name, const dynamics::Model& model) {
  std::ostringstream d;
  d << "name=" << name << "\n";
  d << "dof=" << model.dof() << "\n";
  d << "inputs=" << model.inputs() << "\n";
  if (model.is_naive()) {
    d << "kind=naive\n";
    d << "naive=" << WidthsOf(model.naive().net) << "\n";
    return d.str();
  }
  const dynamics::DynModel& m = model.dyn();
  d << "kind=lagrangian\n";
  if (const auto* mass = std::get_if<dynamics::LearnedCholeskyMass>(&m.mass())) {
    d << "mass=learned\nmass_widths=" << WidthsOf(mass->net) << "\n";
    d << "delta=" << FormatDouble(mass->delta) << "\n";
  } else {
    d << "mass=white_box\n";
  }
  if (const auto* v = std::get_if<dynamics::LearnedPotential>(&m.potential())) {
    d << "potential=learned\npotential_widths=" << WidthsOf(v->net) << "\n";
  } else {
    d << "potential=white_box\n";
  }
  if (const auto* f = std::get_if<dynamics::GenericForce>(&m.force())) {
    d << "force=generic\nforce_widths=" << WidthsOf(f->net) << "\n";
  } else if (const auto* f = std::get_if<dynamics::ControlAffineForce>(&m.force())) {
    d << "force=control_affine\ninput_widths=" << WidthsOf(f->input_net)
      << "\ndamping_widths=" << WidthsOf(f->damping_net) << "\n";
  } else {
    d << "force=white_box\n";
  }
  const dynamics::WhiteBoxParams& wb = m.white_box();
  d << "white_box=" << Join({wb.m1, wb.m2, wb.l1, wb.l2, wb.g}) << "\n";
  d << "b=" << Join(std::vector<double>(wb.b.data(), wb.b.data() + wb.b.size())) << "\n";
  d << "eta=" << Join(std::vector<double>(wb.eta.data(), wb.eta.data() + wb.eta.size()))
    << "\n";
  return d.str();
}

std::map<std::string, std::string> ParseDescriptor(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("malformed checkpoint descriptor line");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

const std::string& Get(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw FormatError("checkpoint descriptor lacks '" + key + "'");
  return it->second;
}

Eigen::VectorXd ParseVector(const std::string& s) {
  std::vector<std::string> items = Split(s);
  Eigen::VectorXd v(static_cast<Eigen::Index>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) v(i) = ParseDouble(items[i]);
  return v;
}

dynamics::Model Rebuild(const std::map<std::string, std::string>& kv) {
  const int dof = static_cast<int>(ParseDouble(Get(kv, "dof")));
  const int inputs = static_cast<int>(ParseDouble(Get(kv, "inputs")));
  if (Get(kv, "kind") == "naive") {
    return dynamics::NaiveModel{ad::Mlp(ParseWidths(Get(kv, "naive"))), dof, inputs};
  }
  dynamics::WhiteBoxParams wb;
  Eigen::VectorXd consts = ParseVector(Get(kv, "white_box"));
  if (consts.size() != 5) throw FormatError("checkpoint needs five white-box constants");
  wb.m1 = consts(0);
  wb.m2 = consts(1);
  wb.l1 = consts(2);
  wb.l2 = consts(3);
  wb.g = consts(4);
  wb.b = ParseVector(Get(kv, "b"));
  wb.eta = ParseVector(Get(kv, "eta"));

  dynamics::MassModel mass = dynamics::WhiteBoxMass{};
  if (Get(kv, "mass") == "learned") {
    mass = dynamics::LearnedCholeskyMass{ad::Mlp(ParseWidths(Get(kv, "mass_widths"))),
                                         ParseDouble(Get(kv, "delta"))};
  }
  dynamics::PotentialModel potential = dynamics::WhiteBoxPotential{};
  if (Get(kv, "potential") == "learned") {
    potential = dynamics::LearnedPotential{ad::Mlp(ParseWidths(Get(kv, "potential_widths")))};
  }
  dynamics::ForceModel force = dynamics::WhiteBoxForce{};
  const std::string& f = Get(kv, "force");
  if (f == "generic") {
    force = dynamics::GenericForce{ad::Mlp(ParseWidths(Get(kv, "force_widths")))};
  } else if (f == "control_affine") {
    force = dynamics::ControlAffineForce{ad::Mlp(ParseWidths(Get(kv, "input_widths"))),
                                         ad::Mlp(ParseWidths(Get(kv, "damping_widths")))};
  } else if (f != "white_box") {
    throw FormatError("unknown force kind '" + f + "' in checkpoint");
  }
  return dynamics::DynModel(dof, inputs, std::move(mass), std::move(potential),
                            std::move(force), std::move(wb));
}

Eigen::VectorXd ReadVector(std::istream& in, std::uint64_t n) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (std::uint64_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = io::ReadF64(in);
  return v;
}

}  // namespace

void SaveCheckpoint(const std::string& path, const std::string& name,
                    const dynamics::Model& model, const ad::AdamState* optimizer) {
  const std::string descriptor = Describe(name, model);
  const ad::ParamVector params = model.GetParams();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  io::WriteBytes(out, kMagic);
  io::WriteU32(out, kVersion);
  io::WriteU32(out, static_cast<std::uint32_t>(descriptor.size()));
  io::WriteBytes(out, descriptor);
  io::WriteU64(out, static_cast<std::uint64_t>(params.size()));
  for (Eigen::Index i = 0; i < params.size(); ++i) io::WriteF64(out, params(i));
  io::WriteU32(out, optimizer ? 1 : 0);
  if (optimizer) {
    if (optimizer->first_moment.size() != params.size() ||
        optimizer->second_moment.size() != params.size()) {
      throw ShapeError("optimizer state does not match the model parameters");
    }
    const ad::AdamConfig& c = optimizer->config;
    for (double v : {c.learning_rate, c.beta1, c.beta2, c.epsilon}) io::WriteF64(out, v);
    io::WriteU64(out, static_cast<std::uint64_t>(optimizer->step));
    for (Eigen::Index i = 0; i < params.size(); ++i) io::WriteF64(out, optimizer->first_moment(i));
    for (Eigen::Index i = 0; i < params.size(); ++i) io::WriteF64(out, optimizer->second_moment(i));
  }
  if (!out) throw Error("failed writing " + path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  io::ExpectMagic(in, kMagic, "checkpoint");
  const std::uint32_t version = io::ReadU32(in);
  if (version != kVersion) {
    throw FormatError("checkpoint version " + std::to_string(version) + " is not supported");
  }
  const std::uint32_t length = io::ReadU32(in);
  if (length > (1u << 20)) throw FormatError("checkpoint descriptor too long");
  const auto kv = ParseDescriptor(io::ReadBytes(in, length));
  Checkpoint ckpt{Get(kv, "name"), Rebuild(kv), std::nullopt};
  const std::uint64_t count = io::ReadU64(in);
  if (count != static_cast<std::uint64_t>(ckpt.model.ParameterCount())) {
    throw FormatError("checkpoint parameter count does not match its descriptor");
  }
  ckpt.model.SetParams(ReadVector(in, count));
  if (io::ReadU32(in) == 1) {
    ad::AdamState state;
    state.config.learning_rate = io::ReadF64(in);
    state.config.beta1 = io::ReadF64(in);
    state.config.beta2 = io::ReadF64(in);
    state.config.epsilon = io::ReadF64(in);
    state.step = static_cast<std::int64_t>(io::ReadU64(in));
    state.first_moment = ReadVector(in, count);
    state.second_moment = ReadVector(in, count);
    ckpt.optimizer = std::move(state);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("checkpoint has trailing bytes");
  }
  return ckpt;
}

}  // namespace gbdyn::modelzoo
