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

#include "gbdyn/io/binary.h"

#include <bit>
#include <cstring>

#include "gbdyn/error.h"

namespace gbdyn::io {
namespace {

template <typename T>
void WriteLe(std::ostream& out, T v) {
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T ReadLe(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw FormatError("unexpected end of file");
  }
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

void WriteU32(std::ostream& out, std::uint32_t v) { WriteLe(out, v); }
void WriteU64(std::ostream& out, std::uint64_t v) { WriteLe(out, v); }
void WriteF64(std::ostream& out, double v) {
  WriteLe(out, std::bit_cast<std::uint64_t>(v));
}
void WriteBytes(std::ostream& out, std::string_view bytes) {
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::uint32_t ReadU32(std::istream& in) { return ReadLe<std::uint32_t>(in); }
std::uint64_t ReadU64(std::istream& in) { return ReadLe<std::uint64_t>(in); }
double ReadF64(std::istream& in) { return std::bit_cast<double>(ReadLe<std::uint64_t>(in)); }

std::string ReadBytes(std::istream& in, std::size_t count) {
  std::string bytes(count, '\0');
  if (!in.read(bytes.data(), static_cast<std::streamsize>(count))) {
    throw FormatError("unexpected end of file");
  }
  return bytes;
}

void ExpectMagic(std::istream& in, std::string_view magic, std::string_view what) {
  std::string bytes(magic.size(), '\0');
  in.read(bytes.data(), static_cast<std::streamsize>(magic.size()));
  if (!in || bytes != magic) {
    throw FormatError("not a " + std::string(what) + " file (bad magic)");
  }
}

}  // namespace gbdyn::io
