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

#ifndef GBDYN_IO_BINARY_H_
#define GBDYN_IO_BINARY_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace gbdyn::io {

// Little-endian primitives. Readers throw FormatError on truncated input.
void WriteU32(std::ostream& out, std::uint32_t v);
void WriteU64(std::ostream& out, std::uint64_t v);
void WriteF64(std::ostream& out, double v);
void WriteBytes(std::ostream& out, std::string_view bytes);

std::uint32_t ReadU32(std::istream& in);
std::uint64_t ReadU64(std::istream& in);
double ReadF64(std::istream& in);
std::string ReadBytes(std::istream& in, std::size_t count);

// Reads `magic.size()` bytes and throws FormatError naming `what` unless they
// equal `magic`.
void ExpectMagic(std::istream& in, std::string_view magic, std::string_view what);

}  // namespace gbdyn::io

#endif  // GBDYN_IO_BINARY_H_
