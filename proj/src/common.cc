// Copyright (c) 2026 The lff authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lff/common.h"

#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace lff {

int64_t Rng::UniformInt(int64_t lo, int64_t hi) {
  if (lo > hi) throw DomainError("UniformInt: empty range");
  uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<int64_t>(NextU64());  // full 64-bit range
  uint64_t limit = std::numeric_limits<uint64_t>::max() -
                   std::numeric_limits<uint64_t>::max() % span;
  uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return lo + static_cast<int64_t>(x % span);
}

double Rng::Normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = UniformReal();
  double u2 = UniformReal();
  while (u1 <= 0.0) u1 = UniformReal();
  double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return r * std::cos(kTwoPi * u2);
}

uint64_t MixSeed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

uint64_t Fnv1a64(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string ConfigHashHex(const std::string& canonical_config) {
  uint64_t h = Fnv1a64(canonical_config);
  std::ostringstream os;
  os << std::hex;
  for (int shift = 60; shift >= 0; shift -= 4) {
    os << "0123456789abcdef"[(h >> shift) & 0xF];
  }
  return os.str();
}

void WriteU32Le(std::ostream& os, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF),
                        static_cast<unsigned char>((v >> 16) & 0xFF),
                        static_cast<unsigned char>((v >> 24) & 0xFF)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t ReadU32Le(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw FormatError("unexpected end of file while reading u32");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void WriteF32Le(std::ostream& os, float v) {
  uint32_t u;
  std::memcpy(&u, &v, 4);
  WriteU32Le(os, u);
}

float ReadF32Le(std::istream& is) {
  uint32_t u = ReadU32Le(is);
  float v;
  std::memcpy(&v, &u, 4);
  return v;
}

void WriteF64Le(std::ostream& os, double v) {
  uint64_t u;
  std::memcpy(&u, &v, 8);
  WriteU32Le(os, static_cast<uint32_t>(u & 0xFFFFFFFFull));
  WriteU32Le(os, static_cast<uint32_t>(u >> 32));
}

double ReadF64Le(std::istream& is) {
  uint64_t lo = ReadU32Le(is);
  uint64_t hi = ReadU32Le(is);
  uint64_t u = lo | (hi << 32);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

}  // namespace lff
