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

#ifndef LFF_COMMON_H_
#define LFF_COMMON_H_

#include <cstdint>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace lff {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Error taxonomy. The CLI maps ConfigError/DomainError/ShapeError/
// TooShortError to exit code 2 (user or input error) and InternalError
// to exit code 3 (invariant violation).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FormatError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnsupportedFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

class EmptyInputError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class TooShortError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

// Dense row-major matrix of doubles. All numerics in this library run in
// double precision; 32-bit floats appear only in serialized files.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<size_t>(r) * static_cast<size_t>(c), fill) {}

  double& At(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double At(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  bool SameShape(const Matrix& other) const {
    return rows == other.rows && cols == other.cols;
  }
};

// Seedable PRNG with a fixed, documented algorithm: the raw stream is the
// standard 64-bit Mersenne Twister (mt19937_64, fully specified by the C++
// standard) and every derived draw below is defined in terms of its raw
// 64-bit outputs only, so sequences are identical across platforms and
// standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t NextU64() { return gen_(); }

  // Uniform on [0, 1): top 53 bits of one raw draw.
  double UniformReal() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  double UniformRange(double lo, double hi) {
    return lo + (hi - lo) * UniformReal();
  }

  // Uniform integer on [lo, hi], inclusive, by rejection sampling.
  int64_t UniformInt(int64_t lo, int64_t hi);

  // Standard normal via Box-Muller on two uniform draws.
  double Normal();

  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformInt(0, static_cast<int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a 64-bit hash, used for config provenance stamps in output files.
uint64_t Fnv1a64(const std::string& bytes);
std::string ConfigHashHex(const std::string& canonical_config);

// SplitMix64 round; derives independent sub-seeds from a master seed.
uint64_t MixSeed(uint64_t seed, uint64_t stream);

// Little-endian binary I/O helpers.
void WriteU32Le(std::ostream& os, uint32_t v);
uint32_t ReadU32Le(std::istream& is);
void WriteF32Le(std::ostream& os, float v);
float ReadF32Le(std::istream& is);
void WriteF64Le(std::ostream& os, double v);
double ReadF64Le(std::istream& is);

}  // namespace lff

#endif  // LFF_COMMON_H_
