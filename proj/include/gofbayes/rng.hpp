/*
 * Copyright 2026 The gofbayes Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GOFBAYES_RNG_HPP_
#define GOFBAYES_RNG_HPP_

#include <cstdint>
#include <random>

namespace gofbayes {

// One SplitMix64 output step; used to spread seed material.
std::uint64_t mix64(std::uint64_t z);

// Hashes (seed, a, b) into an independent stream key. Streams for distinct
// (a, b) pairs under the same seed are treated as independent; the Monte
// Carlo harness derives one stream per (repetition, method) this way so that
// results do not depend on scheduling order.
std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t a,
                                std::uint64_t b);

// Random stream used throughout. All floating-point conversions are done
// here rather than through std:: distributions, so a given seed yields the
// same draws on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform on the open interval (0, 1); never returns an endpoint.
  double uniform() {
    return (static_cast<double>(bits() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via the Marsaglia polar method (one variate cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double v1, v2, s;
    do {
      v1 = 2.0 * uniform() - 1.0;
      v2 = 2.0 * uniform() - 1.0;
      s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v2 * f;
    has_spare_ = true;
    return v1 * f;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gofbayes

#endif  // GOFBAYES_RNG_HPP_
