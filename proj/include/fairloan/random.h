// Copyright 2026 The fairloan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRLOAN_RANDOM_H_
#define FAIRLOAN_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace fairloan {

// Stable 64-bit mixing of a seed with a sequence of integers. Used to derive
// per-world and per-repeat seeds so results never depend on execution order.
uint64_t DeriveSeed(uint64_t seed, std::initializer_list<uint64_t> parts);
uint64_t DeriveSeed(uint64_t seed, std::span<const int> parts);

// Seeded generator whose output is identical across standard libraries. The
// std:: distributions are implementation-defined, so the draws are done here
// on top of the (fully specified) mt19937_64 engine.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform();

  // Uniform integer in [0, n). n must be > 0.
  uint64_t UniformIndex(uint64_t n);

  // Standard normal draw (Box-Muller; caches the second variate).
  double Normal();

  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fairloan

#endif  // FAIRLOAN_RANDOM_H_
