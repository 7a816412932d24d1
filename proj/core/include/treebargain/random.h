// Copyright 2026 The treebargain Authors.
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

#ifndef TREEBARGAIN_RANDOM_H_
#define TREEBARGAIN_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace treebargain {

// Reproducible random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the standard library distributions are
// not, so every derived quantity is computed here with a fixed recipe:
//   uniform   53 high bits of one draw, scaled to [0, 1)
//   below(k)  rejection sampling on the top of the 64-bit range
//   normal    Box-Muller, cosine branch, one normal per two uniforms
//   shuffle   Fisher-Yates from the back, swap index = below(i + 1)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  double Uniform();
  std::uint64_t Below(std::uint64_t bound);
  double StandardNormal();
  // exp(1 + N(0, 1)).
  double Lognormal() { return std::exp(1.0 + StandardNormal()); }

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer applied to (seed, stream); used to give independent
// tries their own generator.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

}  // namespace treebargain

#endif  // TREEBARGAIN_RANDOM_H_
