// Copyright 2026 The shuffledp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHUFFLEDP_RNG_HPP_
#define SHUFFLEDP_RNG_HPP_

#include <array>
#include <cstdint>

namespace shuffledp {

// Explicitly seeded, splittable random stream (xoshiro256++ state expanded
// from a 64-bit seed via splitmix64).  There is no global RNG anywhere in the
// library: every sampling routine takes a stream, so results are reproducible
// bit-for-bit across platforms and safe to fan out across threads by handing
// each worker its own split() child.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  // Derives an independent child stream from this stream's seed and a caller
  // key.  Does not advance or otherwise modify the parent.
  RngStream split(std::uint64_t key) const;

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double next_double();

  // Uniform on the open interval (0, 1); safe to pass to log().
  double next_open_double();

  bool bernoulli(double prob);

  // Uniform integer in [0, bound), bound >= 1.  Rejection sampling, unbiased.
  std::uint64_t next_below(std::uint64_t bound);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_;
};

}  // namespace shuffledp

#endif  // SHUFFLEDP_RNG_HPP_
