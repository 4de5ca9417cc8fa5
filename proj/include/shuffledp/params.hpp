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

#ifndef SHUFFLEDP_PARAMS_HPP_
#define SHUFFLEDP_PARAMS_HPP_

#include <cstdint>

namespace shuffledp {

// The pair (epsilon0, n) defining a shuffled epsilon0-LDP process over n
// users.  epsilon0 is in nats.  epsilon0 == 0 is accepted so that closed-form
// bounds and limit cases remain callable; it makes the two mixture
// distributions identical.
class ShuffleParams {
 public:
  ShuffleParams(double epsilon0, std::int64_t n);

  double epsilon0() const { return epsilon0_; }
  std::int64_t n() const { return n_; }

  // p = e^{-epsilon0}, the mass each local randomizer places on the
  // distinguished pair of inputs.
  double p() const { return p_; }

  // Mixture weight q = e^{epsilon0} / (e^{epsilon0} + 1) = 1 / (1 + p).
  double q() const { return 1.0 / (1.0 + p_); }

 private:
  double epsilon0_;
  std::int64_t n_;
  double p_;
};

}  // namespace shuffledp

#endif  // SHUFFLEDP_PARAMS_HPP_
