// Copyright 2026 The faulty-grover Authors
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

#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace fgrover {

/// Seedable, splittable pseudo-random stream.
///
/// A stream is addressed by a (seed, stream-id) pair. Both words are mixed
/// with SplitMix64 into the seed sequence of a 64-bit Mersenne Twister, so
/// distinct pairs give statistically independent streams. `split(i)` derives
/// the child stream (seed, mix(stream-id, i)) without touching the parent's
/// state, which is how per-trial streams are handed to workers.
///
/// Streams are plain values: copying one duplicates its position.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  [[nodiscard]] RandomStream split(std::uint64_t child) const;

  /// Uniform on [0, 1).
  double uniform();
  double normal();
  /// Standard complex Gaussian, E|z|^2 = 1.
  std::complex<double> complex_normal();

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace fgrover
