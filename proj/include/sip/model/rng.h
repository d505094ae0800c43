// Copyright 2026 The Sequence Privacy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef SIP_MODEL_RNG_H_
#define SIP_MODEL_RNG_H_

#include <cstdint>
#include <random>
#include <span>

namespace sip {

// Deterministic random source for one stream.
//
// Each (seed, stream) pair keys an independent std::mt19937_64 through
// std::seed_seq; both are fully specified by the standard, and doubles are
// formed from the top 53 output bits, so draws are bit-identical across
// platforms and independent of how streams are scheduled onto threads.
class StreamRng {
 public:
  StreamRng(uint64_t seed, uint64_t stream);

  uint64_t NextBits() { return engine_(); }

  // Uniform double in [0, 1).
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

// Inverse-CDF draw over ascending indices: the smallest i with
// u < p[0] + ... + p[i]. Falls back to the last index with positive mass
// when rounding leaves u above the final partial sum.
int SampleIndex(std::span<const double> probs, double u);

}  // namespace sip

#endif  // SIP_MODEL_RNG_H_
