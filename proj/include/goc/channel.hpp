// Copyright 2026 The goc Authors
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


#ifndef GOC_CHANNEL_HPP_
#define GOC_CHANNEL_HPP_

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "goc/model.hpp"

namespace goc {

struct ChannelState {
  double gain_sq = 0.0;  // |h|^2 including path loss
  std::int64_t slot = 0;
};

class InfeasibleLink : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Block-fading generator for one UE. Owns its RNG; not shared across UEs.
//
// iid mode draws an independent unit-mean exponential power per slot.
// Clarke mode is a sum of 64 complex sinusoids with arrival angles spread
// uniformly over the circle (random common rotation, random phases); its
// time autocorrelation approximates J0(2 pi f_D tau lag).
class ChannelGenerator {
 public:
  static constexpr int kSinusoids = 64;

  ChannelGenerator(ChannelScenario scenario, double slot_duration, std::uint64_t seed);

  // Advances one slot; `prev` is accepted for interface symmetry and only
  // its slot index is used.
  ChannelState next_gain(const ChannelState* prev = nullptr);

  // Complex fade of the Clarke process at a given slot (unit mean power).
  std::complex<double> clarke_fade(std::int64_t slot) const;

  const ChannelScenario& scenario() const { return scenario_; }

 private:
  ChannelScenario scenario_;
  double slot_duration_;
  std::mt19937_64 rng_;
  std::exponential_distribution<double> unit_exp_{1.0};
  std::vector<double> doppler_cos_;  // cos(alpha_n)
  std::vector<double> phase_;
  std::int64_t next_slot_ = 0;
};

// Shannon rate at full power: B log2(1 + p_max |h|^2 / (N0 B)).
double max_rate(const ChannelState& state, const UEConfig& cfg);

// Energy to sustain `rate` over one slot: tau B N0 / |h|^2 (2^(R/B) - 1).
// Throws InfeasibleLink for a positive rate on a dead channel.
double tx_energy(double rate, const ChannelState& state, const UEConfig& cfg, double tau);

// tau kappa f^3.
inline double comp_energy(double freq, double kappa, double tau) {
  return tau * kappa * freq * freq * freq;
}

}  // namespace goc

#endif  // GOC_CHANNEL_HPP_
