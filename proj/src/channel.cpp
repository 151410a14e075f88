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


#include "goc/channel.hpp"

#include <cmath>
#include <numbers>

namespace goc {

ChannelGenerator::ChannelGenerator(ChannelScenario scenario, double slot_duration,
                                   std::uint64_t seed)
    : scenario_(std::move(scenario)), slot_duration_(slot_duration), rng_(seed) {
  if (scenario_.fading == FadingMode::kClarkeCorrelated) {
    std::uniform_real_distribution<double> uni(-std::numbers::pi, std::numbers::pi);
    const double theta = uni(rng_);
    for (int n = 1; n <= kSinusoids; ++n) {
      const double alpha = (2.0 * std::numbers::pi * n - std::numbers::pi + theta) / kSinusoids;
      doppler_cos_.push_back(std::cos(alpha));
      phase_.push_back(uni(rng_));
    }
  }
}

std::complex<double> ChannelGenerator::clarke_fade(std::int64_t slot) const {
  const double w = 2.0 * std::numbers::pi * scenario_.doppler_hz * slot_duration_ *
                   static_cast<double>(slot);
  std::complex<double> h{0.0, 0.0};
  for (int n = 0; n < kSinusoids; ++n) {
    h += std::polar(1.0, w * doppler_cos_[n] + phase_[n]);
  }
  return h / std::sqrt(static_cast<double>(kSinusoids));
}

ChannelState ChannelGenerator::next_gain(const ChannelState* prev) {
  if (prev) next_slot_ = prev->slot + 1;
  ChannelState out;
  out.slot = next_slot_++;
  if (scenario_.fading == FadingMode::kIidRayleigh) {
    out.gain_sq = scenario_.pathloss_gain * unit_exp_(rng_);
  } else {
    out.gain_sq = scenario_.pathloss_gain * std::norm(clarke_fade(out.slot));
  }
  return out;
}

double max_rate(const ChannelState& state, const UEConfig& cfg) {
  if (state.gain_sq <= 0.0) return 0.0;
  const double b = cfg.bandwidth();
  const double snr = cfg.p_tx_max * state.gain_sq / (cfg.channel.noise_psd * b);
  return b * std::log1p(snr) / std::numbers::ln2;
}

double tx_energy(double rate, const ChannelState& state, const UEConfig& cfg, double tau) {
  if (rate <= 0.0) return 0.0;
  if (state.gain_sq <= 0.0) throw InfeasibleLink("positive rate on a dead channel");
  const double b = cfg.bandwidth();
  return tau * b * cfg.channel.noise_psd / state.gain_sq *
         std::expm1(rate * std::numbers::ln2 / b);
}

}  // namespace goc
