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


#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "doctest.h"
#include "goc/channel.hpp"
#include "goc/scenarios.hpp"

using namespace goc;

namespace {

UEConfig ue_on(const char* channel) { return default_ue(0, channel, "deep_ce"); }

}  // namespace

TEST_CASE("iid Rayleigh mean power matches the path-loss gain") {
  for (const char* name : {"A", "B"}) {
    ChannelGenerator gen(channel_preset(name, 0.05), 0.05, 11);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += gen.next_gain().gain_sq;
    CHECK(sum / n == doctest::Approx(channel_preset(name, 0.05).pathloss_gain).epsilon(0.01));
  }
}

TEST_CASE("clarke: zero Doppler gives a constant gain") {
  ChannelScenario s = channel_preset("A", 0.05);
  s.fading = FadingMode::kClarkeCorrelated;
  s.doppler_hz = 0.0;
  ChannelGenerator gen(s, 0.05, 3);
  const double g0 = gen.next_gain().gain_sq;
  for (int i = 0; i < 100; ++i) CHECK(gen.next_gain().gain_sq == g0);
}

TEST_CASE("clarke: lag-1 autocorrelation follows J0") {
  for (double fd : {1.0 / (2.0 * M_PI * 0.05), 2.0, 8.0}) {
    ChannelScenario s = channel_preset("A", 0.05);
    s.fading = FadingMode::kClarkeCorrelated;
    s.doppler_hz = fd;
    // Average over independent generator draws to remove the per-realization bias.
    double acc = 0.0, power = 0.0;
    const int runs = 20, n = 100000 / runs;
    for (int r = 0; r < runs; ++r) {
      ChannelGenerator gen(s, 0.05, 1000 + r);
      for (int t = 0; t < n; ++t) {
        const std::complex<double> a = gen.clarke_fade(t), b = gen.clarke_fade(t + 1);
        acc += (a * std::conj(b)).real();
        power += std::norm(a);
      }
    }
    const double expected = std::cyl_bessel_j(0.0, 2.0 * M_PI * fd * 0.05);
    CHECK(std::abs(acc / power - expected) < 0.02);
  }
}

TEST_CASE("max_rate against a 50-digit evaluation") {
  using big = boost::multiprecision::cpp_bin_float_50;
  const UEConfig ue = ue_on("A");
  for (double g : {1.06e-10, 3.3e-12, 2.72e-14, 1e-18}) {
    const big B = 2.5e6, N0 = big("3.98e-21"), p = big("0.1");
    const big snr = p * big(g) / (N0 * B);
    const big ref = B * log(1 + snr) / log(big(2));
    const double got = max_rate(ChannelState{g, 0}, ue);
    CHECK(std::abs(got - ref.convert_to<double>()) <= 1e-12 * ref.convert_to<double>());
  }
  CHECK(max_rate(ChannelState{0.0, 0}, ue) == 0.0);
}

TEST_CASE("max_rate is monotone in transmit power") {
  UEConfig ue = ue_on("B");
  std::mt19937_64 rng(5);
  std::exponential_distribution<double> fade(1.0);
  for (int i = 0; i < 1000; ++i) {
    ChannelState s{2.72e-14 * fade(rng), 0};
    ue.p_tx_max = 0.05;
    const double lo = max_rate(s, ue);
    ue.p_tx_max = 0.1;
    CHECK(max_rate(s, ue) >= lo);
  }
}

TEST_CASE("tx_energy inverts the capacity formula") {
  UEConfig ue = ue_on("A");
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double g = 1.06e-10 * std::pow(10.0, -4.0 * u(rng));
    const ChannelState s{g, 0};
    ue.p_tx_max = 0.1;
    CHECK(tx_energy(max_rate(s, ue), s, ue, 0.05) == doctest::Approx(0.005).epsilon(1e-9));
    const double p = 0.1 * u(rng) + 1e-6;
    ue.p_tx_max = p;
    const double r = max_rate(s, ue);
    ue.p_tx_max = 0.1;
    CHECK(tx_energy(r, s, ue, 0.05) == doctest::Approx(0.05 * p).epsilon(1e-9));
  }
  CHECK(tx_energy(0.0, ChannelState{1e-12, 0}, ue, 0.05) == 0.0);
  CHECK(tx_energy(0.0, ChannelState{0.0, 0}, ue, 0.05) == 0.0);
  CHECK_THROWS_AS(tx_energy(1.0, ChannelState{0.0, 0}, ue, 0.05), InfeasibleLink);
}

TEST_CASE("tx_energy is convex and increasing") {
  const UEConfig ue = ue_on("A");
  const ChannelState s{1e-11, 0};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, max_rate(s, ue));
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng);
    const double mid = tx_energy(0.5 * (a + b), s, ue, 0.05);
    CHECK(mid <= 0.5 * (tx_energy(a, s, ue, 0.05) + tx_energy(b, s, ue, 0.05)) * (1 + 1e-12));
    if (a < b) CHECK(tx_energy(a, s, ue, 0.05) < tx_energy(b, s, ue, 0.05));
  }
}

TEST_CASE("comp_energy") {
  CHECK(comp_energy(0.0, 1.097e-27, 0.05) == 0.0);
  CHECK(comp_energy(1.4e9, 1.097e-27, 0.05) ==
        doctest::Approx(0.05 * 1.097e-27 * 1.4e9 * 1.4e9 * 1.4e9));
  CHECK(comp_energy(2.8e9, 1.097e-27, 0.05) ==
        doctest::Approx(8.0 * comp_energy(1.4e9, 1.097e-27, 0.05)));
}
