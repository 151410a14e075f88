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


#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "goc/engine.hpp"
#include "goc/policies.hpp"
#include "goc/scenarios.hpp"
#include "oracles.hpp"

using namespace goc;

namespace {

Config two_ue(PolicyKind kind) {
  Config c = fleet_config({"A", "B"}, "deep_ce", 0.8, kind);
  c.fleet[0].steps = StepSizes{3.0, 20.0, 100.0};
  c.fleet[1].steps = StepSizes{1.0, 5.0, 10.0};
  return c;
}

SlotState empty_state(const Config& c) {
  SlotState st;
  st.queues = QueueBank(c.fleet);
  for (const UEConfig& ue : c.fleet) st.channel.push_back(ChannelState{ue.channel.pathloss_gain, 0});
  return st;
}

void check_feasible(const Config& c, const SlotState& st, const SlotDecision& d) {
  const double tau = c.sim.slot_duration;
  for (std::size_t k = 0; k < c.fleet.size(); ++k) {
    const UEConfig& ue = c.fleet[k];
    const UEAction& a = d.ue[k];
    REQUIRE(a.lut_index >= 0);
    REQUIRE(static_cast<std::size_t>(a.lut_index) < ue.lut.size());
    CHECK(std::find(ue.freq_set.begin(), ue.freq_set.end(), a.f_d) != ue.freq_set.end());
    CHECK(a.rate >= 0.0);
    if (!a.offload) {
      CHECK(a.rate == 0.0);
      continue;
    }
    const CompressionProfile& p = ue.lut[static_cast<std::size_t>(a.lut_index)];
    const double w = du_bits(p);
    const double cap = rate_cap(static_cast<double>(st.queues.q_ue[k]), w, tau,
                                max_rate(st.channel[k], ue));
    CHECK(a.rate <= cap * (1 + 1e-12));
    CHECK(a.rate <= w * a.f_d * p.j_offload * (1 + 1e-12));
  }
  CHECK(std::find(c.es.freq_set.begin(), c.es.freq_set.end(), d.es.f_s) != c.es.freq_set.end());
  double sum = 0.0;
  for (const auto& row : d.es.f_split) {
    for (double f : row) {
      CHECK(f >= 0.0);
      sum += f;
    }
  }
  CHECK(sum <= d.es.f_s * (1 + 1e-12));
}

}  // namespace

TEST_CASE("ue_slot_cost matches the independent cost model") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (PolicyKind kind : {PolicyKind::kMuMeda, PolicyKind::kMuMade}) {
    const UeObjective obj =
        kind == PolicyKind::kMuMade ? UeObjective::kMaxAccuracy : UeObjective::kMinEnergy;
    Config c = two_ue(kind);
    for (int s = 0; s < 200; ++s) {
      c.sim.v = std::pow(10.0, 2.0 + 5.0 * u(rng));
      const SlotState st = oracle::random_state(rng, c);
      for (std::size_t k = 0; k < 2; ++k) {
        const UEConfig& ue = c.fleet[k];
        const std::size_t row = static_cast<std::size_t>(u(rng) * 6);
        const double f = ue.freq_set[static_cast<std::size_t>(u(rng) * 10)];
        const CompressionProfile& p = ue.lut[row];
        const double cap = std::min(rate_cap(static_cast<double>(st.queues.q_ue[k]), du_bits(p),
                                             0.05, max_rate(st.channel[k], ue)),
                                    du_bits(p) * f * p.j_offload);
        const bool offload = u(rng) < 0.5;
        const double rate = offload ? u(rng) * cap : 0.0;
        const double got = ue_slot_cost(obj, ue, k, st, UEAction{offload, static_cast<int>(row), f, rate},
                                        c.sim.v, c.es.gamma, 0.05);
        const double ref = oracle::ue_cost(obj, c, k, st, offload, row, f, rate).cost;
        CHECK(std::abs(got - ref) <= 1e-9 * oracle::cost_scale(obj, c, k, st));
      }
    }
  }
}

TEST_CASE("UE decision against a brute-force grid") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (PolicyKind kind : {PolicyKind::kMuMeda, PolicyKind::kMuMade}) {
    const UeObjective obj =
        kind == PolicyKind::kMuMade ? UeObjective::kMaxAccuracy : UeObjective::kMinEnergy;
    for (bool forced : {false, true}) {
      Config c = two_ue(kind);
      c.sim.force_offload = forced;
      for (int s = 0; s < 12; ++s) {
        c.sim.v = std::pow(10.0, 2.0 + 5.0 * u(rng));
        const SlotState st = oracle::random_state(rng, c);
        for (std::size_t k = 0; k < 2; ++k) {
          const UEDecision d = kind == PolicyKind::kMuMade ? made_ue_step(k, st, c)
                                                           : meda_ue_step(k, st, c);
          const oracle::GridResult g = oracle::brute_force_ue(obj, c, k, st, forced, 2000);
          const double tol = 1e-9 * oracle::cost_scale(obj, c, k, st);
          CHECK(d.cost <= g.cost + tol);
          CHECK(g.cost - d.cost <= g.resolution + tol);
          if (forced) CHECK(d.action.offload);
          const oracle::UeCostTerms t =
              oracle::ue_cost(obj, c, k, st, d.action.offload,
                              static_cast<std::size_t>(d.action.lut_index), d.action.f_d,
                              d.action.rate);
          CHECK(std::abs(t.cost - d.cost) <= tol);
        }
      }
    }
  }
}

TEST_CASE("fixed-accuracy decision against the restricted grid") {
  Config c = three_ue_config(PolicyKind::kFixedAccuracy);
  for (UEConfig& ue : c.fleet) ue.lut = short_ce_lut();
  c.sim.rho_fixed = 8;
  std::mt19937_64 rng(5);
  for (int s = 0; s < 10; ++s) {
    const SlotState st = oracle::random_state(rng, c);
    for (std::size_t k = 0; k < 3; ++k) {
      const UEDecision d = fixed_accuracy_step(k, st, c, 8);
      CHECK(c.fleet[k].lut[static_cast<std::size_t>(d.action.lut_index)].rho == 8);
      const oracle::GridResult g =
          oracle::brute_force_ue(UeObjective::kMinEnergy, c, k, st, false, 2000, 2);
      const double tol = 1e-9 * oracle::cost_scale(UeObjective::kMinEnergy, c, k, st);
      CHECK(d.cost <= g.cost + tol);
      CHECK(g.cost - d.cost <= g.resolution + tol);
    }
  }
  CHECK_THROWS_AS(fixed_accuracy_step(0, empty_state(c), c, 5), ConfigError);
}

TEST_CASE("idle slot: nothing to do") {
  const Config c = two_ue(PolicyKind::kMuMeda);
  const SlotState st = empty_state(c);
  for (std::size_t k = 0; k < 2; ++k) {
    const UEDecision d = meda_ue_step(k, st, c);
    CHECK_FALSE(d.action.offload);
    CHECK(d.action.rate == 0.0);
    CHECK(d.action.f_d == c.fleet[k].freq_set.front());
  }
  const ESDecision es = meda_es_step(st, c);
  CHECK(es.action.f_s == c.es.freq_set.front());
  const ESDecision es2 = made_es_step(st, c);
  CHECK(es2.action.f_s == c.es.freq_set.front());
}

TEST_CASE("dead channel falls back to local processing") {
  for (PolicyKind kind : {PolicyKind::kMuMeda, PolicyKind::kMuMade}) {
    Config c = two_ue(kind);
    SlotState st = empty_state(c);
    st.channel[0].gain_sq = 0.0;
    st.queues.q_ue[0] = 20;
    st.queues.z[0] = 500.0;
    st.queues.s[0] = 0.01;
    const UEDecision d = kind == PolicyKind::kMuMade ? made_ue_step(0, st, c) : meda_ue_step(0, st, c);
    CHECK_FALSE(d.action.offload);
    CHECK(std::isfinite(d.cost));
  }
}

TEST_CASE("max-accuracy with no energy pressure sends at the cap, most accurate row") {
  Config c = two_ue(PolicyKind::kMuMade);
  c.sim.force_offload = true;
  c.sim.v = 1e9;
  SlotState st = empty_state(c);
  st.queues.q_ue[0] = 5;
  st.queues.s[0] = 0.0;
  const UEDecision d = made_ue_step(0, st, c);
  REQUIRE(d.action.offload);
  const UEConfig& ue = c.fleet[0];
  const CompressionProfile& p = ue.lut[static_cast<std::size_t>(d.action.lut_index)];
  double top = 0.0;
  for (const CompressionProfile& q : ue.lut) top = std::max(top, q.accuracy);
  CHECK(p.accuracy == top);
  const double cap = std::min(rate_cap(5.0, du_bits(p), 0.05, max_rate(st.channel[0], ue)),
                              du_bits(p) * d.action.f_d * p.j_offload);
  CHECK(n_offload(p, d.action.f_d, d.action.rate, 0.05) == n_offload(p, d.action.f_d, cap, 0.05));
}

TEST_CASE("max-accuracy with V = 0 ignores accuracy") {
  Config c = two_ue(PolicyKind::kMuMade);
  c.sim.v = 0.0;
  std::mt19937_64 rng(12);
  for (int s = 0; s < 30; ++s) {
    const SlotState st = oracle::random_state(rng, c);
    Config shuffled = c;
    for (UEConfig& ue : shuffled.fleet) {
      std::vector<double> acc;
      for (const CompressionProfile& p : ue.lut) acc.push_back(p.accuracy);
      std::reverse(acc.begin(), acc.end());
      for (std::size_t i = 0; i < acc.size(); ++i) ue.lut[i].accuracy = acc[i];
    }
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(made_ue_step(k, st, c).action == made_ue_step(k, st, shuffled).action);
    }
  }
}

TEST_CASE("emitted actions are feasible for every policy") {
  std::mt19937_64 rng(55);
  for (PolicyKind kind : {PolicyKind::kMuMeda, PolicyKind::kMuMade, PolicyKind::kFixedAccuracy,
                          PolicyKind::kHybridFixedRate}) {
    Config c = three_ue_config(kind);
    const Policy policy(c);
    for (int s = 0; s < 50; ++s) {
      const SlotState st = oracle::random_state(rng, c);
      check_feasible(c, st, policy.decide(st));
    }
  }
}

TEST_CASE("per-slot decomposition equals the joint minimum on a small instance") {
  Config c = fleet_config({"A", "B"}, "deep_ce", 0.8, PolicyKind::kMuMeda);
  for (UEConfig& ue : c.fleet) {
    ue.lut.resize(3);
    ue.freq_set = {0.35e9, 0.7e9, 1.05e9, 1.4e9};
    ue.steps = StepSizes{2.0, 10.0, 1.0};
  }
  c.es.freq_set = {1.125e9, 2.25e9, 3.375e9, 4.5e9};
  const Policy policy(c);
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int points = 60;
  for (int s = 0; s < 10; ++s) {
    c.sim.v = std::pow(10.0, 2.0 + 4.0 * u(rng));
    const SlotState st = oracle::random_state(rng, c);
    const SlotDecision d = policy.decide(st);
    const double policy_cost = d.ue_cost[0] + d.ue_cost[1] + d.es_cost;

    // Enumerate every UE-0 x UE-1 x server option and add the cost terms.
    std::vector<std::vector<double>> ue_costs(2);
    double resolution = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      const oracle::GridResult g =
          oracle::brute_force_ue(UeObjective::kMinEnergy, c, k, st, false, points);
      resolution += g.resolution;
      const UEConfig& ue = c.fleet[k];
      for (std::size_t i = 0; i < 3; ++i) {
        for (double f : ue.freq_set) {
          ue_costs[k].push_back(
              oracle::ue_cost(UeObjective::kMinEnergy, c, k, st, false, i, f, 0).cost);
          const CompressionProfile& p = ue.lut[i];
          const double cap = std::min({max_rate(st.channel[k], ue),
                                       static_cast<double>(st.queues.q_ue[k]) * du_bits(p) / 0.05,
                                       du_bits(p) * f * p.j_offload});
          for (int j = 0; j < points; ++j) {
            const double r = cap > 0 && 0.05 - 1.0 / (f * p.j_offload) > 0 ? cap * j / (points - 1) : 0.0;
            ue_costs[k].push_back(
                oracle::ue_cost(UeObjective::kMinEnergy, c, k, st, true, i, f, r).cost);
          }
        }
      }
    }
    const std::vector<KnapsackItem> items = es_items(UeObjective::kMinEnergy, st, c);
    std::vector<double> es_costs;
    for (double f : c.es.freq_set) {
      es_costs.push_back(
          oracle::exhaustive_es(items, {f}, c.sim.v * (1 - c.es.gamma), 0.05, c.es.kappa).cost);
    }
    double joint = std::numeric_limits<double>::infinity();
    for (double a : ue_costs[0]) {
      for (double b : ue_costs[1]) {
        for (double e : es_costs) joint = std::min(joint, a + b + e);
      }
    }
    const double tol = 1e-9 * (oracle::cost_scale(UeObjective::kMinEnergy, c, 0, st) +
                               oracle::cost_scale(UeObjective::kMinEnergy, c, 1, st) +
                               std::abs(d.es_cost));
    CHECK(policy_cost <= joint + tol);
    CHECK(joint - policy_cost <= resolution + tol);
  }
}

TEST_CASE("ergodic spectral efficiency against Monte Carlo") {
  std::mt19937_64 rng(2);
  std::exponential_distribution<double> g(1.0);
  for (double snr : {0.5, 10.0, 1065.0}) {
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += std::log2(1.0 + snr * g(rng));
    CHECK(ergodic_spectral_efficiency(snr) == doctest::Approx(sum / n).epsilon(0.005));
  }
  CHECK(ergodic_spectral_efficiency(0.0) == 0.0);
}

TEST_CASE("min_stable_rate") {
  UEConfig ue = default_ue(0, "B", "deep_ce");
  ue.constraints.accuracy = 0.92;
  ue.arrival_mean = 0.0;
  CHECK(min_stable_rate(ue, 0.05) == 0.0);
  double prev = 0.0;
  for (double a : {0.25, 0.5, 1.0, 2.0}) {
    ue.arrival_mean = a;
    const double r = min_stable_rate(ue, 0.05);
    CHECK(r >= prev);
    prev = r;
  }
  ue.arrival_mean = 1e6;
  CHECK_THROWS_AS(min_stable_rate(ue, 0.05), ConfigError);
}

TEST_CASE("hybrid baseline honors its fixed rate and keeps the UE queue stable") {
  Config c = three_ue_config(PolicyKind::kHybridFixedRate);
  c.sim.horizon = 100000;
  c.sim.warmup = 25000;
  c.sim.v = 1e5;
  for (UEConfig& ue : c.fleet) ue.steps = StepSizes{5.0, 50.0, 1.0};
  const Policy policy(c);
  const std::vector<double> rates = policy.fixed_rates();
  std::vector<std::int64_t> last_q(3, 0);
  std::int64_t bad = 0;
  const RunSummary s = run(c, [&](const SlotRecord& r) {
    for (std::size_t k = 0; k < 3; ++k) {
      const UEAction& a = r.ue[k].action;
      if (a.offload && a.rate != 0.0 && a.rate != rates[k]) ++bad;
      last_q[k] = r.ue[k].q_ue;
    }
  });
  CHECK(bad == 0);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(static_cast<double>(last_q[k]) / 100000.0 < 1e-2);
    CHECK(s.ue[k].z_rate < 1e-2);
  }
}
