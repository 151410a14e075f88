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


#include "goc/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace goc {

namespace {

constexpr double kKappa0 = 1.097e-27;

}  // namespace

UEConfig default_ue(int id, std::string_view channel, std::string_view lut, double tau) {
  UEConfig ue;
  ue.id = id;
  ue.lut_name = std::string(lut);
  ue.lut = lut_preset(lut);
  ue.freq_set = decile_frequencies(1.4e9);
  ue.kappa = kKappa0;
  ue.p_tx_max = 0.1;
  ue.channel = channel_preset(channel, tau);
  ue.arrival_mean = 2.0;
  ue.constraints.delay_s = 0.2;
  return ue;
}

ESConfig default_es() {
  ESConfig es;
  es.freq_set = decile_frequencies(4.5e9);
  es.kappa = kKappa0;
  return es;
}

std::int64_t ExperimentGroup::horizon_for(double v) const {
  const double scaled = std::ceil(slots_per_v * v);
  return std::max(config.sim.horizon, static_cast<std::int64_t>(scaled));
}

std::vector<RunSummary> run_group(const ExperimentGroup& group,
                                  const std::function<SlotSink(std::size_t)>& sink_for) {
  std::vector<RunSummary> out;
  out.reserve(group.v_list.size());
  for (std::size_t i = 0; i < group.v_list.size(); ++i) {
    Config c = group.config;
    c.sim.v = group.v_list[i];
    c.sim.horizon = group.horizon_for(c.sim.v);
    c.sim.warmup = c.sim.horizon / 4;
    c.sim.rng_seed = derive_seed(group.config.sim.rng_seed, i);
    RunSummary s = run(c, sink_for ? sink_for(i) : SlotSink{});
    s.label = group.label;
    out.push_back(std::move(s));
  }
  return out;
}

Config fleet_config(const std::vector<std::string>& channels, std::string_view lut, double g_avg,
                    PolicyKind policy) {
  Config c;
  c.sim.policy = policy;
  for (std::size_t k = 0; k < channels.size(); ++k) {
    UEConfig ue = default_ue(static_cast<int>(k), channels[k], lut, c.sim.slot_duration);
    ue.constraints.accuracy = g_avg;
    ue.delta = 1.0 / static_cast<double>(channels.size());
    c.fleet.push_back(std::move(ue));
  }
  c.es = default_es();
  return c;
}

Config three_ue_config(PolicyKind policy) {
  Config c = fleet_config({"A", "A", "B"}, "deep_short", 0.92, policy);
  const double scale[] = {10.0, 20.0, 30.0};
  for (std::size_t k = 0; k < 3; ++k) c.fleet[k].kappa = scale[k] * kKappa0;
  return c;
}

namespace {

void set_steps(Config& c, double mu, double nu, double lambda, double eta) {
  for (UEConfig& ue : c.fleet) ue.steps = StepSizes{mu, nu, lambda};
  c.es.eta = eta;
}

std::string percent_label(double g) {
  return std::to_string(static_cast<int>(g * 1000.0 + 0.5));  // per mille
}

ExperimentPlan meda_channel_b_offload() {
  ExperimentPlan plan;
  plan.name = "meda_channelB_offload";
  for (double g : {0.70, 0.80, 0.915}) {
    Config c = fleet_config({"B", "B", "B", "B", "B"}, "deep_ce", g, PolicyKind::kMuMeda);
    c.sim.force_offload = true;
    c.sim.horizon = 100000;
    set_steps(c, 20.0, 200.0, 1.0, 1.0);
    plan.groups.push_back({"deep_g" + percent_label(g), c, default_v_grid(), 0.0});
  }
  return plan;
}

ExperimentPlan meda_opportunistic() {
  ExperimentPlan plan;
  plan.name = "meda_opportunistic";
  for (double g : {0.70, 0.80, 0.915}) {
    for (bool forced : {true, false}) {
      Config c = fleet_config({"A", "A", "B", "B", "B"}, "deep_ce", g, PolicyKind::kMuMeda);
      c.sim.force_offload = forced;
      c.sim.horizon = 100000;
      set_steps(c, 5.0, 50.0, 1.0, 1.0);
      plan.groups.push_back(
          {std::string(forced ? "forced_g" : "opportunistic_g") + percent_label(g), c,
           default_v_grid(), 0.1});
    }
  }
  plan.histogram_label = "opportunistic_g700";
  plan.histogram_v = 1e6;
  return plan;
}

ExperimentPlan baselines_k3() {
  ExperimentPlan plan;
  plan.name = "baselines_k3";
  Config dynamic = three_ue_config(PolicyKind::kMuMeda);
  Config fixed = three_ue_config(PolicyKind::kFixedAccuracy);
  for (UEConfig& ue : fixed.fleet) {
    ue.lut_name = "short_ce";
    ue.lut = short_ce_lut();
  }
  fixed.sim.rho_fixed = 8;
  Config hybrid = three_ue_config(PolicyKind::kHybridFixedRate);
  for (Config* c : {&dynamic, &fixed, &hybrid}) {
    c->sim.horizon = 100000;
    set_steps(*c, 5.0, 50.0, 1.0, 1.0);
  }
  plan.groups.push_back({"dynamic", dynamic, {1e5}, 0.0});
  plan.groups.push_back({"fixed_accuracy", fixed, {1e5}, 0.0});
  plan.groups.push_back({"hybrid_fixed_rate", hybrid, {1e5}, 0.0});
  plan.trace_labels = {"dynamic", "fixed_accuracy", "hybrid_fixed_rate"};
  return plan;
}

ExperimentPlan made_k3() {
  ExperimentPlan plan;
  plan.name = "made_k3";
  Config c = three_ue_config(PolicyKind::kMuMade);
  c.sim.horizon = 600000;
  set_steps(c, 10.0, 1.0, 2000.0, 2000.0);
  plan.groups.push_back({"made", c, default_v_grid(), 0.1});
  plan.histogram_label = "made";
  plan.histogram_v = 1e5;
  return plan;
}

}  // namespace

std::vector<std::string> experiment_names() {
  return {"meda_channelB_offload", "meda_opportunistic", "baselines_k3", "made_k3"};
}

bool is_experiment(std::string_view name) {
  const std::vector<std::string> names = experiment_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ExperimentPlan experiment_plan(std::string_view name) {
  if (name == "meda_channelB_offload") return meda_channel_b_offload();
  if (name == "meda_opportunistic") return meda_opportunistic();
  if (name == "baselines_k3") return baselines_k3();
  if (name == "made_k3") return made_k3();
  throw std::out_of_range("unknown experiment '" + std::string(name) + "'");
}

}  // namespace goc
