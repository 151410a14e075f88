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


#ifndef GOC_SCENARIOS_HPP_
#define GOC_SCENARIOS_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "goc/engine.hpp"
#include "goc/model.hpp"

namespace goc {

// One homogeneous UE with the shared defaults: 2 DU/slot, 0.2 s delay target,
// 1.4 GHz decile clocks, channel preset `channel`.
UEConfig default_ue(int id, std::string_view channel, std::string_view lut, double tau = 0.05);

// Server with 4.5 GHz decile clocks.
ESConfig default_es();

// K UEs on `channels` (one entry per UE), all with `lut` and accuracy target g_avg.
Config fleet_config(const std::vector<std::string>& channels, std::string_view lut, double g_avg,
                    PolicyKind policy);

// Three UEs: (A, 10 kappa0), (A, 20 kappa0), (B, 30 kappa0).
Config three_ue_config(PolicyKind policy);

struct ExperimentGroup {
  std::string label;
  Config config;
  std::vector<double> v_list;
  // Horizon for a given V is max(config.sim.horizon, slots_per_v * V), with
  // a quarter of it as warm-up. Large-V runs need longer to settle.
  double slots_per_v = 0.0;

  std::int64_t horizon_for(double v) const;
};

// Extra per-experiment outputs requested next to the summary table.
struct ExperimentPlan {
  std::string name;
  std::vector<ExperimentGroup> groups;
  // Histogram of offload fractions from the run with this label and V.
  std::string histogram_label;
  double histogram_v = 0.0;
  // Per-slot UE energy traces for these group labels (first V of each).
  std::vector<std::string> trace_labels;
};

// Runs every V of a group. Run i uses seed derive_seed(config.sim.rng_seed, i),
// so groups sharing a base seed see the same channels and arrivals at
// matching V indices. `sink_for(i)` may return a per-run slot sink.
std::vector<RunSummary> run_group(const ExperimentGroup& group,
                                  const std::function<SlotSink(std::size_t)>& sink_for = {});

std::vector<std::string> experiment_names();
bool is_experiment(std::string_view name);
// Throws std::out_of_range for unknown names.
ExperimentPlan experiment_plan(std::string_view name);

}  // namespace goc

#endif  // GOC_SCENARIOS_HPP_
