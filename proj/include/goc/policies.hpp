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


#ifndef GOC_POLICIES_HPP_
#define GOC_POLICIES_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "goc/actions.hpp"
#include "goc/channel.hpp"
#include "goc/model.hpp"
#include "goc/queueing.hpp"
#include "goc/solvers.hpp"

namespace goc {

// Everything a policy may look at when deciding slot t.
struct SlotState {
  std::int64_t slot = 0;
  std::vector<ChannelState> channel;
  QueueBank queues;
};

// Per-UE objective family: drift terms plus either V gamma delta * energy and
// -nu Y G (min-energy) or lambda S * energy and -V G (max-accuracy).
enum class UeObjective { kMinEnergy, kMaxAccuracy };

struct UeSearchOptions {
  bool force_offload = false;
  std::optional<int> only_row;       // restrict the LUT to one row
  std::optional<double> fixed_rate;  // transmit at exactly this rate when offloading
};

struct UEDecision {
  UEAction action;
  double cost = 0.0;
};

// Per-slot UE cost with the exact floored DU counts:
//   L mu^2 N (d p_i Q_ES,i - Q_UE) + mu Z max(0, Q_UE - N) + accuracy + energy terms.
double ue_slot_cost(UeObjective objective, const UEConfig& ue, std::size_t k,
                    const SlotState& state, const UEAction& action, double v, double gamma,
                    double tau);

// Exhaustive search over (d, row, f_d); the rate for each offloading pair
// starts from the closed-form optimum and walks the floor boundaries
// n W / (tau - 1/(f_d J_d)) of the DU count, on which the exact cost is
// convex. Offload/local ties resolve to local; remaining ties to the lower
// row, then lower frequency, then lower rate.
UEDecision solve_ue(UeObjective objective, std::size_t k, const SlotState& state,
                    const Config& config, const UeSearchOptions& options);

UEDecision meda_ue_step(std::size_t k, const SlotState& state, const Config& config);
UEDecision made_ue_step(std::size_t k, const SlotState& state, const Config& config);
UEDecision fixed_accuracy_step(std::size_t k, const SlotState& state, const Config& config,
                               int rho_fixed);
UEDecision hybrid_fixed_rate_step(std::size_t k, const SlotState& state, const Config& config,
                                  double fixed_rate);

struct ESDecision {
  ESAction action;
  double cost = 0.0;
};

// Knapsack items for every (k, i) queue; weight (L mu^2 Q + mu Z) J_s for the
// min-energy family, Q J_s for max-accuracy; cap Q / (tau J_s).
std::vector<KnapsackItem> es_items(UeObjective objective, const SlotState& state,
                                   const Config& config);

ESDecision meda_es_step(const SlotState& state, const Config& config);
ESDecision made_es_step(const SlotState& state, const Config& config);

// E[log2(1 + snr g)] for g ~ Exp(1), by quadrature over [0, inf).
double ergodic_spectral_efficiency(double mean_snr);

// Smallest fixed rate that ships ceil(A) DUs per slot at the most compact
// row meeting the UE's accuracy target (first-DU delay at the top clock).
// Throws ConfigError if the Rayleigh-ergodic capacity at p_max is below it.
double min_stable_rate(const UEConfig& ue, double tau);

// Which row min_stable_rate sizes the rate for.
int reference_row(const UEConfig& ue);

struct SlotDecision {
  std::vector<UEAction> ue;
  std::vector<double> ue_cost;
  ESAction es;
  double es_cost = 0.0;
};

// Dispatches on config.sim.policy. Precomputes the fixed rates of the hybrid
// baseline at construction.
class Policy {
 public:
  explicit Policy(const Config& config);

  SlotDecision decide(const SlotState& state) const;
  VirtualSet virtual_set() const;
  const std::vector<double>& fixed_rates() const { return fixed_rates_; }

 private:
  const Config& config_;
  std::vector<double> fixed_rates_;
  std::vector<int> fixed_rows_;
};

}  // namespace goc

#endif  // GOC_POLICIES_HPP_
