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


#ifndef GOC_SOLVERS_HPP_
#define GOC_SOLVERS_HPP_

#include <span>
#include <vector>

namespace goc {

// One-dimensional rate subproblem of a UE for a fixed (rho, f_d):
//   minimize  -weight_q tau R / w_bits + energy_coeff tau B N0 / g (2^(R/B) - 1)
//   over      0 <= R <= r_cap.
struct RateProblem {
  double weight_q = 0.0;      // Q^TX
  double energy_coeff = 0.0;  // V gamma delta (min-energy) or lambda S (max-accuracy)
  double w_bits = 1.0;
  double bandwidth = 1.0;
  double gain_sq = 0.0;
  double noise_psd = 1.0;
  double r_cap = 0.0;
};

// min(R_max, Q_UE W / tau): the rate that would drain the UE queue.
double rate_cap(double q_ue, double w_bits, double tau, double r_max);

// Closed-form KKT solution, clamped to [0, r_cap]. Returns r_cap when
// energy_coeff == 0 and weight_q > 0, and 0 when weight_q <= 0 or the
// channel is dead.
double optimal_rate(const RateProblem& p);

// Objective of the rate subproblem (tau taken as 1 unless given).
double rate_objective(const RateProblem& p, double rate, double tau = 1.0);

struct KnapsackItem {
  int ue = 0;
  int row = 0;
  double weight = 0.0;  // value per Hz
  double cap = 0.0;     // Hz
};

// Greedy fractional knapsack: items by weight descending (ties by (ue, row)
// ascending), each takes min(remaining budget, cap). Returns allocations in
// the input order.
std::vector<double> knapsack_greedy(std::span<const KnapsackItem> items, double budget);

struct EsAllocation {
  double f_s = 0.0;
  std::vector<double> alloc;  // input order
  double cost = 0.0;
};

// For every server clock f in `freq_set`, caps each item at min(f, cap_q)
// where cap_q = item.cap (the queue-draining share), runs the greedy split
// and evaluates  -tau sum weight * alloc + energy_weight tau kappa f^3.
// Returns the cheapest; ties go to the smaller clock.
EsAllocation es_allocate(std::span<const KnapsackItem> items, std::span<const double> freq_set,
                         double energy_weight, double tau, double kappa);

}  // namespace goc

#endif  // GOC_SOLVERS_HPP_
