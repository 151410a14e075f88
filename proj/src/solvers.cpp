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


#include "goc/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace goc {

double rate_cap(double q_ue, double w_bits, double tau, double r_max) {
  return std::max(0.0, std::min(r_max, q_ue * w_bits / tau));
}

double optimal_rate(const RateProblem& p) {
  if (p.weight_q <= 0.0 || p.r_cap <= 0.0 || p.gain_sq <= 0.0) return 0.0;
  if (p.energy_coeff <= 0.0) return p.r_cap;
  const double arg = p.weight_q * p.gain_sq /
                     (p.w_bits * p.energy_coeff * std::numbers::ln2 * p.noise_psd);
  if (!(arg > 1.0)) return 0.0;
  const double r = p.bandwidth / std::numbers::ln2 * std::log(arg);
  return std::clamp(r, 0.0, p.r_cap);
}

double rate_objective(const RateProblem& p, double rate, double tau) {
  double energy = 0.0;
  if (rate > 0.0) {
    energy = p.energy_coeff * tau * p.bandwidth * p.noise_psd / p.gain_sq *
             std::expm1(rate * std::numbers::ln2 / p.bandwidth);
  }
  return -p.weight_q * tau * rate / p.w_bits + energy;
}

std::vector<double> knapsack_greedy(std::span<const KnapsackItem> items, double budget) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const KnapsackItem& x = items[a];
    const KnapsackItem& y = items[b];
    if (x.weight != y.weight) return x.weight > y.weight;
    if (x.ue != y.ue) return x.ue < y.ue;
    return x.row < y.row;
  });
  std::vector<double> alloc(items.size(), 0.0);
  double remaining = std::max(0.0, budget);
  for (std::size_t idx : order) {
    if (remaining <= 0.0) break;
    const double take = std::min(remaining, std::max(0.0, items[idx].cap));
    alloc[idx] = take;
    remaining -= take;
  }
  return alloc;
}

EsAllocation es_allocate(std::span<const KnapsackItem> items, std::span<const double> freq_set,
                         double energy_weight, double tau, double kappa) {
  EsAllocation best;
  bool have = false;
  std::vector<KnapsackItem> capped(items.begin(), items.end());
  for (double f : freq_set) {
    for (std::size_t j = 0; j < items.size(); ++j) {
      capped[j].cap = std::min(f, items[j].cap);
    }
    std::vector<double> alloc = knapsack_greedy(capped, f);
    double gain = 0.0;
    for (std::size_t j = 0; j < items.size(); ++j) gain += items[j].weight * alloc[j];
    const double cost = -tau * gain + energy_weight * tau * kappa * f * f * f;
    if (!have || cost < best.cost) {
      best = EsAllocation{f, std::move(alloc), cost};
      have = true;
    }
  }
  return best;
}

}  // namespace goc
