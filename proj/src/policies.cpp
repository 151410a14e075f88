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


#include "goc/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

namespace goc {

namespace {

// Slot constants of one UE's cost, shared by every candidate action.
class UeCost {
 public:
  UeCost(UeObjective objective, const UEConfig& ue, std::size_t k, const SlotState& state,
         double v, double gamma, double tau)
      : ue_(ue), k_(k), state_(state), tau_(tau) {
    const double mu = ue.steps.mu;
    coupling_ = static_cast<double>(ue.lut.size()) * mu * mu;
    q_ue_ = static_cast<double>(state.queues.q_ue[k]);
    backlog_ = mu * state.queues.z[k];
    if (objective == UeObjective::kMinEnergy) {
      energy_ = v * gamma * ue.delta;
      accuracy_ = ue.steps.nu * state.queues.y[k];
    } else {
      energy_ = ue.steps.lambda * state.queues.s[k];
      accuracy_ = v;
    }
  }

  double energy_coeff() const { return energy_; }

  // Q^TX of row i: L mu^2 (Q_UE - p_i Q_ES,i) + mu Z.
  double weight_q(std::size_t i) const {
    const QueueBank& q = state_.queues;
    return coupling_ * (q_ue_ - q.p_hat[k_][i] * static_cast<double>(q.q_es[k_][i])) +
           backlog_;
  }

  double evaluate(bool offload, std::size_t row, std::int64_t n, double e_tx,
                  double e_comp) const {
    const QueueBank& q = state_.queues;
    const double dn = static_cast<double>(n);
    const double es_term =
        offload ? q.p_hat[k_][row] * static_cast<double>(q.q_es[k_][row]) : 0.0;
    return coupling_ * dn * (es_term - q_ue_) + backlog_ * std::max(0.0, q_ue_ - dn) -
           accuracy_ * ue_.lut[row].accuracy + energy_ * (e_tx + e_comp);
  }

  double evaluate(const UEAction& a) const {
    const CompressionProfile& prof = ue_.lut[static_cast<std::size_t>(a.lut_index)];
    const std::int64_t n =
        a.offload ? n_offload(prof, a.f_d, a.rate, tau_) : n_local(prof, a.f_d, tau_);
    const double e_tx = a.offload ? tx_energy(a.rate, state_.channel[k_], ue_, tau_) : 0.0;
    return evaluate(a.offload, static_cast<std::size_t>(a.lut_index), n, e_tx,
                    comp_energy(a.f_d, ue_.kappa, tau_));
  }

 private:
  const UEConfig& ue_;
  std::size_t k_;
  const SlotState& state_;
  double tau_;
  double coupling_ = 0.0;
  double q_ue_ = 0.0;
  double backlog_ = 0.0;
  double energy_ = 0.0;
  double accuracy_ = 0.0;
};

bool better(double cost, double best) {
  if (!std::isfinite(best)) return cost < best;
  return cost < best - 1e-12 * std::max(1.0, std::abs(best));
}

UeObjective objective_of(PolicyKind kind) {
  return kind == PolicyKind::kMuMade ? UeObjective::kMaxAccuracy : UeObjective::kMinEnergy;
}

}  // namespace

double ue_slot_cost(UeObjective objective, const UEConfig& ue, std::size_t k,
                    const SlotState& state, const UEAction& action, double v, double gamma,
                    double tau) {
  return UeCost(objective, ue, k, state, v, gamma, tau).evaluate(action);
}

UEDecision solve_ue(UeObjective objective, std::size_t k, const SlotState& state,
                    const Config& config, const UeSearchOptions& options) {
  const UEConfig& ue = config.fleet[k];
  const double tau = config.sim.slot_duration;
  const ChannelState& ch = state.channel[k];
  const UeCost model(objective, ue, k, state, config.sim.v, config.es.gamma, tau);
  const double r_max = max_rate(ch, ue);
  const double q_ue = static_cast<double>(state.queues.q_ue[k]);

  std::size_t row_begin = 0;
  std::size_t row_end = ue.lut.size();
  if (options.only_row) {
    row_begin = static_cast<std::size_t>(*options.only_row);
    row_end = row_begin + 1;
  }

  UEDecision best;
  best.cost = std::numeric_limits<double>::infinity();
  auto consider = [&](const UEAction& a, double cost) {
    if (better(cost, best.cost)) best = UEDecision{a, cost};
  };

  if (!options.force_offload) {
    for (std::size_t i = row_begin; i < row_end; ++i) {
      for (double f : ue.freq_set) {
        const std::int64_t n = n_local(ue.lut[i], f, tau);
        consider(UEAction{false, static_cast<int>(i), f, 0.0},
                 model.evaluate(false, i, n, 0.0, comp_energy(f, ue.kappa, tau)));
      }
    }
  }

  for (std::size_t i = row_begin; i < row_end; ++i) {
    const CompressionProfile& prof = ue.lut[i];
    const double w = du_bits(prof);
    for (double f : ue.freq_set) {
      const double e_comp = comp_energy(f, ue.kappa, tau);
      const int row = static_cast<int>(i);
      const double usable = f > 0.0 ? tau - 1.0 / (f * prof.j_offload) : 0.0;
      const double cap = std::min(rate_cap(q_ue, w, tau, r_max), w * f * prof.j_offload);

      if (options.fixed_rate) {
        const double r = *options.fixed_rate;
        if (r > 0.0 && r <= r_max && r <= w * f * prof.j_offload) {
          const std::int64_t n = n_offload(prof, f, r, tau);
          consider(UEAction{true, row, f, r},
                   model.evaluate(true, i, n, tx_energy(r, ch, ue, tau), e_comp));
        } else if (options.force_offload) {
          consider(UEAction{true, row, f, 0.0}, model.evaluate(true, i, 0, 0.0, e_comp));
        }
        continue;
      }

      if (usable <= 0.0 || cap <= 0.0) {
        consider(UEAction{true, row, f, 0.0}, model.evaluate(true, i, 0, 0.0, e_comp));
        continue;
      }

      RateProblem p{model.weight_q(i), model.energy_coeff(), w, ue.bandwidth(), ch.gain_sq,
                    ue.channel.noise_psd, cap};
      const double r_star = optimal_rate(p);
      const std::int64_t n_max = n_offload(prof, f, cap, tau);
      auto rate_for = [&](std::int64_t n) {
        return n <= 0 ? 0.0 : std::min(cap, static_cast<double>(n) * w / usable);
      };
      auto cost_for = [&](std::int64_t n) {
        const double r = rate_for(n);
        return model.evaluate(true, i, n_offload(prof, f, r, tau), tx_energy(r, ch, ue, tau),
                              e_comp);
      };

      std::int64_t n = std::min(n_offload(prof, f, r_star, tau), n_max);
      double c = cost_for(n);
      if (n + 1 <= n_max) {
        const double up = cost_for(n + 1);
        if (up < c) {
          ++n;
          c = up;
          while (n + 1 <= n_max) {
            const double next = cost_for(n + 1);
            if (!(next < c)) break;
            ++n;
            c = next;
          }
        }
      }
      while (n > 0) {
        const double down = cost_for(n - 1);
        if (!(down <= c)) break;
        --n;
        c = down;
      }
      consider(UEAction{true, row, f, rate_for(n)}, c);
    }
  }
  return best;
}

UEDecision meda_ue_step(std::size_t k, const SlotState& state, const Config& config) {
  return solve_ue(UeObjective::kMinEnergy, k, state, config,
                  UeSearchOptions{config.sim.force_offload, std::nullopt, std::nullopt});
}

UEDecision made_ue_step(std::size_t k, const SlotState& state, const Config& config) {
  return solve_ue(UeObjective::kMaxAccuracy, k, state, config,
                  UeSearchOptions{config.sim.force_offload, std::nullopt, std::nullopt});
}

UEDecision fixed_accuracy_step(std::size_t k, const SlotState& state, const Config& config,
                               int rho_fixed) {
  const Lut& lut = config.fleet[k].lut;
  auto it = std::find_if(lut.begin(), lut.end(),
                         [&](const CompressionProfile& p) { return p.rho == rho_fixed; });
  if (it == lut.end()) {
    throw ConfigError("sim.rho_fixed", "no LUT row with rho " + std::to_string(rho_fixed) +
                                           " for UE " + std::to_string(k));
  }
  return solve_ue(UeObjective::kMinEnergy, k, state, config,
                  UeSearchOptions{config.sim.force_offload,
                                  static_cast<int>(it - lut.begin()), std::nullopt});
}

UEDecision hybrid_fixed_rate_step(std::size_t k, const SlotState& state, const Config& config,
                                  double fixed_rate) {
  return solve_ue(UeObjective::kMinEnergy, k, state, config,
                  UeSearchOptions{config.sim.force_offload, std::nullopt, fixed_rate});
}

std::vector<KnapsackItem> es_items(UeObjective objective, const SlotState& state,
                                   const Config& config) {
  const double tau = config.sim.slot_duration;
  std::vector<KnapsackItem> items;
  for (std::size_t k = 0; k < config.fleet.size(); ++k) {
    const UEConfig& ue = config.fleet[k];
    const double mu = ue.steps.mu;
    const double L = static_cast<double>(ue.lut.size());
    for (std::size_t i = 0; i < ue.lut.size(); ++i) {
      const double q = static_cast<double>(state.queues.q_es[k][i]);
      const double j = ue.lut[i].j_server;
      const double w = objective == UeObjective::kMinEnergy
                           ? (L * mu * mu * q + mu * state.queues.z[k]) * j
                           : q * j;
      items.push_back(KnapsackItem{static_cast<int>(k), static_cast<int>(i), w, q / (tau * j)});
    }
  }
  return items;
}

namespace {

ESDecision es_step(UeObjective objective, double energy_weight, const SlotState& state,
                   const Config& config) {
  const std::vector<KnapsackItem> items = es_items(objective, state, config);
  const EsAllocation best = es_allocate(items, config.es.freq_set, energy_weight,
                                        config.sim.slot_duration, config.es.kappa);
  ESDecision out;
  out.cost = best.cost;
  out.action.f_s = best.f_s;
  out.action.f_split.resize(config.fleet.size());
  for (std::size_t k = 0; k < config.fleet.size(); ++k) {
    out.action.f_split[k].assign(config.fleet[k].lut.size(), 0.0);
  }
  for (std::size_t j = 0; j < items.size(); ++j) {
    out.action.f_split[static_cast<std::size_t>(items[j].ue)]
                      [static_cast<std::size_t>(items[j].row)] = best.alloc[j];
  }
  return out;
}

}  // namespace

ESDecision meda_es_step(const SlotState& state, const Config& config) {
  return es_step(UeObjective::kMinEnergy, config.sim.v * (1.0 - config.es.gamma), state,
                 config);
}

ESDecision made_es_step(const SlotState& state, const Config& config) {
  return es_step(UeObjective::kMaxAccuracy, config.es.eta * state.queues.o, state, config);
}

double ergodic_spectral_efficiency(double mean_snr) {
  if (mean_snr <= 0.0) return 0.0;
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [mean_snr](double g) { return std::log2(1.0 + mean_snr * g) * std::exp(-g); };
  return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}

int reference_row(const UEConfig& ue) {
  int best = -1;
  for (std::size_t i = 0; i < ue.lut.size(); ++i) {
    if (ue.lut[i].accuracy + 1e-12 < ue.constraints.accuracy) continue;
    if (best < 0 || du_bits(ue.lut[i]) < du_bits(ue.lut[static_cast<std::size_t>(best)])) {
      best = static_cast<int>(i);
    }
  }
  if (best >= 0) return best;
  best = 0;
  for (std::size_t i = 1; i < ue.lut.size(); ++i) {
    if (ue.lut[i].accuracy > ue.lut[static_cast<std::size_t>(best)].accuracy) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

double min_stable_rate(const UEConfig& ue, double tau) {
  if (ue.arrival_mean <= 0.0) return 0.0;
  const CompressionProfile& prof = ue.lut[static_cast<std::size_t>(reference_row(ue))];
  const double f_top = ue.freq_set.back();
  const double usable = tau - 1.0 / (f_top * prof.j_offload);
  if (usable <= 0.0) {
    throw ConfigError("ues[" + std::to_string(ue.id) + "].freq_set",
                      "top clock cannot compress one DU within a slot");
  }
  const double dus = std::ceil(ue.arrival_mean - 1e-12);
  const double rate = dus * du_bits(prof) / usable;
  const double mean_snr = ue.p_tx_max * ue.channel.pathloss_gain /
                          (ue.channel.noise_psd * ue.bandwidth());
  const double ergodic = ue.bandwidth() * ergodic_spectral_efficiency(mean_snr);
  if (ergodic < rate || rate > du_bits(prof) * f_top * prof.j_offload) {
    throw ConfigError("ues[" + std::to_string(ue.id) + "].p_tx_max",
                      "ergodic capacity cannot sustain the arrival rate");
  }
  return rate;
}

Policy::Policy(const Config& config) : config_(config) {
  if (config.sim.policy == PolicyKind::kHybridFixedRate) {
    for (const UEConfig& ue : config.fleet) {
      fixed_rates_.push_back(min_stable_rate(ue, config.sim.slot_duration));
    }
  }
  if (config.sim.policy == PolicyKind::kFixedAccuracy) {
    for (std::size_t k = 0; k < config.fleet.size(); ++k) {
      const Lut& lut = config.fleet[k].lut;
      auto it = std::find_if(lut.begin(), lut.end(), [&](const CompressionProfile& p) {
        return p.rho == config.sim.rho_fixed;
      });
      if (it == lut.end()) {
        throw ConfigError("sim.rho_fixed", "no LUT row with rho " +
                                               std::to_string(config.sim.rho_fixed) +
                                               " for UE " + std::to_string(k));
      }
      fixed_rows_.push_back(static_cast<int>(it - lut.begin()));
    }
  }
}

VirtualSet Policy::virtual_set() const {
  return config_.sim.policy == PolicyKind::kMuMade ? VirtualSet::kDelayEnergy
                                                   : VirtualSet::kDelayAccuracy;
}

SlotDecision Policy::decide(const SlotState& state) const {
  const std::size_t K = config_.fleet.size();
  SlotDecision out;
  out.ue.resize(K);
  out.ue_cost.resize(K);
  const UeObjective objective = objective_of(config_.sim.policy);
  for (std::size_t k = 0; k < K; ++k) {
    UeSearchOptions opts;
    opts.force_offload = config_.sim.force_offload;
    if (config_.sim.policy == PolicyKind::kFixedAccuracy) opts.only_row = fixed_rows_[k];
    if (config_.sim.policy == PolicyKind::kHybridFixedRate) opts.fixed_rate = fixed_rates_[k];
    const UEDecision d = solve_ue(objective, k, state, config_, opts);
    out.ue[k] = d.action;
    out.ue_cost[k] = d.cost;
  }
  const ESDecision es = objective == UeObjective::kMaxAccuracy ? made_es_step(state, config_)
                                                               : meda_es_step(state, config_);
  out.es = es.action;
  out.es_cost = es.cost;
  return out;
}

}  // namespace goc
