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


#include "goc/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace goc {

std::int64_t floor_du(double x) {
  return static_cast<std::int64_t>(std::floor(x + 1e-9 * std::max(1.0, std::abs(x))));
}

std::int64_t n_offload(const CompressionProfile& profile, double f_d, double rate, double tau) {
  if (rate <= 0.0) return 0;
  if (f_d <= 0.0) throw ContractError("n_offload: positive rate with a stopped clock");
  const double w = du_bits(profile);
  const double compress_rate = w * f_d * profile.j_offload;
  if (rate > compress_rate * (1.0 + 1e-9)) {
    throw ContractError("n_offload: rate exceeds the compression throughput");
  }
  const double setup = 1.0 / (f_d * profile.j_offload);
  return std::max<std::int64_t>(0, floor_du((tau - setup) / (w / rate)));
}

std::int64_t n_local(const CompressionProfile& profile, double f_d, double tau) {
  if (f_d <= 0.0) return 0;
  return floor_du(tau * f_d * profile.j_local);
}

std::int64_t n_server(const CompressionProfile& profile, double f_ki, double tau) {
  if (f_ki <= 0.0) return 0;
  return floor_du(tau * f_ki * profile.j_server);
}

QueueBank::QueueBank(const std::vector<UEConfig>& fleet) {
  const std::size_t k = fleet.size();
  q_ue.assign(k, 0);
  z.assign(k, 0.0);
  y.assign(k, 0.0);
  s.assign(k, 0.0);
  for (const UEConfig& ue : fleet) {
    const std::size_t l = ue.lut.size();
    q_es.emplace_back(l, 0);
    p_hat.emplace_back(l, 1.0 / static_cast<double>(l));
    p_count.emplace_back(l, 0);
  }
}

double QueueBank::total_queue(std::size_t k) const {
  double total = static_cast<double>(q_ue[k]);
  for (std::size_t i = 0; i < q_es[k].size(); ++i) {
    total += p_hat[k][i] * static_cast<double>(q_es[k][i]);
  }
  return total;
}

std::int64_t QueueBank::stored_dus() const {
  std::int64_t n = 0;
  for (std::size_t k = 0; k < q_ue.size(); ++k) {
    n += q_ue[k];
    for (std::int64_t q : q_es[k]) n += q;
  }
  return n;
}

bool drift_within(double drift, double bound, double scale, double tol) {
  const double ulps = 16.0 * std::numeric_limits<double>::epsilon() * scale;
  return drift <= bound + tol * std::max(1.0, std::abs(bound)) + ulps;
}

bool DriftCheck::holds(double tol) const {
  return drift_within(z_drift, z_bound, z_scale, tol) &&
         drift_within(aux_drift, aux_bound, aux_scale, tol) && queue_bound_slack >= -tol;
}

std::int64_t QueueTransition::classified() const {
  std::int64_t n = 0;
  for (std::int64_t d : local_done) n += d;
  for (std::size_t k = 0; k < es_done.size(); ++k) {
    for (std::int64_t d : es_done[k]) n += d;
  }
  return n;
}

std::int64_t QueueTransition::arrived() const {
  std::int64_t n = 0;
  for (std::int64_t a : arrivals) n += a;
  return n;
}

bool QueueTransition::drift_ok(double tol) const {
  for (const DriftCheck& d : drift) {
    if (!d.holds(tol)) return false;
  }
  return drift_within(o_drift, o_bound, o_scale, tol);
}

namespace {

// X(t+1) = max(0, X + step * excess); returns the new value and fills the
// realized half-drift and its quadratic bound.
double virtual_step(double x, double step, double excess, double* drift, double* bound,
                    double* scale) {
  const double inc = step * excess;
  const double next = std::max(0.0, x + inc);
  if (drift) *drift = 0.5 * (next - x) * (next + x);
  if (bound) *bound = 0.5 * inc * inc + x * inc;
  if (scale) *scale = 0.5 * std::max(x, next) * std::max(x, next);
  return next;
}

// rhs - lhs of (max(0,q-b)+a)^2 <= q^2+a^2+b^2+2q(a-b), relative to the larger side.
double queue_bound_slack(double q, double b, double a) {
  const double lhs = std::pow(std::max(0.0, q - b) + a, 2);
  const double rhs = q * q + a * a + b * b + 2.0 * q * (a - b);
  return (rhs - lhs) / std::max(1.0, std::max(std::abs(lhs), std::abs(rhs)));
}

}  // namespace

void update_virtual(QueueBank& bank, const std::vector<UEConfig>& fleet, const ESConfig& es,
                    const VirtualObservation& obs, VirtualSet set, double tau,
                    QueueTransition* out) {
  if (out) out->drift.resize(fleet.size());
  for (std::size_t k = 0; k < fleet.size(); ++k) {
    const UEConfig& ue = fleet[k];
    DriftCheck* d = out ? &out->drift[k] : nullptr;
    bank.z[k] = virtual_step(bank.z[k], ue.steps.mu,
                             bank.total_queue(k) - ue.queue_target(tau),
                             d ? &d->z_drift : nullptr, d ? &d->z_bound : nullptr,
                             d ? &d->z_scale : nullptr);
    if (set == VirtualSet::kDelayAccuracy) {
      bank.y[k] = virtual_step(bank.y[k], ue.steps.nu,
                               ue.constraints.accuracy - obs.accuracy[k],
                               d ? &d->aux_drift : nullptr, d ? &d->aux_bound : nullptr,
                               d ? &d->aux_scale : nullptr);
    } else {
      bank.s[k] = virtual_step(bank.s[k], ue.steps.lambda,
                               obs.ue_energy[k] - ue.constraints.ue_energy_j,
                               d ? &d->aux_drift : nullptr, d ? &d->aux_bound : nullptr,
                               d ? &d->aux_scale : nullptr);
    }
  }
  if (set == VirtualSet::kDelayEnergy) {
    bank.o = virtual_step(bank.o, es.eta, obs.es_energy - es.energy_constraint,
                          out ? &out->o_drift : nullptr, out ? &out->o_bound : nullptr,
                          out ? &out->o_scale : nullptr);
  }
}

QueueTransition advance_slot(QueueBank& bank, const std::vector<UEConfig>& fleet,
                             const ESConfig& es, const std::vector<UEAction>& actions,
                             const ESAction& es_action,
                             const std::vector<std::int64_t>& arrivals,
                             const VirtualObservation& obs, VirtualSet set, double tau) {
  const std::size_t K = fleet.size();
  QueueTransition tr;
  tr.n_ue.assign(K, 0);
  tr.moved.assign(K, 0);
  tr.local_done.assign(K, 0);
  tr.arrivals = arrivals;
  tr.n_es.resize(K);
  tr.es_done.resize(K);
  std::vector<double> slack(K, 1.0);

  for (std::size_t k = 0; k < K; ++k) {
    const UEConfig& ue = fleet[k];
    const UEAction& a = actions[k];
    const CompressionProfile& prof = ue.lut[static_cast<std::size_t>(a.lut_index)];
    tr.n_ue[k] = a.offload ? n_offload(prof, a.f_d, a.rate, tau) : n_local(prof, a.f_d, tau);
    const std::int64_t q = bank.q_ue[k];
    tr.moved[k] = std::min(tr.n_ue[k], q);
    if (!a.offload) tr.local_done[k] = tr.moved[k];
    slack[k] = std::min(slack[k], queue_bound_slack(static_cast<double>(q),
                                               static_cast<double>(tr.n_ue[k]),
                                               static_cast<double>(arrivals[k])));
    bank.q_ue[k] = std::max<std::int64_t>(0, q - tr.n_ue[k]) + arrivals[k];
  }

  for (std::size_t k = 0; k < K; ++k) {
    const UEConfig& ue = fleet[k];
    const std::size_t L = ue.lut.size();
    tr.n_es[k].assign(L, 0);
    tr.es_done[k].assign(L, 0);
    for (std::size_t i = 0; i < L; ++i) {
      const double f = es_action.f_split.empty() ? 0.0 : es_action.f_split[k][i];
      const std::int64_t n = n_server(ue.lut[i], f, tau);
      const std::int64_t q = bank.q_es[k][i];
      const std::int64_t in =
          (actions[k].offload && static_cast<std::size_t>(actions[k].lut_index) == i)
              ? tr.moved[k]
              : 0;
      tr.n_es[k][i] = n;
      tr.es_done[k][i] = std::min(n, q);
      slack[k] = std::min(slack[k], queue_bound_slack(static_cast<double>(q),
                                                 static_cast<double>(n),
                                                 static_cast<double>(in)));
      bank.q_es[k][i] = std::max<std::int64_t>(0, q - n) + in;
    }
    if (actions[k].offload && tr.moved[k] > 0) {
      const std::size_t i = static_cast<std::size_t>(actions[k].lut_index);
      ++bank.p_count[k][i];
      std::int64_t total = 0;
      for (std::int64_t c : bank.p_count[k]) total += c;
      for (std::size_t j = 0; j < L; ++j) {
        bank.p_hat[k][j] = static_cast<double>(bank.p_count[k][j]) / static_cast<double>(total);
      }
    }
  }

  update_virtual(bank, fleet, es, obs, set, tau, &tr);
  for (std::size_t k = 0; k < K; ++k) tr.drift[k].queue_bound_slack = slack[k];
  return tr;
}

double delay_estimate(double avg_q_tot, double arrival_mean, double tau) {
  if (avg_q_tot <= 0.0) return 0.0;
  return avg_q_tot / (arrival_mean / tau);
}

ArrivalProcess::ArrivalProcess(double mean, ArrivalModel model, std::uint64_t seed)
    : mean_(mean), model_(model), rng_(seed), poisson_(mean > 0.0 ? mean : 1.0) {}

std::int64_t ArrivalProcess::next() {
  const std::int64_t t = t_++;
  if (mean_ <= 0.0) return 0;
  if (model_ == ArrivalModel::kPoisson) return poisson_(rng_);
  return static_cast<std::int64_t>(std::floor((t + 1) * mean_)) -
         static_cast<std::int64_t>(std::floor(t * mean_));
}

}  // namespace goc
