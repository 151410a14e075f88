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


#ifndef GOC_QUEUEING_HPP_
#define GOC_QUEUEING_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "goc/actions.hpp"
#include "goc/model.hpp"

namespace goc {

// Raised when a caller asks for a quantity outside its domain (for instance
// a rate the UE cannot compress fast enough to feed).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// floor() that absorbs round-off just below an integer (1e-9 relative), so
// that e.g. a server share of exactly Q / (tau J) drains Q DUs.
std::int64_t floor_du(double x);

// DUs offloaded in one slot at `rate` after the first-DU compression delay.
// Requires rate <= W f_d J_d and f_d > 0 (throws ContractError otherwise).
std::int64_t n_offload(const CompressionProfile& profile, double f_d, double rate, double tau);

// DUs compressed and classified locally in one slot.
std::int64_t n_local(const CompressionProfile& profile, double f_d, double tau);

// DUs classified by the server at clock share f_ki.
std::int64_t n_server(const CompressionProfile& profile, double f_ki, double tau);

// Physical queues (DUs), virtual queues, and the running estimate of how
// often each compression row is used by offloading slots.
struct QueueBank {
  std::vector<std::int64_t> q_ue;
  std::vector<std::vector<std::int64_t>> q_es;  // [k][lut index]
  std::vector<double> z;  // latency
  std::vector<double> y;  // accuracy (min-energy policy)
  std::vector<double> s;  // UE energy (max-accuracy policy)
  double o = 0.0;         // ES energy (max-accuracy policy)
  std::vector<std::vector<double>> p_hat;
  std::vector<std::vector<std::int64_t>> p_count;

  QueueBank() = default;
  explicit QueueBank(const std::vector<UEConfig>& fleet);

  std::size_t size() const { return q_ue.size(); }
  std::size_t rows(std::size_t k) const { return q_es[k].size(); }

  // Q_UE + sum_i p_i Q_ES,i.
  double total_queue(std::size_t k) const;
  std::int64_t stored_dus() const;

  bool operator==(const QueueBank&) const = default;
};

// Which virtual queues are live: latency + accuracy (min-energy family), or
// latency + UE energy + ES energy (max-accuracy).
enum class VirtualSet { kDelayAccuracy, kDelayEnergy };

struct VirtualObservation {
  std::vector<double> accuracy;   // G(rho_k(t)) charged this slot
  std::vector<double> ue_energy;  // E_comp + E_tx this slot
  double es_energy = 0.0;
};

// True when drift <= bound up to tol relative to |bound| plus a few ulps of scale.
bool drift_within(double drift, double bound, double scale, double tol = 1e-9);

// Drift-bound checks for one slot. Drift = (X(t+1)^2 - X(t)^2) / 2, bound is
// the one-step quadratic upper bound. queue_bound_slack is min over the UE's physical
// queues of rhs - lhs of (max(0,Q-b)+A)^2 <= Q^2+A^2+b^2+2Q(A-b). The
// scale fields hold max(X(t), X(t+1))^2 / 2 and size the round-off allowance.
struct DriftCheck {
  double z_drift = 0.0;
  double z_bound = 0.0;
  double z_scale = 0.0;
  double aux_drift = 0.0;  // Y or S
  double aux_bound = 0.0;
  double aux_scale = 0.0;
  double queue_bound_slack = 0.0;

  bool holds(double tol = 1e-9) const;
};

struct QueueTransition {
  std::vector<std::int64_t> n_ue;    // N_UE before the min(N, Q) clamp
  std::vector<std::int64_t> moved;   // DUs that left each UE queue
  std::vector<std::int64_t> local_done;  // of which classified on the UE
  std::vector<std::vector<std::int64_t>> n_es;
  std::vector<std::vector<std::int64_t>> es_done;  // DUs classified per ES queue
  std::vector<std::int64_t> arrivals;
  std::vector<DriftCheck> drift;
  double o_drift = 0.0;
  double o_bound = 0.0;
  double o_scale = 0.0;

  std::int64_t classified() const;
  std::int64_t arrived() const;
  bool drift_ok(double tol = 1e-9) const;
};

// Applies one slot: drains/fills the UE queues, moves offloaded DUs into the
// ES queue of the chosen row, drains ES queues, updates p_hat on offloading
// slots that moved DUs, then the virtual queues.
QueueTransition advance_slot(QueueBank& bank, const std::vector<UEConfig>& fleet,
                             const ESConfig& es, const std::vector<UEAction>& actions,
                             const ESAction& es_action,
                             const std::vector<std::int64_t>& arrivals,
                             const VirtualObservation& obs, VirtualSet set, double tau);

// Virtual-queue step on a bank whose physical queues are already at t+1.
// Fills the drift fields of `out` when given.
void update_virtual(QueueBank& bank, const std::vector<UEConfig>& fleet, const ESConfig& es,
                    const VirtualObservation& obs, VirtualSet set, double tau,
                    QueueTransition* out = nullptr);

// Little's law: mean queue / (arrivals per second).
double delay_estimate(double avg_q_tot, double arrival_mean, double tau);

// Per-UE DU arrivals. Poisson with the configured mean, or the deterministic
// floor((t+1)A) - floor(tA) sequence whose running mean is A.
class ArrivalProcess {
 public:
  ArrivalProcess(double mean, ArrivalModel model, std::uint64_t seed);
  std::int64_t next();

 private:
  double mean_;
  ArrivalModel model_;
  std::mt19937_64 rng_;
  std::poisson_distribution<std::int64_t> poisson_;
  std::int64_t t_ = 0;
};

}  // namespace goc

#endif  // GOC_QUEUEING_HPP_
