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


#ifndef GOC_ENGINE_HPP_
#define GOC_ENGINE_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "goc/actions.hpp"
#include "goc/model.hpp"
#include "goc/queueing.hpp"

namespace goc {

struct UeSlot {
  UEAction action;
  int rho = 0;
  double e_tx = 0.0;
  double e_comp = 0.0;
  std::int64_t offloaded = 0;  // DUs moved to the server this slot
  std::int64_t local = 0;      // DUs classified on the device this slot
  std::int64_t arrivals = 0;
  std::int64_t q_ue = 0;       // after the update
  double q_tot = 0.0;
  double z = 0.0;
  double aux = 0.0;  // Y (min-energy family) or S (max-accuracy)
  double accuracy = 0.0;  // G(rho) charged this slot
  double gain_sq = 0.0;
  double cost = 0.0;  // predicted per-slot cost of the chosen action
  DriftCheck drift;
};

struct SlotRecord {
  std::int64_t slot = 0;
  std::vector<UeSlot> ue;
  double f_s = 0.0;
  std::vector<std::vector<double>> f_split;
  std::vector<std::vector<std::int64_t>> q_es;  // after the update
  std::vector<std::vector<std::int64_t>> es_done;
  double e_s = 0.0;
  double o = 0.0;
  double o_drift = 0.0;
  double o_bound = 0.0;
  double e_tot = 0.0;  // (1 - gamma) E_s + gamma sum_k delta_k (E_comp + E_tx)
};

struct UeSummary {
  double energy_j = 0.0;       // E_comp + E_tx per slot
  double comp_energy_j = 0.0;
  double tx_energy_j = 0.0;
  double mean_q_tot = 0.0;
  double delay_s = 0.0;        // Little's law on mean_q_tot
  double accuracy = 0.0;       // mean charged G
  double offload_fraction = 0.0;  // offloaded DUs / processed DUs
  double offload_slot_fraction = 0.0;
  double delay_slack_s = 0.0;     // D_avg - delay
  double accuracy_slack = 0.0;    // accuracy - G_avg
  double energy_slack_j = 0.0;    // E_avg - energy
  // Virtual queue at the horizon over (step size * T): an upper bound on the
  // time-averaged constraint excess (DU, accuracy fraction, J).
  double z_rate = 0.0;
  double aux_rate = 0.0;  // Y or S
};

struct RunSummary {
  std::string label;
  PolicyKind policy = PolicyKind::kMuMeda;
  bool force_offload = false;
  double v = 0.0;
  std::int64_t slots = 0;
  std::int64_t averaged_slots = 0;
  std::vector<UeSummary> ue;
  double es_energy_j = 0.0;
  double total_energy_j = 0.0;
  double o_rate = 0.0;  // O(T) / (eta T)
  std::int64_t drift_violations = 0;
  double ledger_error = 0.0;  // worst |E_tot - recomputed| over slots
  bool conserved = true;      // arrivals == classified + stored
  // detect_convergence over every X(t) / step, window T / 10.
  bool converged = false;

  double mean_ue_energy() const;
  double max_virtual_rate() const;
};

class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::int64_t slot, const std::string& what)
      : std::runtime_error("slot " + std::to_string(slot) + ": " + what), slot_(slot) {}
  std::int64_t slot() const { return slot_; }

 private:
  std::int64_t slot_;
};

using SlotSink = std::function<void(const SlotRecord&)>;

// Runs config.sim.horizon slots. Averages skip the first config.sim.warmup
// slots. Deterministic in config.sim.rng_seed.
RunSummary run(const Config& config, const SlotSink& sink = {});

// One run per V (seeds derived from (seed, index)), returned in V order.
// Runs execute on up to `threads` workers (0 = hardware concurrency).
std::vector<RunSummary> sweep(const Config& config, const std::vector<double>& v_list,
                              unsigned threads = 0);

// log10-spaced grid, inclusive of both ends.
std::vector<double> log_grid(double lo, double hi, int points);
// Default 1e2 .. 1e7, 11 points.
std::vector<double> default_v_grid();
// Parses "lo:hi:Nlog", "lo:hi:Nlin", or a comma list; empty -> default grid.
std::vector<double> parse_v_spec(const std::string& spec);

// True when, for every trace, |mean(last window) - mean(previous window)|
// / max(1, |mean(last window)|) < 1e-2. Needs 2 * window samples.
bool detect_convergence(const std::vector<std::vector<double>>& traces, std::size_t window);
bool detect_convergence(const std::vector<double>& trace, std::size_t window);

// Seed for stream `index` derived from `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// ---- output formats ----

// One JSON object per line.
std::string slot_record_json(const SlotRecord& record);

std::vector<std::string> summary_csv_header(std::size_t num_ues);
std::vector<std::string> summary_csv_row(const RunSummary& summary);
void write_summary_csv(std::ostream& out, const std::vector<RunSummary>& runs);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

// Strict reader: every row must have as many fields as the header.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const CsvTable& table);

std::string format_double(double v);

}  // namespace goc

#endif  // GOC_ENGINE_HPP_
