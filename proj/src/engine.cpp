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


#include "goc/engine.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "goc/channel.hpp"
#include "goc/policies.hpp"

namespace goc {

double RunSummary::mean_ue_energy() const {
  if (ue.empty()) return 0.0;
  double s = 0.0;
  for (const UeSummary& u : ue) s += u.energy_j;
  return s / static_cast<double>(ue.size());
}

double RunSummary::max_virtual_rate() const {
  double m = o_rate;
  for (const UeSummary& u : ue) m = std::max({m, u.z_rate, u.aux_rate});
  return m;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

namespace {

void check_finite(double x, std::int64_t slot, const char* what) {
  if (!std::isfinite(x)) throw NumericalError(slot, std::string("non-finite ") + what);
}

// X(T) / (step T): the time-averaged constraint excess bound, in the
// constraint's own units.
double per_slot(double x, double step, std::int64_t horizon) {
  const double t = static_cast<double>(std::max<std::int64_t>(1, horizon));
  return step > 0.0 ? x / (step * t) : x / t;
}

// Virtual queue over its step size: accumulated excess in constraint units.
double unscaled(double x, double step) { return step > 0.0 ? x / step : x; }

}  // namespace

RunSummary run(const Config& config, const SlotSink& sink) {
  validate(config);
  const std::size_t K = config.fleet.size();
  const double tau = config.sim.slot_duration;
  const std::int64_t T = config.sim.horizon;
  const std::int64_t warmup = std::clamp<std::int64_t>(config.sim.warmup, 0, T);

  Policy policy(config);
  const VirtualSet vset = policy.virtual_set();

  std::vector<ChannelGenerator> channels;
  std::vector<ArrivalProcess> arrivals;
  channels.reserve(K);
  arrivals.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    const UEConfig& ue = config.fleet[k];
    channels.emplace_back(ue.channel, tau, derive_seed(config.sim.rng_seed, 2 * k));
    arrivals.emplace_back(ue.arrival_mean, config.sim.arrival_model,
                          derive_seed(config.sim.rng_seed, 2 * k + 1));
  }

  SlotState state;
  state.queues = QueueBank(config.fleet);
  state.channel.assign(K, ChannelState{});

  RunSummary sum;
  sum.policy = config.sim.policy;
  sum.force_offload = config.sim.force_offload;
  sum.v = config.sim.v;
  sum.slots = T;
  sum.averaged_slots = T - warmup;
  sum.ue.assign(K, UeSummary{});

  std::vector<std::int64_t> off_dus(K, 0), done_dus(K, 0), off_slots(K, 0);
  std::int64_t total_arrived = 0, total_classified = 0;
  std::vector<std::vector<double>> traces(vset == VirtualSet::kDelayEnergy ? 2 * K + 1 : 2 * K);

  SlotRecord rec;
  for (std::int64_t t = 0; t < T; ++t) {
    state.slot = t;
    for (std::size_t k = 0; k < K; ++k) {
      state.channel[k] = channels[k].next_gain(&state.channel[k]);
      check_finite(state.channel[k].gain_sq, t, "channel gain");
    }

    const SlotDecision dec = policy.decide(state);

    VirtualObservation obs;
    obs.accuracy.assign(K, 0.0);
    obs.ue_energy.assign(K, 0.0);
    rec = SlotRecord{};
    rec.slot = t;
    rec.ue.assign(K, UeSlot{});
    double ue_weighted = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const UEConfig& ue = config.fleet[k];
      const UEAction& a = dec.ue[k];
      const CompressionProfile& prof = ue.lut[static_cast<std::size_t>(a.lut_index)];
      UeSlot& u = rec.ue[k];
      u.action = a;
      u.rho = prof.rho;
      u.e_comp = comp_energy(a.f_d, ue.kappa, tau);
      u.e_tx = (a.offload && a.rate > 0.0) ? tx_energy(a.rate, state.channel[k], ue, tau) : 0.0;
      u.gain_sq = state.channel[k].gain_sq;
      u.cost = dec.ue_cost[k];
      u.accuracy = prof.accuracy;
      check_finite(u.e_tx, t, "transmit energy");
      check_finite(u.cost, t, "UE cost");
      obs.accuracy[k] = prof.accuracy;
      obs.ue_energy[k] = u.e_comp + u.e_tx;
      ue_weighted += ue.delta * obs.ue_energy[k];
      u.arrivals = arrivals[k].next();
    }
    rec.f_s = dec.es.f_s;
    rec.f_split = dec.es.f_split;
    rec.e_s = comp_energy(dec.es.f_s, config.es.kappa, tau);
    obs.es_energy = rec.e_s;
    rec.e_tot = (1.0 - config.es.gamma) * rec.e_s + config.es.gamma * ue_weighted;

    std::vector<std::int64_t> arr(K);
    for (std::size_t k = 0; k < K; ++k) arr[k] = rec.ue[k].arrivals;
    const QueueTransition tr = advance_slot(state.queues, config.fleet, config.es, dec.ue,
                                            dec.es, arr, obs, vset, tau);

    const QueueBank& qb = state.queues;
    rec.q_es = qb.q_es;
    rec.es_done = tr.es_done;
    rec.o = qb.o;
    rec.o_drift = tr.o_drift;
    rec.o_bound = tr.o_bound;
    for (std::size_t k = 0; k < K; ++k) {
      UeSlot& u = rec.ue[k];
      u.offloaded = dec.ue[k].offload ? tr.moved[k] : 0;
      u.local = tr.local_done[k];
      u.q_ue = qb.q_ue[k];
      u.q_tot = qb.total_queue(k);
      u.z = qb.z[k];
      u.aux = vset == VirtualSet::kDelayAccuracy ? qb.y[k] : qb.s[k];
      u.drift = tr.drift[k];
      check_finite(u.q_tot, t, "queue backlog");
      check_finite(u.z, t, "latency queue");
      check_finite(u.aux, t, "virtual queue");
      const StepSizes& st = config.fleet[k].steps;
      traces[2 * k].push_back(unscaled(u.z, st.mu));
      traces[2 * k + 1].push_back(
          unscaled(u.aux, vset == VirtualSet::kDelayAccuracy ? st.nu : st.lambda));
    }
    if (vset == VirtualSet::kDelayEnergy) traces[2 * K].push_back(unscaled(qb.o, config.es.eta));
    check_finite(rec.o, t, "server energy queue");

    if (!tr.drift_ok()) ++sum.drift_violations;
    total_arrived += tr.arrived();
    total_classified += tr.classified();

    double ue_sum = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      ue_sum += config.fleet[k].delta * (rec.ue[k].e_comp + rec.ue[k].e_tx);
    }
    const double recomputed = (1.0 - config.es.gamma) * rec.e_s + config.es.gamma * ue_sum;
    sum.ledger_error = std::max(sum.ledger_error, std::abs(recomputed - rec.e_tot));

    if (t >= warmup) {
      for (std::size_t k = 0; k < K; ++k) {
        const UeSlot& u = rec.ue[k];
        UeSummary& s = sum.ue[k];
        s.comp_energy_j += u.e_comp;
        s.tx_energy_j += u.e_tx;
        s.mean_q_tot += u.q_tot;
        s.accuracy += u.accuracy;
        off_dus[k] += u.offloaded;
        done_dus[k] += tr.moved[k];
        if (u.action.offload) ++off_slots[k];
      }
      sum.es_energy_j += rec.e_s;
      sum.total_energy_j += rec.e_tot;
    }
    if (sink) sink(rec);
  }

  const double n = static_cast<double>(std::max<std::int64_t>(1, sum.averaged_slots));
  for (std::size_t k = 0; k < K; ++k) {
    const UEConfig& ue = config.fleet[k];
    UeSummary& s = sum.ue[k];
    s.comp_energy_j /= n;
    s.tx_energy_j /= n;
    s.energy_j = s.comp_energy_j + s.tx_energy_j;
    s.mean_q_tot /= n;
    s.accuracy /= n;
    s.delay_s = delay_estimate(s.mean_q_tot, ue.arrival_mean, tau);
    s.offload_fraction =
        done_dus[k] > 0 ? static_cast<double>(off_dus[k]) / static_cast<double>(done_dus[k]) : 0.0;
    s.offload_slot_fraction = static_cast<double>(off_slots[k]) / n;
    s.delay_slack_s = ue.constraints.delay_s - s.delay_s;
    s.accuracy_slack = s.accuracy - ue.constraints.accuracy;
    s.energy_slack_j = ue.constraints.ue_energy_j - s.energy_j;
    s.z_rate = per_slot(state.queues.z[k], ue.steps.mu, T);
    s.aux_rate = vset == VirtualSet::kDelayAccuracy
                     ? per_slot(state.queues.y[k], ue.steps.nu, T)
                     : per_slot(state.queues.s[k], ue.steps.lambda, T);
  }
  sum.es_energy_j /= n;
  sum.total_energy_j /= n;
  sum.o_rate = vset == VirtualSet::kDelayEnergy ? per_slot(state.queues.o, config.es.eta, T) : 0.0;
  sum.conserved = total_arrived == total_classified + state.queues.stored_dus();
  sum.converged = detect_convergence(traces, static_cast<std::size_t>(std::max<std::int64_t>(1, T / 10)));
  return sum;
}

std::vector<RunSummary> sweep(const Config& config, const std::vector<double>& v_list,
                              unsigned threads) {
  std::vector<RunSummary> out(v_list.size());
  if (v_list.empty()) return out;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(v_list.size()));

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(v_list.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < v_list.size(); i = next++) {
      try {
        Config c = config;
        c.sim.v = v_list[i];
        c.sim.rng_seed = derive_seed(config.sim.rng_seed, i);
        out[i] = run(c);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (points < 1 || !(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("log_grid needs 0 < lo <= hi and points >= 1");
  }
  if (points == 1) return {lo};
  std::vector<double> v(static_cast<std::size_t>(points));
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < points; ++i) {
    v[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (points - 1));
  }
  v.front() = lo;
  v.back() = hi;
  return v;
}

std::vector<double> default_v_grid() { return log_grid(1e2, 1e7, 11); }

namespace {

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::vector<double> parse_v_spec(const std::string& spec) {
  if (spec.empty()) return default_v_grid();
  if (spec.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(spec, ':');
    if (parts.size() != 3) throw std::invalid_argument("V spec must be lo:hi:N{log|lin}");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    std::string count = parts[2];
    bool linear = false;
    if (count.size() > 3 && count.ends_with("log")) {
      count.resize(count.size() - 3);
    } else if (count.size() > 3 && count.ends_with("lin")) {
      count.resize(count.size() - 3);
      linear = true;
    }
    const double nd = parse_number(count);
    const int n = static_cast<int>(nd);
    if (n < 1 || n != nd) throw std::invalid_argument("V spec point count must be a positive integer");
    if (!linear) return log_grid(lo, hi, n);
    if (!(hi >= lo)) throw std::invalid_argument("V spec needs lo <= hi");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
  }
  std::vector<double> v;
  for (const std::string& p : split(spec, ',')) v.push_back(parse_number(p));
  for (double x : v) {
    if (!(x >= 0.0)) throw std::invalid_argument("V must be non-negative");
  }
  return v;
}

bool detect_convergence(const std::vector<double>& trace, std::size_t window) {
  if (window == 0 || trace.size() < 2 * window) return false;
  const auto end = trace.end();
  double last = 0.0, prev = 0.0;
  for (auto it = end - static_cast<std::ptrdiff_t>(window); it != end; ++it) last += *it;
  for (auto it = end - static_cast<std::ptrdiff_t>(2 * window);
       it != end - static_cast<std::ptrdiff_t>(window); ++it) {
    prev += *it;
  }
  last /= static_cast<double>(window);
  prev /= static_cast<double>(window);
  return std::abs(last - prev) / std::max(1.0, std::abs(last)) < 1e-2;
}

bool detect_convergence(const std::vector<std::vector<double>>& traces, std::size_t window) {
  for (const std::vector<double>& t : traces) {
    if (!detect_convergence(t, window)) return false;
  }
  return true;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string slot_record_json(const SlotRecord& r) {
  using nlohmann::json;
  json ues = json::array();
  for (const UeSlot& u : r.ue) {
    ues.push_back({{"offload", u.action.offload},
                   {"row", u.action.lut_index},
                   {"rho", u.rho},
                   {"f_d", u.action.f_d},
                   {"rate", u.action.rate},
                   {"e_comp", u.e_comp},
                   {"e_tx", u.e_tx},
                   {"offloaded", u.offloaded},
                   {"local", u.local},
                   {"arrivals", u.arrivals},
                   {"q_ue", u.q_ue},
                   {"q_tot", u.q_tot},
                   {"z", u.z},
                   {"aux", u.aux},
                   {"accuracy", u.accuracy},
                   {"gain_sq", u.gain_sq},
                   {"cost", u.cost},
                   {"drift_ok", u.drift.holds()}});
  }
  json j = {{"slot", r.slot},       {"e_tot", r.e_tot},     {"e_s", r.e_s},
            {"f_s", r.f_s},         {"f_split", r.f_split}, {"q_es", r.q_es},
            {"es_done", r.es_done}, {"o", r.o},             {"ues", std::move(ues)}};
  return j.dump();
}

std::vector<std::string> summary_csv_header(std::size_t num_ues) {
  std::vector<std::string> h = {"label", "policy", "v"};
  for (std::size_t k = 0; k < num_ues; ++k) {
    const std::string p = "ue" + std::to_string(k) + "_";
    for (const char* f : {"energy_j", "delay_s", "accuracy", "offload"}) h.push_back(p + f);
  }
  for (const char* f : {"es_energy_j", "total_energy_j", "max_virtual_rate", "converged",
                        "drift_violations"}) {
    h.emplace_back(f);
  }
  return h;
}

std::vector<std::string> summary_csv_row(const RunSummary& s) {
  std::string policy(policy_name(s.policy));
  if (s.force_offload) policy += "+forced";
  std::vector<std::string> row = {s.label, policy, format_double(s.v)};
  for (const UeSummary& u : s.ue) {
    row.push_back(format_double(u.energy_j));
    row.push_back(format_double(u.delay_s));
    row.push_back(format_double(u.accuracy));
    row.push_back(format_double(u.offload_fraction));
  }
  row.push_back(format_double(s.es_energy_j));
  row.push_back(format_double(s.total_energy_j));
  row.push_back(format_double(s.max_virtual_rate()));
  row.push_back(s.converged ? "1" : "0");
  row.push_back(std::to_string(s.drift_violations));
  return row;
}

namespace {

void write_line(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].find_first_of(",\n\"") != std::string::npos) {
      throw std::invalid_argument("CSV field contains a separator: " + fields[i]);
    }
    if (i) out << ',';
    out << fields[i];
  }
  out << '\n';
}

}  // namespace

void write_summary_csv(std::ostream& out, const std::vector<RunSummary>& runs) {
  const std::size_t K = runs.empty() ? 0 : runs.front().ue.size();
  write_line(out, summary_csv_header(K));
  for (const RunSummary& r : runs) {
    if (r.ue.size() != K) throw std::invalid_argument("runs with different fleet sizes");
    write_line(out, summary_csv_row(r));
  }
}

int CsvTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw std::out_of_range("no column " + name);
  return parse_number(rows.at(row)[static_cast<std::size_t>(c)]);
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f = split(line, ',');
    if (t.header.empty()) {
      t.header = std::move(f);
      continue;
    }
    if (f.size() != t.header.size()) {
      throw std::runtime_error("CSV line " + std::to_string(lineno) + ": expected " +
                               std::to_string(t.header.size()) + " fields, got " +
                               std::to_string(f.size()));
    }
    t.rows.push_back(std::move(f));
  }
  if (t.header.empty()) throw std::runtime_error("CSV is empty");
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_csv(in);
}

void write_csv(std::ostream& out, const CsvTable& table) {
  write_line(out, table.header);
  for (const auto& r : table.rows) write_line(out, r);
}

}  // namespace goc
