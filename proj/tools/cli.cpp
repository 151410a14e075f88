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


#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "goc/scenarios.hpp"
#include "json.hpp"

#ifndef GOC_VERSION
#define GOC_VERSION "0.0.0"
#endif

namespace goc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Slots averaged per row of the energy trace.
constexpr std::int64_t kTraceWindow = 100;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> v;
  std::optional<std::string> policy;
  std::optional<std::int64_t> horizon;
  std::optional<std::int64_t> warmup;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void apply(const Overrides& o, Config& c) {
  if (o.seed) c.sim.rng_seed = *o.seed;
  if (o.v) c.sim.v = *o.v;
  if (o.policy) {
    try {
      c.sim.policy = parse_policy(*o.policy);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("--policy", e.what());
    }
  }
  if (o.horizon) {
    c.sim.horizon = *o.horizon;
    if (!o.warmup) c.sim.warmup = *o.horizon / 4;
  }
  if (o.warmup) c.sim.warmup = *o.warmup;
  validate(c);
}

std::string utc_stamp(const char* format) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, format);
  return s.str();
}

fs::path output_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputRootEnv); env && *env) return env;
  return "runs";
}

// <root>/<UTC stamp>-<tag>, with a numeric suffix if that name is taken.
fs::path make_run_dir(const fs::path& root, const std::string& tag) {
  fs::create_directories(root);
  const std::string base = utc_stamp("%Y%m%d-%H%M%S") + "-" + tag;
  for (int n = 0;; ++n) {
    fs::path p = root / (n == 0 ? base : base + "-" + std::to_string(n));
    if (fs::create_directory(p)) return p;
  }
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f.exceptions(std::ios::badbit | std::ios::failbit);
  return f;
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream f = open_out(p);
  f << j.dump(2) << '\n';
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const std::vector<std::string>& args, std::uint64_t seed,
                    const std::vector<std::string>& files, json extra = json::object()) {
  json m = {{"tool", "goc"},
            {"version", GOC_VERSION},
            {"command", command},
            {"args", args},
            {"seed", seed},
            {"created_utc", utc_stamp("%Y-%m-%dT%H:%M:%SZ")},
            {"files", files}};
  m.update(extra);
  write_json(dir / "manifest.json", m);
}

void print_verdicts(std::ostream& out, const Config& c, const RunSummary& s) {
  out << "V=" << format_double(s.v) << "\n";
  for (const Verdict& v : verdicts(c, s)) {
    out << "  " << (v.ok ? "ok   " : "FAIL ") << v.what << ": " << format_double(v.measured)
        << (v.upper ? " <= " : " >= ") << format_double(v.limit) << "\n";
  }
}

std::string stem_of(const std::string& path) {
  std::string s = fs::path(path).stem().string();
  for (char& ch : s) {
    if (ch == ',' || ch == '"' || ch == '\n') ch = '_';
  }
  return s.empty() ? "run" : s;
}

Config load(const std::string& path, std::ostream& err) {
  std::vector<std::string> warnings;
  Config c = load_config_file(path, &warnings);
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
  return c;
}

int cmd_validate(const std::string& config_path, std::ostream& out, std::ostream& err) {
  Config c = load(config_path, err);
  out << config_path << ": ok (" << c.fleet.size() << " UEs, policy "
      << policy_name(c.sim.policy) << ")\n";
  return kExitOk;
}

Outcome cmd_run(const std::string& config_path, const Overrides& o, const std::string& out_flag,
                const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c = load(config_path, err);
  apply(o, c);
  const fs::path dir = make_run_dir(output_root(out_flag), "run");
  write_json(dir / "config.json", to_json(c));

  RunSummary s;
  {
    std::ofstream slots = open_out(dir / "slots.jsonl");
    s = run(c, [&](const SlotRecord& r) { slots << slot_record_json(r) << '\n'; });
  }
  s.label = stem_of(config_path);
  {
    std::ofstream csv = open_out(dir / "summary.csv");
    write_summary_csv(csv, {s});
  }
  write_manifest(dir, "run", args, c.sim.rng_seed,
                 {"config.json", "slots.jsonl", "summary.csv"});
  print_verdicts(out, c, s);
  out << "output: " << dir.string() << "\n";
  return {kExitOk, dir};
}

Outcome cmd_sweep(const std::string& config_path, const std::string& v_spec, const Overrides& o,
                  const std::string& out_flag, const std::vector<std::string>& args,
                  std::ostream& out, std::ostream& err) {
  Config c = load(config_path, err);
  apply(o, c);
  std::vector<double> v_list;
  try {
    v_list = parse_v_spec(v_spec);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--v: ") + e.what());
  }
  const fs::path dir = make_run_dir(output_root(out_flag), "sweep");
  write_json(dir / "config.json", to_json(c));

  std::vector<RunSummary> runs = sweep(c, v_list);
  const std::string label = stem_of(config_path);
  for (RunSummary& r : runs) r.label = label;
  {
    std::ofstream csv = open_out(dir / "summary.csv");
    write_summary_csv(csv, runs);
  }
  json vs = json::array();
  for (double v : v_list) vs.push_back(v);
  write_manifest(dir, "sweep", args, c.sim.rng_seed, {"config.json", "summary.csv"},
                 {{"v", vs}});
  for (const RunSummary& r : runs) print_verdicts(out, c, r);
  out << "output: " << dir.string() << "\n";
  return {kExitOk, dir};
}

std::size_t nearest_index(const std::vector<double>& vs, double v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < vs.size(); ++i) {
    if (std::abs(std::log(vs[i] / v)) < std::abs(std::log(vs[best] / v))) best = i;
  }
  return best;
}

// Windowed means of per-UE energy, one row per kTraceWindow slots.
struct TraceBuffer {
  std::vector<std::vector<double>> rows;  // slot, ue0, ue1, ...
  std::vector<double> acc;
  std::int64_t count = 0;

  void add(const SlotRecord& r) {
    if (acc.empty()) acc.assign(r.ue.size(), 0.0);
    for (std::size_t k = 0; k < r.ue.size(); ++k) acc[k] += r.ue[k].e_comp + r.ue[k].e_tx;
    if (++count == kTraceWindow) {
      std::vector<double> row{static_cast<double>(r.slot + 1)};
      for (double a : acc) row.push_back(a / static_cast<double>(kTraceWindow));
      rows.push_back(std::move(row));
      acc.assign(acc.size(), 0.0);
      count = 0;
    }
  }
};

Outcome cmd_paper(const std::string& name, const Overrides& o, const std::string& out_flag,
                  const std::vector<std::string>& args, std::ostream& out) {
  if (!is_experiment(name)) {
    std::string list;
    for (const std::string& n : experiment_names()) list += "\n  " + n;
    throw UsageError("unknown experiment '" + name + "'; available:" + list);
  }
  ExperimentPlan plan = experiment_plan(name);
  for (ExperimentGroup& g : plan.groups) {
    if (o.seed) g.config.sim.rng_seed = *o.seed;
    if (o.horizon) {
      g.config.sim.horizon = *o.horizon;
      g.config.sim.warmup = *o.horizon / 4;
      g.slots_per_v = 0.0;
    }
    if (o.v) g.v_list = {*o.v};
    validate(g.config);
  }
  const std::uint64_t seed = plan.groups.front().config.sim.rng_seed;
  const fs::path dir = make_run_dir(output_root(out_flag), "paper-" + name);

  json snapshot = json::object();
  for (const ExperimentGroup& g : plan.groups) {
    json vs = json::array();
    for (double v : g.v_list) vs.push_back(v);
    snapshot[g.label] = {{"config", to_json(g.config)},
                         {"v", vs},
                         {"slots_per_v", g.slots_per_v}};
  }
  write_json(dir / "config.json", snapshot);
  std::vector<std::string> files = {"config.json", "summary.csv"};

  std::vector<RunSummary> all;
  std::vector<std::pair<std::string, TraceBuffer>> traces;
  for (const ExperimentGroup& g : plan.groups) {
    const bool traced = std::find(plan.trace_labels.begin(), plan.trace_labels.end(), g.label) !=
                        plan.trace_labels.end();
    TraceBuffer buffer;
    std::vector<RunSummary> runs = run_group(g, [&](std::size_t i) -> SlotSink {
      if (!traced || i != 0) return {};
      return [&buffer](const SlotRecord& r) { buffer.add(r); };
    });
    if (traced) traces.emplace_back(g.label, std::move(buffer));
    for (const RunSummary& r : runs) {
      out << g.label << " ";
      print_verdicts(out, g.config, r);
    }

    if (g.label == plan.histogram_label) {
      std::vector<double> vs;
      for (const RunSummary& r : runs) vs.push_back(r.v);
      const RunSummary& r = runs[nearest_index(vs, plan.histogram_v)];
      CsvTable t{{"ue", "channel", "offload_percent"}, {}};
      for (std::size_t k = 0; k < r.ue.size(); ++k) {
        t.rows.push_back({std::to_string(k), g.config.fleet[k].channel.name,
                          format_double(100.0 * r.ue[k].offload_fraction)});
      }
      std::ofstream f = open_out(dir / "offload_histogram.csv");
      write_csv(f, t);
      files.push_back("offload_histogram.csv");
    }
    all.insert(all.end(), runs.begin(), runs.end());
  }
  {
    std::ofstream csv = open_out(dir / "summary.csv");
    write_summary_csv(csv, all);
  }
  if (!traces.empty()) {
    const std::size_t K = all.front().ue.size();
    CsvTable t{{"label", "slot"}, {}};
    for (std::size_t k = 0; k < K; ++k) t.header.push_back("ue" + std::to_string(k) + "_energy_j");
    for (const auto& [label, buffer] : traces) {
      for (const std::vector<double>& row : buffer.rows) {
        std::vector<std::string> f = {label, format_double(row[0])};
        for (std::size_t k = 1; k < row.size(); ++k) f.push_back(format_double(row[k]));
        t.rows.push_back(std::move(f));
      }
    }
    std::ofstream f = open_out(dir / "energy_trace.csv");
    write_csv(f, t);
    files.push_back("energy_trace.csv");
  }
  write_manifest(dir, "paper", args, seed, files, {{"experiment", name}});
  out << "output: " << dir.string() << "\n";
  return {kExitOk, dir};
}

}  // namespace

std::vector<Verdict> verdicts(const Config& config, const RunSummary& s) {
  std::vector<Verdict> out;
  auto add = [&](std::string what, double measured, double limit, bool upper) {
    const bool ok = upper ? measured <= limit : measured >= limit;
    out.push_back({std::move(what), measured, limit, upper, ok});
  };
  const bool made = config.sim.policy == PolicyKind::kMuMade;
  for (std::size_t k = 0; k < s.ue.size() && k < config.fleet.size(); ++k) {
    const ConstraintTargets& t = config.fleet[k].constraints;
    const std::string p = "ue" + std::to_string(k) + " ";
    add(p + "delay_s", s.ue[k].delay_s, t.delay_s, true);
    if (made) {
      add(p + "energy_j", s.ue[k].energy_j, t.ue_energy_j, true);
    } else {
      add(p + "accuracy", s.ue[k].accuracy, t.accuracy, false);
    }
  }
  if (made) add("es energy_j", s.es_energy_j, config.es.energy_constraint, true);
  add("max_virtual_rate", s.max_virtual_rate(), 1e-2, true);
  return out;
}

Outcome execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Goal-oriented edge classification: drift-plus-penalty simulator", "goc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GOC_VERSION);

  std::string config_path, out_flag, v_spec, experiment;
  Overrides o;
  std::uint64_t seed = 0;
  double v = 0.0;
  std::string policy;
  std::int64_t horizon = 0, warmup = 0;

  auto add_overrides = [&](CLI::App* sub, bool with_v) {
    sub->add_option("--seed", seed, "RNG seed");
    if (with_v) sub->add_option("--v", v, "Trade-off parameter V");
    sub->add_option("--policy", policy, "mu_meda | mu_made | fixed_accuracy | hybrid_fixed_rate");
    sub->add_option("--horizon", horizon, "Slots to simulate")->check(CLI::PositiveNumber);
    sub->add_option("--warmup", warmup, "Slots excluded from averages")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", out_flag, std::string("Output root (default $") + kOutputRootEnv +
                                           " or ./runs)");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a configuration file");
  validate_cmd->add_option("--config,config", config_path, "Configuration JSON")->required();

  CLI::App* run_cmd = app.add_subcommand("run", "Simulate one configuration");
  run_cmd->add_option("--config,config", config_path, "Configuration JSON")->required();
  add_overrides(run_cmd, true);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Simulate one configuration over a V grid");
  sweep_cmd->add_option("--config,config", config_path, "Configuration JSON")->required();
  sweep_cmd->add_option("--v", v_spec, "lo:hi:Nlog, lo:hi:Nlin or a comma list")
      ->default_str("1e2:1e7:11log");
  add_overrides(sweep_cmd, false);

  CLI::App* paper_cmd = app.add_subcommand("paper", "Run a named experiment bundle");
  paper_cmd->add_option("--experiment,experiment", experiment, "Bundle name")->required();
  paper_cmd->add_option("--seed", seed, "Base RNG seed");
  paper_cmd->add_option("--horizon", horizon, "Fixed horizon for every run (quick look)")
      ->check(CLI::PositiveNumber);
  paper_cmd->add_option("--v", v, "Run only this V");
  paper_cmd->add_option("--out", out_flag, "Output root");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return {kExitOk, {}};
  } catch (const CLI::CallForVersion& e) {
    out << GOC_VERSION << "\n";
    return {kExitOk, {}};
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return {kExitUsage, {}};
  }

  auto given = [](CLI::App* sub, const char* name) { return sub->count(name) > 0; };
  CLI::App* active = app.get_subcommands().front();
  if (active != validate_cmd) {
    if (given(active, "--seed")) o.seed = seed;
    if (active != sweep_cmd && given(active, "--v")) o.v = v;
    if (active != paper_cmd && given(active, "--policy")) o.policy = policy;
    if (given(active, "--horizon")) o.horizon = horizon;
    if (active != paper_cmd && given(active, "--warmup")) o.warmup = warmup;
  }

  try {
    if (active == validate_cmd) return {cmd_validate(config_path, out, err), {}};
    if (active == run_cmd) return cmd_run(config_path, o, out_flag, args, out, err);
    if (active == sweep_cmd) return cmd_sweep(config_path, v_spec, o, out_flag, args, out, err);
    return cmd_paper(experiment, o, out_flag, args, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return {kExitUsage, {}};
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return {kExitUsage, {}};
  } catch (const NumericalError& e) {
    err << "numerical error at " << e.what() << "\n";
    return {kExitFailure, {}};
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return {kExitFailure, {}};
  }
}

}  // namespace goc::cli
