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


#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "goc/engine.hpp"
#include "goc/scenarios.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using goc::CsvTable;
using goc::read_csv_file;
using goc::cli::execute;
using goc::cli::Outcome;

namespace {

struct Sandbox {
  fs::path root;
  fs::path config;

  Sandbox() {
    root = fs::temp_directory_path() / ("goc_cli_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    config = root / "minimal.json";
    std::ofstream(config) << R"({
      "sim": {"horizon": 600, "v": 1e4, "seed": 3},
      "ues": [{"lut": "deep_ce", "channel": {"preset": "A"}, "constraints": {"accuracy": 0.8},
               "steps": {"mu": 5, "nu": 50}}]
    })";
  }
  ~Sandbox() { fs::remove_all(root); }

  Outcome call(std::vector<std::string> args, std::string* out_text = nullptr,
               std::string* err_text = nullptr) const {
    if (!args.empty() && args[0] != "validate") {
      args.push_back("--out");
      args.push_back((root / "runs").string());
    }
    std::ostringstream out, err;
    Outcome o = execute(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return o;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli run: files, manifest and verdicts") {
  Sandbox box;
  std::string out;
  const Outcome o = box.call({"run", "--config", box.config.string()}, &out);
  REQUIRE(o.code == 0);
  for (const char* f : {"config.json", "summary.csv", "slots.jsonl", "manifest.json"}) {
    CHECK(fs::exists(o.dir / f));
  }
  const CsvTable t = read_csv_file((o.dir / "summary.csv").string());
  CHECK(t.rows.size() == 1);
  CHECK(t.rows[0][0] == "minimal");
  const nlohmann::json m = nlohmann::json::parse(slurp(o.dir / "manifest.json"));
  CHECK(m.at("seed").get<std::uint64_t>() == 3);
  CHECK(m.at("version").is_string());
  std::ifstream slots(o.dir / "slots.jsonl");
  int lines = 0;
  for (std::string line; std::getline(slots, line);) ++lines;
  CHECK(lines == 600);
  CHECK(out.find("ue0 delay_s") != std::string::npos);
  CHECK(out.find("ue0 accuracy") != std::string::npos);
  // The snapshot reloads to the same configuration.
  CHECK(goc::load_config_file((o.dir / "config.json").string()) ==
        goc::load_config_file(box.config.string()));
}

TEST_CASE("cli run: overrides and seed determinism") {
  Sandbox box;
  const std::string cfg = box.config.string();
  const Outcome a = box.call({"run", "--config", cfg, "--seed", "11", "--horizon", "300"});
  const Outcome b = box.call({"run", "--config", cfg, "--seed", "11", "--horizon", "300"});
  const Outcome c = box.call({"run", "--config", cfg, "--seed", "12", "--horizon", "300"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  REQUIRE(c.code == 0);
  CHECK(a.dir != b.dir);
  CHECK(slurp(a.dir / "summary.csv") == slurp(b.dir / "summary.csv"));
  CHECK(slurp(a.dir / "slots.jsonl") == slurp(b.dir / "slots.jsonl"));
  CHECK(slurp(a.dir / "summary.csv") != slurp(c.dir / "summary.csv"));
  const goc::Config snap = goc::load_config_file((a.dir / "config.json").string());
  CHECK(snap.sim.horizon == 300);
  CHECK(snap.sim.warmup == 75);
  CHECK(snap.sim.rng_seed == 11);

  const Outcome d = box.call({"run", "--config", cfg, "--policy", "mu_made", "--v", "50",
                              "--horizon", "100", "--warmup", "10"});
  REQUIRE(d.code == 0);
  const goc::Config s2 = goc::load_config_file((d.dir / "config.json").string());
  CHECK(s2.sim.policy == goc::PolicyKind::kMuMade);
  CHECK(s2.sim.v == 50);
  CHECK(s2.sim.warmup == 10);
}

TEST_CASE("cli: bad input exits 2") {
  Sandbox box;
  const fs::path bad = box.root / "bad.json";
  std::ofstream(bad) << R"({"ues": [{"channel": {"preset": "A"}, "frequency": 1}]})";
  std::string err;
  CHECK(box.call({"run", "--config", bad.string()}, nullptr, &err).code == 2);
  CHECK(err.find("ues[0].frequency") != std::string::npos);
  CHECK(box.call({"validate", "--config", bad.string()}).code == 2);
  CHECK(box.call({"validate", "--config", box.config.string()}).code == 0);
  CHECK(box.call({"run", "--config", (box.root / "missing.json").string()}).code == 2);
  CHECK(box.call({"run", "--config", box.config.string(), "--policy", "greedy"}).code == 2);
  CHECK(box.call({"run", "--config", box.config.string(), "--warmup", "5000"}).code == 2);
  CHECK(box.call({"sweep", "--config", box.config.string(), "--v", "1:2"}).code == 2);
  CHECK(box.call({"frobnicate"}).code == 2);
  CHECK(box.call({}).code == 2);
}

TEST_CASE("cli sweep: grid size, default grid, reproducible CSV") {
  Sandbox box;
  const std::string cfg = box.config.string();
  const Outcome a = box.call({"sweep", "--config", cfg, "--v", "1e2:1e7:11log", "--horizon", "200"});
  REQUIRE(a.code == 0);
  const CsvTable t = read_csv_file((a.dir / "summary.csv").string());
  CHECK(t.rows.size() == 11);
  for (std::size_t i = 0; i < 11; ++i) CHECK(t.number(i, "v") == goc::default_v_grid()[i]);

  const Outcome b = box.call({"sweep", "--config", cfg, "--horizon", "200"});
  REQUIRE(b.code == 0);
  CHECK(slurp(a.dir / "summary.csv") == slurp(b.dir / "summary.csv"));

  const Outcome c = box.call({"sweep", "--config", cfg, "--v", "10,1000", "--horizon", "200"});
  REQUIRE(c.code == 0);
  CHECK(read_csv_file((c.dir / "summary.csv").string()).rows.size() == 2);
}

TEST_CASE("cli paper: unknown bundle lists the known ones") {
  Sandbox box;
  std::string err;
  CHECK(box.call({"paper", "--experiment", "fig99"}, nullptr, &err).code == 2);
  for (const std::string& n : goc::experiment_names()) CHECK(err.find(n) != std::string::npos);
}

TEST_CASE("cli paper: histogram, traces, snapshots") {
  Sandbox box;
  const Outcome o = box.call({"paper", "meda_opportunistic", "--horizon", "400", "--v", "1e6"});
  REQUIRE(o.code == 0);
  const CsvTable h = read_csv_file((o.dir / "offload_histogram.csv").string());
  CHECK(h.header == std::vector<std::string>{"ue", "channel", "offload_percent"});
  REQUIRE(h.rows.size() == 5);
  const char* channels[] = {"A", "A", "B", "B", "B"};
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(h.rows[k][1] == channels[k]);
    CHECK(h.number(k, "offload_percent") >= 0.0);
    CHECK(h.number(k, "offload_percent") <= 100.0);
  }
  const CsvTable s = read_csv_file((o.dir / "summary.csv").string());
  CHECK(s.rows.size() == 6);

  const Outcome b = box.call({"paper", "--experiment", "baselines_k3", "--horizon", "1000"});
  REQUIRE(b.code == 0);
  const nlohmann::json snap = nlohmann::json::parse(slurp(b.dir / "config.json"));
  for (const char* label : {"dynamic", "fixed_accuracy", "hybrid_fixed_rate"}) {
    const goc::Config c = goc::load_config(snap.at(label).at("config"));
    REQUIRE(c.fleet.size() == 3);
    for (const goc::UEConfig& ue : c.fleet) {
      CHECK(ue.constraints.accuracy == 0.92);
      CHECK(ue.constraints.delay_s == 0.2);
    }
  }
  const CsvTable tr = read_csv_file((b.dir / "energy_trace.csv").string());
  CHECK(tr.header.size() == 5);
  CHECK(tr.rows.size() == 30);
  const nlohmann::json m = nlohmann::json::parse(slurp(b.dir / "manifest.json"));
  CHECK(m.at("experiment") == "baselines_k3");
}

TEST_CASE("cli: output root from the environment") {
  Sandbox box;
  const fs::path env_root = box.root / "from_env";
  ::setenv(goc::cli::kOutputRootEnv, env_root.string().c_str(), 1);
  std::ostringstream out, err;
  const Outcome o = execute({"run", "--config", box.config.string(), "--horizon", "50"}, out, err);
  ::unsetenv(goc::cli::kOutputRootEnv);
  REQUIRE(o.code == 0);
  CHECK(o.dir.parent_path() == env_root);
}
