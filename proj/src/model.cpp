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


#include "goc/model.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace goc {

namespace {

using nlohmann::json;

struct CommonRow {
  int rho;
  double pixels;
  double bits_per_pixel;
  double j_server;
};

// Image sizes, JPEG bits/px and server throughput shared by both encoders.
constexpr CommonRow kCommon[] = {
    {2, 128.0 * 128.0 * 3.0, 1.08, 1.2e-7},
    {4, 64.0 * 64.0 * 3.0, 2.27, 2.17e-7},
    {8, 32.0 * 32.0 * 3.0, 4.72, 2.87e-7},
    {16, 16.0 * 16.0 * 3.0, 9.06, 3.57e-7},
    {32, 8.0 * 8.0 * 3.0, 8.0, 5e-7},
    {64, 4.0 * 4.0 * 3.0, 8.0, 6.25e-7},
};

struct EncoderRow {
  double accuracy_percent;
  double j_offload;
  double j_local;
};

constexpr EncoderRow kDeep[] = {
    {97.3, 1.44e-7, 8.35e-8}, {96.5, 1.26e-7, 9.04e-8},
    {93.4, 1.16e-7, 8.90e-8}, {91.8, 1.07e-7, 8.73e-8},
    {83.0, 1.35e-7, 1.06e-7}, {67.0, 1.32e-7, 1.09e-7},
};

constexpr EncoderRow kShort[] = {
    {97.3, 1.44e-7, 8.35e-8}, {95.8, 1.68e-7, 1.10e-7},
    {91.5, 1.88e-7, 1.26e-7}, {91.3, 1.95e-7, 1.38e-7},
    {77.0, 2.25e-7, 1.55e-7}, {50.0, 2.25e-7, 1.65e-7},
};

Lut build_lut(const EncoderRow (&rows)[6]) {
  Lut lut;
  for (int i = 0; i < 6; ++i) {
    lut.push_back(CompressionProfile{
        kCommon[i].rho, rows[i].accuracy_percent / 100.0, kCommon[i].pixels,
        kCommon[i].bits_per_pixel, rows[i].j_offload, rows[i].j_local,
        kCommon[i].j_server});
  }
  return lut;
}

// Walks a JSON document while remembering the path for error messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return j_; }
  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  Node at(const char* key) const {
    if (!has(key)) throw ConfigError(child_path(key), "missing field");
    return Node(j_.at(key), child_path(key));
  }
  Node at(std::size_t i) const {
    return Node(j_.at(i), path_ + "[" + std::to_string(i) + "]");
  }

  void expect_object(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j_.items()) {
      if (!ok.count(key)) throw ConfigError(child_path(key.c_str()), "unknown field");
    }
  }

  double number() const {
    if (!j_.is_number()) throw ConfigError(path_, "expected a number");
    double v = j_.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path_, "not finite");
    return v;
  }
  std::int64_t integer() const {
    if (!j_.is_number_integer() && !(j_.is_number() && std::floor(j_.get<double>()) == j_.get<double>())) {
      throw ConfigError(path_, "expected an integer");
    }
    return j_.is_number_integer() ? j_.get<std::int64_t>()
                                  : static_cast<std::int64_t>(j_.get<double>());
  }
  bool boolean() const {
    if (!j_.is_boolean()) throw ConfigError(path_, "expected true/false");
    return j_.get<bool>();
  }
  std::string string() const {
    if (!j_.is_string()) throw ConfigError(path_, "expected a string");
    return j_.get<std::string>();
  }
  std::vector<double> numbers() const {
    if (!j_.is_array()) throw ConfigError(path_, "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j_.size(); ++i) out.push_back(at(i).number());
    return out;
  }

  double number_or(const char* key, double fallback) const {
    return has(key) ? at(key).number() : fallback;
  }

 private:
  std::string child_path(const char* key) const {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }

  const json& j_;
  std::string path_;
};

std::string_view fading_name(FadingMode m) {
  return m == FadingMode::kIidRayleigh ? "iid_rayleigh" : "clarke_correlated";
}

FadingMode parse_fading(const Node& n) {
  std::string s = n.string();
  if (s == "iid_rayleigh") return FadingMode::kIidRayleigh;
  if (s == "clarke_correlated" || s == "clarke") return FadingMode::kClarkeCorrelated;
  throw ConfigError(n.path(), "unknown fading mode '" + s + "'");
}

CompressionProfile parse_profile(const Node& n) {
  n.expect_object({"rho", "accuracy", "pixels", "bits_per_pixel", "j_offload",
                   "j_local", "j_server"});
  CompressionProfile p;
  p.rho = static_cast<int>(n.at("rho").integer());
  p.accuracy = n.at("accuracy").number();
  p.pixels = n.at("pixels").number();
  p.bits_per_pixel = n.at("bits_per_pixel").number();
  p.j_offload = n.at("j_offload").number();
  p.j_local = n.at("j_local").number();
  p.j_server = n.at("j_server").number();
  return p;
}

json profile_json(const CompressionProfile& p) {
  return json{{"rho", p.rho},         {"accuracy", p.accuracy},
              {"pixels", p.pixels},   {"bits_per_pixel", p.bits_per_pixel},
              {"j_offload", p.j_offload}, {"j_local", p.j_local},
              {"j_server", p.j_server}};
}

Lut parse_lut_file(const std::string& path, const std::string& field) {
  std::ifstream in(path);
  if (!in) throw ConfigError(field, "cannot open LUT file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(field, std::string("malformed LUT file: ") + e.what());
  }
  Node n(doc, field);
  if (!doc.is_array()) throw ConfigError(field, "LUT file must hold an array");
  Lut lut;
  for (std::size_t i = 0; i < doc.size(); ++i) lut.push_back(parse_profile(n.at(i)));
  return lut;
}

ChannelScenario parse_channel(const Node& n, double tau) {
  if (n.raw().is_string()) return channel_preset(n.string(), tau);
  n.expect_object({"preset", "name", "distance_m", "bandwidth_hz", "carrier_hz",
                   "pathloss_gain", "noise_psd", "fading", "doppler_hz"});
  ChannelScenario c;
  if (n.has("preset")) {
    Node p = n.at("preset");
    try {
      c = channel_preset(p.string(), tau);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(p.path(), e.what());
    }
  }
  if (n.has("name")) c.name = n.at("name").string();
  c.distance_m = n.number_or("distance_m", c.distance_m);
  c.bandwidth_hz = n.number_or("bandwidth_hz", c.bandwidth_hz);
  c.carrier_hz = n.number_or("carrier_hz", c.carrier_hz);
  c.pathloss_gain = n.number_or("pathloss_gain", c.pathloss_gain);
  c.noise_psd = n.number_or("noise_psd", c.noise_psd);
  if (n.has("fading")) c.fading = parse_fading(n.at("fading"));
  c.doppler_hz = n.number_or("doppler_hz", c.doppler_hz);
  return c;
}

json channel_json(const ChannelScenario& c) {
  return json{{"name", c.name},
              {"distance_m", c.distance_m},
              {"bandwidth_hz", c.bandwidth_hz},
              {"carrier_hz", c.carrier_hz},
              {"pathloss_gain", c.pathloss_gain},
              {"noise_psd", c.noise_psd},
              {"fading", std::string(fading_name(c.fading))},
              {"doppler_hz", c.doppler_hz}};
}

constexpr std::initializer_list<const char*> kUeKeys = {
    "id",       "lut",          "lut_name",    "lut_file",   "freq_set",
    "freq_base_hz", "kappa",    "kappa_scale", "p_tx_max",   "channel",
    "delta",    "arrival_mean", "constraints", "steps"};

// Fields of `over` replace those of `base` (one level deep for objects).
json merge(const json& base, const json& over) {
  json out = base;
  for (const auto& [key, value] : over.items()) {
    if (value.is_object() && out.contains(key) && out[key].is_object() &&
        key != "channel") {
      for (const auto& [k2, v2] : value.items()) out[key][k2] = v2;
    } else {
      out[key] = value;
    }
  }
  return out;
}

UEConfig parse_ue(const Node& n, std::size_t index, double tau) {
  n.expect_object(kUeKeys);
  UEConfig ue;
  ue.id = n.has("id") ? static_cast<int>(n.at("id").integer())
                      : static_cast<int>(index);

  if (n.has("lut_file")) {
    ue.lut = parse_lut_file(n.at("lut_file").string(), n.path() + ".lut_file");
    ue.lut_name = "custom";
  } else {
    Node lut = n.at("lut");
    if (lut.raw().is_string()) {
      ue.lut_name = lut.string();
      if (!is_lut_preset(ue.lut_name)) {
        throw ConfigError(lut.path(), "unknown LUT preset '" + ue.lut_name + "'");
      }
      ue.lut = lut_preset(ue.lut_name);
    } else {
      if (!lut.raw().is_array()) throw ConfigError(lut.path(), "expected preset name or array");
      for (std::size_t i = 0; i < lut.raw().size(); ++i) {
        ue.lut.push_back(parse_profile(lut.at(i)));
      }
      ue.lut_name = "custom";
    }
  }
  if (n.has("lut_name")) ue.lut_name = n.at("lut_name").string();

  if (n.has("freq_set")) {
    ue.freq_set = n.at("freq_set").numbers();
  } else if (n.has("freq_base_hz")) {
    ue.freq_set = decile_frequencies(n.at("freq_base_hz").number());
  } else {
    ue.freq_set = decile_frequencies(1.4e9);
  }
  ue.kappa = n.number_or("kappa", ue.kappa) * n.number_or("kappa_scale", 1.0);
  ue.p_tx_max = n.number_or("p_tx_max", ue.p_tx_max);
  ue.channel = parse_channel(n.at("channel"), tau);
  ue.delta = n.number_or("delta", std::nan(""));
  ue.arrival_mean = n.number_or("arrival_mean", ue.arrival_mean);
  if (n.has("constraints")) {
    Node c = n.at("constraints");
    c.expect_object({"delay_s", "accuracy", "ue_energy_j"});
    ue.constraints.delay_s = c.number_or("delay_s", ue.constraints.delay_s);
    ue.constraints.accuracy = c.number_or("accuracy", ue.constraints.accuracy);
    ue.constraints.ue_energy_j = c.number_or("ue_energy_j", ue.constraints.ue_energy_j);
  }
  if (n.has("steps")) {
    Node s = n.at("steps");
    s.expect_object({"mu", "nu", "lambda"});
    ue.steps.mu = s.number_or("mu", ue.steps.mu);
    ue.steps.nu = s.number_or("nu", ue.steps.nu);
    ue.steps.lambda = s.number_or("lambda", ue.steps.lambda);
  }
  return ue;
}

ESConfig parse_es(const Node& n) {
  n.expect_object({"freq_set", "freq_base_hz", "kappa", "gamma", "eta",
                   "energy_constraint"});
  ESConfig es;
  if (n.has("freq_set")) {
    es.freq_set = n.at("freq_set").numbers();
  } else {
    es.freq_set = decile_frequencies(n.number_or("freq_base_hz", 4.5e9));
  }
  es.kappa = n.number_or("kappa", es.kappa);
  es.gamma = n.number_or("gamma", es.gamma);
  es.eta = n.number_or("eta", es.eta);
  es.energy_constraint = n.number_or("energy_constraint", es.energy_constraint);
  return es;
}

SimConfig parse_sim(const Node& n) {
  n.expect_object({"slot_duration", "horizon", "warmup", "v", "policy",
                   "rho_fixed", "force_offload", "seed", "arrival_model"});
  SimConfig s;
  s.slot_duration = n.number_or("slot_duration", s.slot_duration);
  if (n.has("horizon")) s.horizon = n.at("horizon").integer();
  s.warmup = n.has("warmup") ? n.at("warmup").integer() : s.horizon / 4;
  s.v = n.number_or("v", s.v);
  if (n.has("policy")) {
    Node p = n.at("policy");
    try {
      s.policy = parse_policy(p.string());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(p.path(), e.what());
    }
  }
  if (n.has("rho_fixed")) s.rho_fixed = static_cast<int>(n.at("rho_fixed").integer());
  if (n.has("force_offload")) s.force_offload = n.at("force_offload").boolean();
  if (n.has("seed")) s.rng_seed = static_cast<std::uint64_t>(n.at("seed").integer());
  if (n.has("arrival_model")) {
    Node a = n.at("arrival_model");
    std::string m = a.string();
    if (m == "poisson") {
      s.arrival_model = ArrivalModel::kPoisson;
    } else if (m == "deterministic") {
      s.arrival_model = ArrivalModel::kDeterministic;
    } else {
      throw ConfigError(a.path(), "unknown arrival model '" + m + "'");
    }
  }
  return s;
}

void check(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

bool ascending(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

}  // namespace

double du_bits(const CompressionProfile& profile) {
  return profile.pixels * profile.bits_per_pixel;
}

Lut deep_ce_lut() { return build_lut(kDeep); }
Lut short_ce_lut() { return build_lut(kShort); }

bool is_lut_preset(std::string_view name) {
  return name == "deep_ce" || name == "short_ce" || name == "deep_short";
}

Lut lut_preset(std::string_view name) {
  if (name == "deep_ce") return deep_ce_lut();
  if (name == "short_ce") return short_ce_lut();
  if (name == "deep_short") {
    Lut lut = deep_ce_lut();
    Lut s = short_ce_lut();
    lut.insert(lut.end(), s.begin(), s.end());
    return lut;
  }
  throw std::invalid_argument("unknown LUT preset '" + std::string(name) + "'");
}

ChannelScenario channel_preset(std::string_view name, double slot_duration) {
  ChannelScenario c;
  c.name = std::string(name);
  c.bandwidth_hz = 2.5e6;
  c.doppler_hz = 1.0 / (2.0 * std::numbers::pi * slot_duration);
  if (name == "A") {
    c.distance_m = 50.0;
    c.carrier_hz = 6e9;
    c.pathloss_gain = 1.06e-10;
  } else if (name == "B") {
    c.distance_m = 500.0;
    c.carrier_hz = 9e9;
    c.pathloss_gain = 2.72e-14;
  } else {
    throw std::invalid_argument("unknown channel preset '" + std::string(name) + "'");
  }
  return c;
}

std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kMuMeda: return "mu_meda";
    case PolicyKind::kMuMade: return "mu_made";
    case PolicyKind::kFixedAccuracy: return "fixed_accuracy";
    case PolicyKind::kHybridFixedRate: return "hybrid_fixed_rate";
  }
  return "?";
}

PolicyKind parse_policy(std::string_view name) {
  if (name == "mu_meda") return PolicyKind::kMuMeda;
  if (name == "mu_made") return PolicyKind::kMuMade;
  if (name == "fixed_accuracy") return PolicyKind::kFixedAccuracy;
  if (name == "hybrid_fixed_rate") return PolicyKind::kHybridFixedRate;
  throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

std::vector<double> decile_frequencies(double base_hz) {
  std::vector<double> f;
  for (int i = 1; i <= 10; ++i) f.push_back(base_hz * i / 10.0);
  return f;
}

void validate(const Config& config) {
  const SimConfig& s = config.sim;
  check(s.slot_duration > 0, "sim.slot_duration", "must be > 0");
  check(s.horizon > 0, "sim.horizon", "must be > 0");
  check(s.warmup >= 0 && s.warmup < s.horizon, "sim.warmup", "must lie in [0, horizon)");
  check(s.v >= 0, "sim.v", "must be >= 0");

  const ESConfig& es = config.es;
  check(!es.freq_set.empty(), "es.freq_set", "empty frequency set");
  check(ascending(es.freq_set) && es.freq_set.front() >= 0, "es.freq_set",
        "must be non-negative and strictly ascending");
  check(es.kappa > 0, "es.kappa", "must be > 0");
  check(es.gamma >= 0 && es.gamma <= 1, "es.gamma", "must lie in [0, 1]");
  check(es.eta >= 0, "es.eta", "must be >= 0");
  check(es.energy_constraint >= 0, "es.energy_constraint", "must be >= 0");

  check(!config.fleet.empty(), "ues", "at least one UE required");
  double delta_sum = 0.0;
  for (std::size_t k = 0; k < config.fleet.size(); ++k) {
    const UEConfig& ue = config.fleet[k];
    const std::string p = "ues[" + std::to_string(k) + "]";
    check(!ue.lut.empty(), p + ".lut", "empty LUT");
    for (std::size_t i = 0; i < ue.lut.size(); ++i) {
      const CompressionProfile& r = ue.lut[i];
      const std::string rp = p + ".lut[" + std::to_string(i) + "]";
      check(r.accuracy > 0 && r.accuracy <= 1, rp + ".accuracy", "must lie in (0, 1]");
      check(r.pixels > 0, rp + ".pixels", "must be > 0");
      check(r.bits_per_pixel > 0, rp + ".bits_per_pixel", "must be > 0");
      check(r.j_offload > 0, rp + ".j_offload", "must be > 0");
      check(r.j_local > 0, rp + ".j_local", "must be > 0");
      check(r.j_server > 0, rp + ".j_server", "must be > 0");
      check(std::isfinite(du_bits(r)), rp, "bits per DU not finite");
    }
    check(!ue.freq_set.empty(), p + ".freq_set", "empty frequency set");
    check(ascending(ue.freq_set) && ue.freq_set.front() >= 0, p + ".freq_set",
          "must be non-negative and strictly ascending");
    check(ue.kappa > 0, p + ".kappa", "must be > 0");
    check(ue.p_tx_max > 0, p + ".p_tx_max", "must be > 0");
    check(ue.channel.pathloss_gain > 0, p + ".channel.pathloss_gain", "must be > 0");
    check(ue.channel.noise_psd > 0, p + ".channel.noise_psd", "must be > 0");
    check(ue.channel.bandwidth_hz > 0, p + ".channel.bandwidth_hz", "must be > 0");
    check(ue.channel.doppler_hz >= 0, p + ".channel.doppler_hz", "must be >= 0");
    check(ue.delta >= 0, p + ".delta", "must be >= 0");
    check(ue.arrival_mean >= 0, p + ".arrival_mean", "must be >= 0");
    check(ue.constraints.delay_s > 0, p + ".constraints.delay_s", "must be > 0");
    check(ue.constraints.accuracy >= 0 && ue.constraints.accuracy <= 1,
          p + ".constraints.accuracy", "must lie in [0, 1]");
    check(ue.constraints.ue_energy_j >= 0, p + ".constraints.ue_energy_j", "must be >= 0");
    check(ue.steps.mu >= 0 && ue.steps.nu >= 0 && ue.steps.lambda >= 0,
          p + ".steps", "step sizes must be >= 0");
    delta_sum += ue.delta;
  }
  check(std::abs(delta_sum - 1.0) < 1e-9, "ues[].delta", "weights must sum to 1");
}

Config load_config(const json& doc, std::vector<std::string>* warnings) {
  Node root(doc, "");
  root.expect_object({"sim", "es", "ue_defaults", "ues"});
  Config config;
  json empty = json::object();
  config.sim = parse_sim(root.has("sim") ? root.at("sim") : Node(empty, "sim"));
  config.es = parse_es(root.has("es") ? root.at("es") : Node(empty, "es"));

  Node ues = root.at("ues");
  if (!ues.raw().is_array()) throw ConfigError("ues", "expected an array");
  json defaults = root.has("ue_defaults") ? doc.at("ue_defaults") : json::object();
  if (!defaults.is_object()) throw ConfigError("ue_defaults", "expected an object");
  // Merged documents must outlive the Nodes that point into them.
  std::vector<json> merged;
  merged.reserve(ues.raw().size());
  for (std::size_t k = 0; k < ues.raw().size(); ++k) {
    merged.push_back(merge(defaults, ues.raw().at(k)));
    config.fleet.push_back(parse_ue(Node(merged.back(), "ues[" + std::to_string(k) + "]"),
                                    k, config.sim.slot_duration));
  }

  bool any_nan = false;
  double sum = 0.0;
  for (const UEConfig& ue : config.fleet) {
    if (std::isnan(ue.delta)) {
      any_nan = true;
    } else {
      sum += ue.delta;
    }
  }
  if (any_nan) {
    bool all_nan = true;
    for (const UEConfig& ue : config.fleet) all_nan = all_nan && std::isnan(ue.delta);
    if (!all_nan) throw ConfigError("ues[].delta", "give delta for every UE or for none");
    for (UEConfig& ue : config.fleet) ue.delta = 1.0 / static_cast<double>(config.fleet.size());
  } else if (sum > 0 && std::abs(sum - 1.0) > 1e-9) {
    for (UEConfig& ue : config.fleet) ue.delta /= sum;
    if (warnings) {
      std::ostringstream msg;
      msg << "delta weights summed to " << sum << "; normalized to 1";
      warnings->push_back(msg.str());
    }
  }

  validate(config);
  return config;
}

Config load_config_file(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("<file>", std::string("malformed document: ") + e.what());
  }
  return load_config(doc, warnings);
}

json to_json(const Config& config) {
  const SimConfig& s = config.sim;
  json sim{{"slot_duration", s.slot_duration},
           {"horizon", s.horizon},
           {"warmup", s.warmup},
           {"v", s.v},
           {"policy", std::string(policy_name(s.policy))},
           {"rho_fixed", s.rho_fixed},
           {"force_offload", s.force_offload},
           {"seed", s.rng_seed},
           {"arrival_model", s.arrival_model == ArrivalModel::kPoisson ? "poisson"
                                                                       : "deterministic"}};
  json es{{"freq_set", config.es.freq_set},
          {"kappa", config.es.kappa},
          {"gamma", config.es.gamma},
          {"eta", config.es.eta},
          {"energy_constraint", config.es.energy_constraint}};
  json ues = json::array();
  for (const UEConfig& ue : config.fleet) {
    json lut = json::array();
    for (const CompressionProfile& p : ue.lut) lut.push_back(profile_json(p));
    ues.push_back(json{
        {"id", ue.id},
        {"lut_name", ue.lut_name},
        {"lut", lut},
        {"freq_set", ue.freq_set},
        {"kappa", ue.kappa},
        {"p_tx_max", ue.p_tx_max},
        {"channel", channel_json(ue.channel)},
        {"delta", ue.delta},
        {"arrival_mean", ue.arrival_mean},
        {"constraints",
         {{"delay_s", ue.constraints.delay_s},
          {"accuracy", ue.constraints.accuracy},
          {"ue_energy_j", ue.constraints.ue_energy_j}}},
        {"steps",
         {{"mu", ue.steps.mu}, {"nu", ue.steps.nu}, {"lambda", ue.steps.lambda}}}});
  }
  return json{{"sim", sim}, {"es", es}, {"ues", ues}};
}

}  // namespace goc
