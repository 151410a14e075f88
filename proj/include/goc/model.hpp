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


#ifndef GOC_MODEL_HPP_
#define GOC_MODEL_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace goc {

// One row of an accuracy/throughput look-up table. The J factors are DUs per
// clock cycle.
struct CompressionProfile {
  int rho = 1;
  double accuracy = 1.0;        // fraction in (0, 1]
  double pixels = 1.0;          // M(rho)
  double bits_per_pixel = 1.0;  // N(rho)
  double j_offload = 1.0;       // compress + zip at the UE
  double j_local = 1.0;         // compress + classify at the UE
  double j_server = 1.0;        // classify at the edge server

  bool operator==(const CompressionProfile&) const = default;
};

using Lut = std::vector<CompressionProfile>;

// Bits needed to ship one compressed DU: pixels x bits-per-pixel.
double du_bits(const CompressionProfile& profile);

// Built-in tables. "deep_short" concatenates both encoder families (12 rows).
Lut deep_ce_lut();
Lut short_ce_lut();
Lut lut_preset(std::string_view name);
bool is_lut_preset(std::string_view name);

enum class FadingMode { kIidRayleigh, kClarkeCorrelated };

struct ChannelScenario {
  std::string name;
  double distance_m = 0.0;
  double bandwidth_hz = 2.5e6;
  double carrier_hz = 6e9;
  double pathloss_gain = 1.0;  // sigma_0^2
  double noise_psd = 3.98e-21;  // W/Hz, -174 dBm/Hz
  FadingMode fading = FadingMode::kIidRayleigh;
  double doppler_hz = 0.0;  // clarke mode only

  bool operator==(const ChannelScenario&) const = default;
};

// Named channel scenarios "A" (50 m) and "B" (500 m). Doppler is set to
// 1 / (2 pi tau) so that tau matches the coherence time.
ChannelScenario channel_preset(std::string_view name, double slot_duration);

// Long-term targets of one UE. Which ones are active depends on the policy.
struct ConstraintTargets {
  double delay_s = 0.2;      // D_avg
  double accuracy = 0.9;     // G_avg
  double ue_energy_j = 0.128;  // E_avg per slot (max-accuracy policy)

  bool operator==(const ConstraintTargets&) const = default;
};

struct StepSizes {
  double mu = 1.0;      // latency queue Z
  double nu = 1.0;      // accuracy queue Y
  double lambda = 1.0;  // UE energy queue S

  bool operator==(const StepSizes&) const = default;
};

struct UEConfig {
  int id = 0;
  std::string lut_name;  // preset name, or "custom"
  Lut lut;
  std::vector<double> freq_set;  // Hz, ascending
  double kappa = 1.097e-27;
  double p_tx_max = 0.1;  // W
  ChannelScenario channel;
  double delta = 1.0;
  double arrival_mean = 2.0;  // DU per slot
  ConstraintTargets constraints;
  StepSizes steps;

  double bandwidth() const { return channel.bandwidth_hz; }
  // Little's-law queue target: D_avg * (A / tau) with A in DU per slot.
  double queue_target(double slot_duration) const {
    return constraints.delay_s * arrival_mean / slot_duration;
  }

  bool operator==(const UEConfig&) const = default;
};

struct ESConfig {
  std::vector<double> freq_set;  // Hz, ascending
  double kappa = 1.097e-27;
  double gamma = 0.5;  // weight of UE energy vs ES energy
  double eta = 1.0;
  double energy_constraint = 1.0;  // J per slot, max-accuracy policy only

  bool operator==(const ESConfig&) const = default;
};

enum class PolicyKind { kMuMeda, kMuMade, kFixedAccuracy, kHybridFixedRate };

std::string_view policy_name(PolicyKind kind);
PolicyKind parse_policy(std::string_view name);

enum class ArrivalModel { kPoisson, kDeterministic };

struct SimConfig {
  double slot_duration = 0.05;
  std::int64_t horizon = 20000;
  std::int64_t warmup = 5000;
  double v = 1e5;
  PolicyKind policy = PolicyKind::kMuMeda;
  int rho_fixed = 8;
  bool force_offload = false;
  std::uint64_t rng_seed = 1;
  ArrivalModel arrival_model = ArrivalModel::kPoisson;

  bool operator==(const SimConfig&) const = default;
};

struct Config {
  std::vector<UEConfig> fleet;
  ESConfig es;
  SimConfig sim;

  bool operator==(const Config&) const = default;
};

// Validation failure that names the offending field, e.g. "ues[1].freq_set".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Frequencies {0.1, 0.2, ..., 1.0} x base.
std::vector<double> decile_frequencies(double base_hz);

// Parses and validates a configuration document. Unnormalized delta weights
// are rescaled to sum to one; a message is appended to `warnings` if given.
Config load_config(const nlohmann::json& doc,
                   std::vector<std::string>* warnings = nullptr);
Config load_config_file(const std::string& path,
                        std::vector<std::string>* warnings = nullptr);

// Fully explicit document; load_config(to_json(c)) == c.
nlohmann::json to_json(const Config& config);

// Throws ConfigError on the first broken invariant.
void validate(const Config& config);

}  // namespace goc

#endif  // GOC_MODEL_HPP_
