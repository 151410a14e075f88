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


#ifndef GOC_TOOLS_CLI_HPP_
#define GOC_TOOLS_CLI_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "goc/engine.hpp"
#include "goc/model.hpp"

namespace goc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // runtime or numerical failure
inline constexpr int kExitUsage = 2;    // bad flags, bad config, unknown experiment

// Default output root when --out is absent.
inline constexpr const char* kOutputRootEnv = "GOC_OUTPUT_ROOT";

struct Outcome {
  int code = kExitOk;
  std::filesystem::path dir;  // empty if nothing was written
};

// args excludes the program name.
Outcome execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct Verdict {
  std::string what;
  double measured = 0.0;
  double limit = 0.0;
  bool upper = true;  // measured <= limit when true, >= otherwise
  bool ok = false;
};

// Constraint checks that apply to the policy of `config`.
std::vector<Verdict> verdicts(const Config& config, const RunSummary& summary);

}  // namespace goc::cli

#endif  // GOC_TOOLS_CLI_HPP_
