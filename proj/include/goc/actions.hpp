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


#ifndef GOC_ACTIONS_HPP_
#define GOC_ACTIONS_HPP_

#include <vector>

namespace goc {

// Per-slot decision of one UE. `lut_index` selects the compression profile
// in the UE's LUT (rows may share a rho when two encoder families coexist).
struct UEAction {
  bool offload = false;
  int lut_index = 0;
  double f_d = 0.0;   // Hz
  double rate = 0.0;  // bit/s, 0 when processing locally

  bool operator==(const UEAction&) const = default;
};

// Server clock and its split over the (UE, LUT index) queues.
struct ESAction {
  double f_s = 0.0;
  std::vector<std::vector<double>> f_split;

  bool operator==(const ESAction&) const = default;
};

}  // namespace goc

#endif  // GOC_ACTIONS_HPP_
