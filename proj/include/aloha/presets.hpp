// Copyright 2026 The Aloha Stability Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ALOHA_PRESETS_HPP_
#define ALOHA_PRESETS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aloha/steady_state.hpp"
#include "aloha/topology.hpp"

namespace aloha {

// Named parameterisations of the reference scenarios:
//   fig4a, fig4c  two pairs given by mean SNRs (rho override)
//   fig2, fig10   bipolar pairs on a PPP, 25 m links, 17 dBm, alpha 3.8
//   fig5a         one base station, PPP users, uplink power control to 10 dB
//   fig5c         two base stations, PPP users, power control to 0 dB, -8 dB
struct PresetOptions {
  std::uint64_t seed = 1;
  // Square side in metres for fig2 and fig10.
  double side_length = 300.0;
};

std::vector<std::string> preset_names();

// Throws DomainError for an unknown name. Random presets redraw with a
// derived seed when the point process comes out empty.
Topology make_preset(const std::string& name, const PresetOptions& options = {});

// Traffic used with a preset when none is given; empty when the scenario
// does not fix one.
std::optional<TrafficConfig> preset_traffic(const std::string& name, std::size_t k);

}  // namespace aloha

#endif  // ALOHA_PRESETS_HPP_
