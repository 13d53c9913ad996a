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

#ifndef ALOHA_IO_HPP_
#define ALOHA_IO_HPP_

#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "aloha/numerics/pareto.hpp"
#include "aloha/regions.hpp"
#include "aloha/simulator.hpp"
#include "aloha/steady_state.hpp"

namespace aloha {

// {phi[], p[], mu[], x[], attracting, spectral_radius, consistency_residual,
//  state, states_examined, ambiguous}
nlohmann::json steady_state_to_json(const SteadyStateSolution& solution);

// {points: [[...], ...], generations, evaluations}
nlohmann::json front_to_json(const numerics::ParetoFront& front);

nlohmann::json unsat_region_to_json(const UnsatRegion& region);
nlohmann::json stability_region_to_json(const StabilityRegion& region);

// ids maps transmitter index to topology id; 1-based indices when empty.
nlohmann::json sim_result_to_json(const SimResult& result, std::span<const int> ids = {});
nlohmann::json verify_report_to_json(const VerifyReport& report, std::span<const int> ids = {});
nlohmann::json percent_stable_to_json(const std::vector<PercentStableRow>& rows);

// Pretty-printed with a trailing newline; "-" writes to stdout.
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace aloha

#endif  // ALOHA_IO_HPP_
