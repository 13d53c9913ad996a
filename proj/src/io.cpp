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

#include "aloha/io.hpp"

#include <fstream>
#include <iostream>

#include "aloha/errors.hpp"

namespace aloha {
namespace {

using nlohmann::json;

int id_of(std::size_t index, std::span<const int> ids) {
  return index < ids.size() ? ids[index] : static_cast<int>(index) + 1;
}

json window_to_json(const QueueWindow& w) {
  return {{"slots", w.slots}, {"empty_fraction", w.empty_fraction()}, {"slope", w.slope()}};
}

}  // namespace

json steady_state_to_json(const SteadyStateSolution& s) {
  json phi = json::array();
  for (std::size_t k = 0; k < s.phi.size(); ++k) phi.push_back(s.phi.unsaturated(k) ? "U" : "S");
  return {{"state", s.phi.to_string()},
          {"phi", phi},
          {"p", s.p},
          {"mu", s.service_rate},
          {"x", s.busy},
          {"attracting", s.attracting},
          {"spectral_radius", s.spectral_radius},
          {"consistency_residual", s.consistency_residual},
          {"states_examined", s.states_examined},
          {"ambiguous", s.ambiguous}};
}

json front_to_json(const numerics::ParetoFront& front) {
  return {{"points", front.points},
          {"generations", front.generations},
          {"evaluations", front.evaluations}};
}

json unsat_region_to_json(const UnsatRegion& region) {
  json doc{{"lambda", region.lambda},
           {"empty", region.empty},
           {"parameter_groups", region.map.group},
           {"q1_upper", front_to_json(region.q1)},
           {"q2_lower", front_to_json(region.q2)}};
  return doc;
}

json stability_region_to_json(const StabilityRegion& region) {
  return {{"empty", region.empty},
          {"parameter_groups", region.map.group},
          {"q3", front_to_json(region.q3)}};
}

json sim_result_to_json(const SimResult& result, std::span<const int> ids) {
  json tx = json::array();
  for (std::size_t i = 0; i < result.tx.size(); ++i) {
    const auto& st = result.tx[i];
    tx.push_back({{"id", id_of(i, ids)},
                  {"measured_p", st.measured_p},
                  {"throughput", st.throughput},
                  {"attempts", st.attempts},
                  {"successes", st.successes},
                  {"mean_queue", st.mean_queue},
                  {"arrivals", st.arrivals},
                  {"departures", st.departures},
                  {"final_queue", st.final_queue},
                  {"stable", st.stable},
                  {"window", window_to_json(st.window)}});
  }
  return {{"slots", result.slots},
          {"measured_slots", result.measured_slots},
          {"total_throughput", result.total_throughput},
          {"stable_count", result.stable_count},
          {"all_stable", result.all_stable()},
          {"transmitters", tx}};
}

json verify_report_to_json(const VerifyReport& report, std::span<const int> ids) {
  json rows = json::array();
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    rows.push_back({{"id", id_of(i, ids)},
                    {"analytic_p", r.analytic_p},
                    {"measured_p", r.measured_p},
                    {"p_error", r.p_error},
                    {"expected_throughput", r.expected_throughput},
                    {"throughput", r.throughput},
                    {"throughput_rel_error", r.throughput_rel_error},
                    {"analytic_unsaturated", r.analytic_unsaturated},
                    {"simulated_stable", r.simulated_stable},
                    {"p_ok", r.p_ok},
                    {"throughput_ok", r.throughput_ok},
                    {"state_ok", r.state_ok}});
  }
  json offending = json::array();
  for (const std::size_t i : report.offending) offending.push_back(id_of(i, ids));
  return {{"verdict", report.pass ? "PASS" : "FAIL"},
          {"offending", offending},
          {"rows", rows},
          {"analysis", steady_state_to_json(report.analysis)},
          {"simulation", sim_result_to_json(report.simulation, ids)}};
}

json percent_stable_to_json(const std::vector<PercentStableRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"side_length", r.side_length},
                   {"samples", r.samples},
                   {"empty_draws", r.empty_draws},
                   {"mean_transmitters", r.mean_transmitters},
                   {"percent_stable", r.percent_stable},
                   {"standard_error", r.standard_error}});
  }
  return out;
}

void write_json(const json& doc, const std::filesystem::path& path) {
  if (path == "-") {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace aloha
