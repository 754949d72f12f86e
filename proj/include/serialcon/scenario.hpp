/*
 * Copyright 2026 The serialcon Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "serialcon/controllers.hpp"
#include "serialcon/graphs.hpp"
#include "serialcon/performance.hpp"

namespace serialcon {

// Either a named topology id or an edge-list file.
struct GraphRef {
  std::optional<Topology> named;
  std::filesystem::path file;

  WeightedDigraph build(Eigen::Index n) const;
  std::string label() const;
};

enum class InitRule { impulse_leader, explicit_vectors };
enum class ScenarioKind { simulation, closure };
enum class Output { trajectory, performance, spectrum, plot, certificate };

std::string_view to_string(Output o) noexcept;

struct Scenario {
  std::string name;
  int line = 0;
  ScenarioKind kind = ScenarioKind::simulation;

  GraphRef base;
  std::vector<Eigen::Index> agent_counts;

  ControllerKind controller = ControllerKind::serial;
  // (r1, r0) for conventional, (p1, p2) for serial.
  double gain1 = 0.0;
  double gain2 = 0.0;
  // Per-Laplacian graph overrides: conventional (velocity, position),
  // serial (L1, L2). Empty means the base graph.
  std::optional<GraphRef> graph1;
  std::optional<GraphRef> graph2;
  std::optional<GraphRef> metric;

  std::optional<std::vector<double>> offsets;
  double v_ref = 0.0;

  InitRule init = InitRule::impulse_leader;
  std::vector<double> x0;
  std::vector<double> v0;

  double horizon = 30.0;
  double dt = 0.02;
  std::set<Output> outputs;

  // closure scenarios: the per-Laplacian gain bound c.
  double closure_gain = 0.0;
};

// Parses and validates every scenario in a config text. Relative file
// references resolve against base_dir. Throws Error(config) naming the line
// and field.
std::vector<Scenario> parse_scenarios(std::string_view text,
                                      const std::filesystem::path& base_dir);

// Per-N construction used by run_scenario; exposed for tests.
ControllerSpec build_spec(const Scenario& s, Eigen::Index n);
LaplacianMatrix build_metric(const Scenario& s, Eigen::Index n);
StateVector build_init(const Scenario& s, Eigen::Index n);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<double> dt;
  std::optional<double> horizon;
  bool write_outputs = true;
};

struct ScenarioResult {
  std::string name;
  std::vector<SweepRow> rows;
  std::optional<ClosureCertificates> closure;
  // The 1-step certificate of the product, reported alongside the closure.
  std::optional<FeedbackClassCertificate> product_one_step;
  std::vector<std::string> summary_lines;
  bool numerical_failure = false;
};

// Runs one scenario, writes its requested outputs atomically into
// opts.out_dir and appends one summary line per N.
ScenarioResult run_scenario(const Scenario& s, const RunOptions& opts);

// Stable one-line summary (6 significant digits) used by the CLI and the
// golden regression file.
std::string summary_line(const std::string& scenario, const SweepRow& row);

void write_performance_csv(std::ostream& out, const Scenario& s,
                           const std::vector<SweepRow>& rows);

struct Preset {
  std::string_view id;
  std::string_view description;
  std::string_view text;
};

std::span<const Preset> presets();
const Preset* find_preset(std::string_view id);

}  // namespace serialcon
