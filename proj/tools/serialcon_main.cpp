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

// serialcon: scenario runner for conventional and serial consensus
// formations.
//
//   serialcon run <config|preset-id> [--out-dir D] [--dt S] [--horizon T]
//   serialcon check <config|preset-id>
//   serialcon presets [--write DIR]
//   serialcon selftest [--seed N] [--trials K]
//
// Exit codes: 0 ok, 2 config error, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "serialcon/closed_loop.hpp"
#include "serialcon/error.hpp"
#include "serialcon/io.hpp"
#include "serialcon/kernels.hpp"
#include "serialcon/linalg.hpp"
#include "serialcon/performance.hpp"
#include "serialcon/random.hpp"
#include "serialcon/scenario.hpp"

namespace fs = std::filesystem;
using namespace serialcon;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct ConfigSource {
  std::string text;
  fs::path base_dir;
};

ConfigSource load_config(const std::string& arg) {
  if (fs::exists(arg)) {
    std::ifstream in(arg);
    if (!in) throw Error(Errc::io, "cannot read " + arg);
    std::ostringstream buf;
    buf << in.rdbuf();
    return {buf.str(), fs::path(arg).parent_path()};
  }
  std::string id = arg;
  if (id.starts_with("preset:")) id.erase(0, 7);
  if (id.ends_with(".toml")) id.erase(id.size() - 5);
  if (const Preset* p = find_preset(id)) {
    return {std::string(p->text), fs::current_path()};
  }
  throw Error(Errc::config, "no such config file or preset: " + arg);
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::config:
    case Errc::io:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

int cmd_run(const std::string& config, const RunOptions& opts) {
  const ConfigSource src = load_config(config);
  const auto scenarios = parse_scenarios(src.text, src.base_dir);
  int status = kExitOk;
  for (const Scenario& s : scenarios) {
    const ScenarioResult result = run_scenario(s, opts);
    for (const auto& line : result.summary_lines) std::cout << line << '\n';
    if (result.numerical_failure) status = kExitNumerical;
  }
  return status;
}

int cmd_check(const std::string& config) {
  const ConfigSource src = load_config(config);
  const auto scenarios = parse_scenarios(src.text, src.base_dir);
  for (const Scenario& s : scenarios) {
    for (Eigen::Index n : s.agent_counts) {
      if (s.kind == ScenarioKind::simulation) {
        (void)build_spec(s, n);
        (void)build_metric(s, n);
        (void)build_init(s, n);
      } else {
        (void)s.base.build(n);
      }
    }
    std::cout << s.name << ": ok (" << s.agent_counts.size()
              << " agent count" << (s.agent_counts.size() == 1 ? "" : "s")
              << ")\n";
  }
  return kExitOk;
}

int cmd_presets(const std::string& write_dir) {
  for (const Preset& p : presets()) {
    std::cout << p.id << "  " << p.description << '\n';
    if (!write_dir.empty()) {
      fs::create_directories(write_dir);
      write_file_atomic(fs::path(write_dir) / (std::string(p.id) + ".toml"),
                        [&](std::ostream& out) { out << p.text; });
    }
  }
  return kExitOk;
}

// Quick randomized sanity checks of the core guarantees; the full property
// suites live in the test binaries.
int cmd_selftest(std::uint64_t seed, int trials) {
  Rng rng(seed);
  std::uniform_int_distribution<int> size(2, 10);
  std::uniform_real_distribution<double> gain(0.1, 5.0);
  std::normal_distribution<double> normal;
  int failures = 0;

  auto report = [&](const char* name, int bad) {
    std::printf("%-28s %s (%d/%d failed)\n", name, bad == 0 ? "PASS" : "FAIL",
                bad, trials);
    failures += bad;
  };

  int pole_bad = 0;
  int bound_bad = 0;
  int closure_bad = 0;
  for (int t = 0; t < trials; ++t) {
    const int n = size(rng);
    const LaplacianMatrix l1 = laplacian_of(random_connected_digraph(rng, n, 0.4));
    const LaplacianMatrix l2 = laplacian_of(random_connected_digraph(rng, n, 0.4));
    const ControllerSpec spec = ControllerSpec::serial(l1, l2);
    ComplexList expected = eigenvalues(-l1.matrix());
    for (const Complex& z : eigenvalues(-l2.matrix())) expected.push_back(z);
    if (pairing_distance(spectrum(assemble(spec, Coordinates::physical)),
                         expected) > 1e-7) {
      ++pole_bad;
    }

    double p1 = gain(rng), p2 = gain(rng);
    while (p1 == p2) p2 = gain(rng);
    const ControllerSpec scalar = ControllerSpec::serial(l1, p1, p2);
    StateVector init{Vector::NullaryExpr(n, [&] { return normal(rng); }),
                     Vector::NullaryExpr(n, [&] { return normal(rng); })};
    const ClosedLoopSystem sys = assemble(scalar, Coordinates::physical);
    IntegrationOptions io;
    io.horizon = 20.0;
    io.dt = 0.05;
    const Trajectory traj =
        integrate(sys, init, io, ErrorMetric::for_spec(scalar, l1));
    const PerformanceReport rep = evaluate_performance(traj, scalar, l1);
    if (!rep.bound_satisfied.value_or(false)) ++bound_bad;

    const WeightedDigraph w = random_digraph(rng, n, 0.4);
    const double c = gain(rng);
    try {
      hop_sparsity_closure_demo(random_laplacian_on(rng, w, c),
                                random_laplacian_on(rng, w, c), w, c);
    } catch (const Error&) {
      ++closure_bad;
    }
  }
  std::printf("kernels: %s, seed %llu\n",
              std::string(kernels::to_string(kernels::active().isa)).c_str(),
              static_cast<unsigned long long>(seed));
  report("pole union", pole_bad);
  report("transient bound", bound_bad);
  report("sum/product closure", closure_bad);
  return failures == 0 ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial and conventional consensus formation simulator"};
  app.require_subcommand(1);

  RunOptions run_opts;
  std::string config;
  std::string out_dir = ".";
  double dt = 0.0;
  double horizon = 0.0;
  auto* run = app.add_subcommand("run", "Run every scenario in a config file");
  run->add_option("config", config, "Config file or bundled preset id")->required();
  run->add_option("--out-dir", out_dir, "Directory for output files");
  auto* dt_opt = run->add_option("--dt", dt, "Override the sampling step");
  auto* horizon_opt = run->add_option("--horizon", horizon, "Override the horizon");

  auto* check = app.add_subcommand("check", "Validate a config without running it");
  check->add_option("config", config, "Config file or bundled preset id")->required();

  std::string write_dir;
  auto* list = app.add_subcommand("presets", "List bundled scenario presets");
  list->add_option("--write", write_dir, "Also write the preset files here");

  std::uint64_t seed = 1;
  int trials = 20;
  auto* selftest = app.add_subcommand("selftest", "Randomized property checks");
  selftest->add_option("--seed", seed, "Random seed");
  selftest->add_option("--trials", trials, "Instances per property")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      run_opts.out_dir = out_dir;
      if (*dt_opt) run_opts.dt = dt;
      if (*horizon_opt) run_opts.horizon = horizon;
      if ((run_opts.dt && !(*run_opts.dt > 0.0)) ||
          (run_opts.horizon && !(*run_opts.horizon > 0.0))) {
        std::cerr << "error: --dt and --horizon must be positive\n";
        return kExitConfig;
      }
      return cmd_run(config, run_opts);
    }
    if (*check) return cmd_check(config);
    if (*list) return cmd_presets(write_dir);
    if (*selftest) return cmd_selftest(seed, trials);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
