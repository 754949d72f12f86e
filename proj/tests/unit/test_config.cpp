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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "serialcon/config.hpp"
#include "serialcon/io.hpp"
#include "serialcon/scenario.hpp"
#include "test_util.hpp"

using namespace serialcon;
using namespace serialcon::test;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("serialcon_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kMinimal = R"(
[scenario.demo]
base_graph = "ahead_path"
N = 4
controller = "serial"
gains = {p1 = 2, p2 = 0.5}
horizon = 2
dt = 0.1
)";

std::string config_error(const std::string& text) {
  std::string msg;
  const auto code = error_code_of([&] { parse_scenarios(text, "."); }, &msg);
  CHECK(code == Errc::config);
  return msg;
}

}  // namespace

TEST_CASE("config parser") {
  const auto doc = config::parse(
      "top = 1\n"
      "[scenario.a]  # comment\n"
      "s = \"x\\\"y\"\n"
      "arr = [1, 2.5e1, -3]\n"
      "tbl = {p1 = 2, p2 = 0.5}\n"
      "flag = true\n"
      "big = 1_000\n");
  REQUIRE(doc.sections.size() == 2);
  CHECK(std::get<double>(doc.sections[0].entries.at("top").value) == 1.0);
  const auto& a = doc.sections[1];
  CHECK(a.name == "a");
  CHECK(a.line == 2);
  CHECK(std::get<std::string>(a.entries.at("s").value) == "x\"y");
  const auto& arr = std::get<config::Array>(a.entries.at("arr").value);
  REQUIRE(arr.size() == 3);
  CHECK(std::get<double>(arr[1]) == 25.0);
  CHECK(std::get<config::Table>(a.entries.at("tbl").value).at("p2") == 0.5);
  CHECK(std::get<bool>(a.entries.at("flag").value));
  CHECK(std::get<double>(a.entries.at("big").value) == 1000.0);
  CHECK(a.entries.at("big").line == 7);
}

TEST_CASE("config parser errors carry the line") {
  std::string msg;
  CHECK(error_code_of([] { config::parse("[a]\nx = 1\nx = 2\n"); }, &msg) == Errc::config);
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(error_code_of([] { config::parse("[a]\n[a]\n"); }) == Errc::config);
  CHECK(error_code_of([] { config::parse("x = 1.2.3\n"); }) == Errc::config);
  CHECK(error_code_of([] { config::parse("x = \"open\n"); }) == Errc::config);
  CHECK(error_code_of([] { config::parse("x = 1 y\n"); }) == Errc::config);
  CHECK(error_code_of([] { config::parse("x = {a = \"s\"}\n"); }) == Errc::config);
}

TEST_CASE("scenario parsing: minimal config") {
  const auto scenarios = parse_scenarios(kMinimal, ".");
  REQUIRE(scenarios.size() == 1);
  const Scenario& s = scenarios[0];
  CHECK(s.name == "demo");
  CHECK(s.agent_counts == std::vector<Eigen::Index>{4});
  CHECK(s.controller == ControllerKind::serial);
  CHECK(s.gain1 == 2.0);
  CHECK(s.init == InitRule::impulse_leader);
  CHECK(s.outputs.count(Output::trajectory));
  const StateVector init = build_init(s, 4);
  CHECK(init.v[0] == 1.0);
  CHECK(init.v.tail(3).isZero(0.0));
  CHECK(init.x.isZero(0.0));
  const ControllerSpec spec = build_spec(s, 4);
  CHECK(spec.scalar_gains().has_value());
}

TEST_CASE("scenario parsing: validation messages name the field") {
  std::string text = kMinimal;
  SUBCASE("missing controller") {
    text.replace(text.find("controller = \"serial\"\n"), 22, "");
    const std::string msg = config_error(text);
    CHECK(msg.find("'controller'") != std::string::npos);
    CHECK(msg.find("scenario 'demo'") != std::string::npos);
  }
  SUBCASE("unknown field") {
    text += "gian = 3\n";
    const std::string msg = config_error(text);
    CHECK(msg.find("'gian'") != std::string::npos);
    CHECK(msg.find("line 9") != std::string::npos);
  }
  SUBCASE("wrong gain names for the controller") {
    text.replace(text.find("p1"), 2, "r1");
    CHECK(config_error(text).find("'gains'") != std::string::npos);
  }
  SUBCASE("unknown topology") {
    text.replace(text.find("ahead_path"), 10, "ring");
    CHECK(config_error(text).find("'base_graph'") != std::string::npos);
  }
  SUBCASE("explicit init length mismatch") {
    text += "init = \"explicit\"\nx0 = [0, 0]\nv0 = [1, 0]\n";
    CHECK(config_error(text).find("'x0'") != std::string::npos);
  }
  SUBCASE("missing edge-list file") {
    text.replace(text.find("base_graph = \"ahead_path\""), 25, "base_graph_file = \"nope.txt\"");
    CHECK(config_error(text).find("'base_graph_file'") != std::string::npos);
  }
  SUBCASE("no scenarios") { config_error("horizon = 3\n"); }
  SUBCASE("global key nobody uses") {
    config_error(std::string("mystery = 1\n") + kMinimal);
  }
}

TEST_CASE("scenario parsing: global defaults") {
  const std::string text = std::string("horizon = 7\ndt = 0.5\n") +
                           "[a]\nbase_graph = \"ahead_cycle\"\nN = [3, 5]\n"
                           "controller = \"conventional\"\ngains = {r1 = 2.5, r0 = 1}\n"
                           "[b]\nkind = \"closure\"\nbase_graph = \"undir_path\"\n"
                           "L1_graph = \"ahead_path\"\nL2_graph = \"behind_path\"\nN = 6\ngain = 2\n";
  const auto scenarios = parse_scenarios(text, ".");
  REQUIRE(scenarios.size() == 2);
  CHECK(scenarios[0].horizon == 7.0);
  CHECK(scenarios[0].agent_counts == std::vector<Eigen::Index>{3, 5});
  CHECK(scenarios[1].kind == ScenarioKind::closure);
}

TEST_CASE("edge lists") {
  std::istringstream in("# comment\nn 3\n2 1 1.5\n3 2 1\n");
  const WeightedDigraph g = read_edge_list(in);
  CHECK(g.size() == 3);
  CHECK(g.weight(1, 0) == 1.5);
  std::ostringstream out;
  write_edge_list(out, g);
  std::istringstream again(out.str());
  CHECK(read_edge_list(again).weights() == g.weights());

  std::string msg;
  std::istringstream bad("n 2\n1 3 1\n");
  CHECK(error_code_of([&] { read_edge_list(bad); }, &msg) == Errc::config);
  CHECK(msg.find("line 2") != std::string::npos);
  std::istringstream noheader("1 2 1\n");
  CHECK(error_code_of([&] { read_edge_list(noheader); }) == Errc::config);
  std::istringstream negative("n 2\n1 2 -1\n");
  CHECK(error_code_of([&] { read_edge_list(negative); }) == Errc::config);
}

TEST_CASE("edge-list scenarios and atomic writes") {
  TempDir dir;
  write_file_atomic(dir.path / "g.txt", [](std::ostream& out) {
    write_edge_list(out, build_named_topology(Topology::ahead_path, 5));
  });
  CHECK_FALSE(fs::exists(dir.path / "g.txt.tmp"));
  const std::string text =
      "[f]\nbase_graph_file = \"g.txt\"\ncontroller = \"serial\"\n"
      "gains = {p1 = 2, p2 = 0.5}\nhorizon = 3\n";
  const auto scenarios = parse_scenarios(text, dir.path);
  CHECK(scenarios[0].agent_counts == std::vector<Eigen::Index>{5});
  CHECK(build_metric(scenarios[0], 5).matrix() == named(Topology::ahead_path, 5).matrix());
}

TEST_CASE("run_scenario writes deterministic outputs") {
  TempDir dir;
  std::string text = kMinimal;
  text += "outputs = [\"trajectory\", \"performance\", \"spectrum\", \"plot\"]\n";
  const Scenario s = parse_scenarios(text, ".")[0];
  RunOptions opts;
  opts.out_dir = dir.path / "one";
  const ScenarioResult r1 = run_scenario(s, opts);
  opts.out_dir = dir.path / "two";
  run_scenario(s, opts);
  for (const char* f : {"demo_N4_trajectory.csv", "demo_performance.csv",
                        "demo_N4_spectrum.txt", "demo.gp"}) {
    REQUIRE(fs::exists(dir.path / "one" / f));
    CHECK(slurp(dir.path / "one" / f) == slurp(dir.path / "two" / f));
  }
  REQUIRE(r1.summary_lines.size() == 1);
  CHECK(r1.summary_lines[0].rfind("demo N=4 stable observed_ratio=", 0) == 0);
  CHECK(r1.summary_lines[0].find("alpha=3 bound satisfied") != std::string::npos);
  const std::string perf = slurp(dir.path / "one" / "demo_performance.csv");
  CHECK(perf.rfind("scenario,N,controller,base_graph,consensus_stable,alpha,", 0) == 0);
}

TEST_CASE("run options override the horizon") {
  const Scenario s = parse_scenarios(kMinimal, ".")[0];
  RunOptions opts;
  opts.write_outputs = false;
  opts.horizon = 1.0;
  const ScenarioResult r = run_scenario(s, opts);
  CHECK(r.rows[0].report->horizon == 1.0);
}

TEST_CASE("bundled presets parse and are listed") {
  const auto all = presets();
  CHECK(all.size() == 7);
  for (const char* id : {"fig2_cycle_serial", "fig2_cycle_conventional", "fig2_path_serial",
                         "fig2_path_conventional", "fig3_undir_conventional",
                         "fig3_bidirectional_serial", "prop2_demo"}) {
    const Preset* p = find_preset(id);
    REQUIRE(p != nullptr);
    CHECK_FALSE(p->description.empty());
    CHECK_NOTHROW(parse_scenarios(p->text, "."));
  }
  CHECK(find_preset("nope") == nullptr);
}

TEST_CASE("fig3 presets build the intended controllers") {
  const Scenario conv = parse_scenarios(find_preset("fig3_undir_conventional")->text, ".")[0];
  const ControllerSpec c = build_spec(conv, 5);
  CHECK(c.first().matrix() == 2.5 * named(Topology::ahead_path, 5).matrix());
  CHECK(c.second().matrix() == named(Topology::undir_path, 5).matrix());

  const Scenario ser = parse_scenarios(find_preset("fig3_bidirectional_serial")->text, ".")[0];
  const ControllerSpec s = build_spec(ser, 5);
  const FeedbackMatrices fm = synthesize(s);
  const Matrix la = named(Topology::ahead_path, 5).matrix();
  const Matrix lb = named(Topology::behind_path, 5).matrix();
  CHECK(max_abs_diff(fm.velocity_gain, 2.0 * la + 0.5 * lb) < 1e-15);
  CHECK(max_abs_diff(fm.position_gain, la * lb) < 1e-15);
}
