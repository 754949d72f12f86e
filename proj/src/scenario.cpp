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

#include "serialcon/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "serialcon/closed_loop.hpp"
#include "serialcon/config.hpp"
#include "serialcon/error.hpp"
#include "serialcon/io.hpp"
#include "serialcon/linalg.hpp"

namespace serialcon {

namespace {

namespace fs = std::filesystem;

// Reads typed fields out of one merged scenario section and rejects keys
// nobody asked for, so typos surface as config errors.
class FieldReader {
 public:
  FieldReader(std::string scenario, std::map<std::string, config::Entry> entries,
              int section_line, std::set<std::string> inherited)
      : scenario_(std::move(scenario)),
        entries_(std::move(entries)),
        inherited_(std::move(inherited)),
        section_line_(section_line) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what,
                         int line = 0) const {
    std::ostringstream msg;
    msg << "scenario '" << scenario_ << "'";
    const int at = line > 0 ? line : line_of(field);
    if (at > 0) msg << " (line " << at << ")";
    msg << ", field '" << field << "': " << what;
    throw Error(Errc::config, msg.str());
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  const config::Value* get(const std::string& key) {
    used_.insert(key);
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second.value;
  }

  std::optional<std::string> string(const std::string& key) {
    const config::Value* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (const auto* s = std::get_if<std::string>(v)) return *s;
    fail(key, "expected a string, got " + config::describe(*v));
  }

  std::optional<double> number(const std::string& key) {
    const config::Value* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (const auto* d = std::get_if<double>(v)) return *d;
    fail(key, "expected a number, got " + config::describe(*v));
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    const config::Value* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (const auto* d = std::get_if<double>(v)) return std::vector<double>{*d};
    const auto* arr = std::get_if<config::Array>(v);
    if (arr == nullptr) fail(key, "expected a number or an array of numbers");
    std::vector<double> out;
    for (const auto& item : *arr) {
      const auto* d = std::get_if<double>(&item);
      if (d == nullptr) fail(key, "array entries must be numbers");
      out.push_back(*d);
    }
    return out;
  }

  std::optional<std::vector<std::string>> strings(const std::string& key) {
    const config::Value* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (const auto* s = std::get_if<std::string>(v)) {
      return std::vector<std::string>{*s};
    }
    const auto* arr = std::get_if<config::Array>(v);
    if (arr == nullptr) fail(key, "expected a string or an array of strings");
    std::vector<std::string> out;
    for (const auto& item : *arr) {
      const auto* s = std::get_if<std::string>(&item);
      if (s == nullptr) fail(key, "array entries must be strings");
      out.push_back(*s);
    }
    return out;
  }

  std::optional<config::Table> table(const std::string& key) {
    const config::Value* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (const auto* t = std::get_if<config::Table>(v)) return *t;
    fail(key, "expected an inline table {k = v, ...}");
  }

  // Global defaults only have to be used by some scenario; the caller
  // checks that across the whole file.
  void reject_unused() const {
    for (const auto& [key, entry] : entries_) {
      if (!used_.count(key) && !inherited_.count(key)) {
        fail(key, "unknown field", entry.line);
      }
    }
  }

  const std::set<std::string>& used() const { return used_; }

  int section_line() const { return section_line_; }

 private:
  int line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? section_line_ : it->second.line;
  }

  std::string scenario_;
  std::map<std::string, config::Entry> entries_;
  std::set<std::string> inherited_;
  std::set<std::string> used_;
  int section_line_;
};

std::optional<GraphRef> read_graph(FieldReader& r, const std::string& id_key,
                                   const std::string& file_key,
                                   const fs::path& base_dir) {
  auto id = r.string(id_key);
  auto file = r.string(file_key);
  if (id && file) r.fail(id_key, "give either '" + id_key + "' or '" + file_key + "'");
  if (id) {
    try {
      return GraphRef{parse_topology(*id), {}};
    } catch (const Error& e) {
      r.fail(id_key, e.what());
    }
  }
  if (file) {
    fs::path p(*file);
    if (p.is_relative()) p = base_dir / p;
    if (!fs::exists(p)) r.fail(file_key, "file not found: " + p.string());
    return GraphRef{std::nullopt, p};
  }
  return std::nullopt;
}

Output parse_output(FieldReader& r, const std::string& id) {
  for (Output o : {Output::trajectory, Output::performance, Output::spectrum,
                   Output::plot, Output::certificate}) {
    if (to_string(o) == id) return o;
  }
  r.fail("outputs", "unknown output '" + id + "'");
}

Eigen::Index file_graph_size(const GraphRef& g) {
  return g.named ? -1 : read_edge_list_file(g.file).size();
}

Scenario read_scenario(const std::string& name, int line,
                       std::map<std::string, config::Entry> merged,
                       std::set<std::string> inherited, const fs::path& base_dir,
                       std::set<std::string>& used) {
  FieldReader r(name, std::move(merged), line, std::move(inherited));
  struct RecordUsed {
    const FieldReader& r;
    std::set<std::string>& used;
    ~RecordUsed() { used.insert(r.used().begin(), r.used().end()); }
  } record{r, used};
  Scenario s;
  s.name = name;
  s.line = line;

  const std::string kind = r.string("kind").value_or("simulation");
  if (kind == "simulation") {
    s.kind = ScenarioKind::simulation;
  } else if (kind == "closure") {
    s.kind = ScenarioKind::closure;
  } else {
    r.fail("kind", "expected \"simulation\" or \"closure\"");
  }

  auto base = read_graph(r, "base_graph", "base_graph_file", base_dir);
  if (!base) r.fail("base_graph", "missing required field");
  s.base = *base;

  const bool serial_like = s.kind == ScenarioKind::closure;
  if (s.kind == ScenarioKind::simulation) {
    const auto controller = r.string("controller");
    if (!controller) r.fail("controller", "missing required field");
    if (*controller == "serial") {
      s.controller = ControllerKind::serial;
    } else if (*controller == "conventional") {
      s.controller = ControllerKind::conventional;
    } else {
      r.fail("controller", "expected \"serial\" or \"conventional\"");
    }
  }
  const bool serial = serial_like || s.controller == ControllerKind::serial;

  s.graph1 = read_graph(r, "L1_graph", "L1_file", base_dir);
  s.graph2 = serial ? read_graph(r, "L2_graph", "L2_file", base_dir)
                    : read_graph(r, "L0_graph", "L0_file", base_dir);

  // Agent counts: explicit, or implied by edge-list files.
  Eigen::Index implied = -1;
  for (const GraphRef* g : {&s.base, s.graph1 ? &*s.graph1 : nullptr,
                            s.graph2 ? &*s.graph2 : nullptr}) {
    if (g == nullptr || g->named) continue;
    const Eigen::Index n = file_graph_size(*g);
    if (implied >= 0 && implied != n) {
      r.fail("base_graph_file", "edge-list files disagree on the agent count");
    }
    implied = n;
  }
  if (auto counts = r.numbers("N")) {
    if (counts->empty()) r.fail("N", "agent count list is empty");
    for (double c : *counts) {
      if (c < 1 || c != std::floor(c)) r.fail("N", "agent counts must be positive integers");
      if (implied >= 0 && static_cast<Eigen::Index>(c) != implied) {
        r.fail("N", "does not match the edge-list file size");
      }
      s.agent_counts.push_back(static_cast<Eigen::Index>(c));
    }
  } else if (implied >= 0) {
    s.agent_counts.push_back(implied);
  } else {
    r.fail("N", "missing required field");
  }
  for (const GraphRef* g : {&s.base, s.graph1 ? &*s.graph1 : nullptr,
                            s.graph2 ? &*s.graph2 : nullptr}) {
    if (g == nullptr || !g->named) continue;
    for (Eigen::Index n : s.agent_counts) {
      if (n < 2) r.fail("N", "named topologies need at least 2 agents");
    }
  }

  if (s.kind == ScenarioKind::closure) {
    const auto c = r.number("gain");
    if (!c) r.fail("gain", "missing required field");
    if (!(*c > 0.0)) r.fail("gain", "must be positive");
    s.closure_gain = *c;
    s.outputs = {Output::certificate};
    if (auto outs = r.strings("outputs")) {
      s.outputs.clear();
      for (const auto& o : *outs) s.outputs.insert(parse_output(r, o));
    }
    r.reject_unused();
    return s;
  }

  const auto gains = r.table("gains");
  if (!gains) r.fail("gains", "missing required field");
  const std::string k1 = serial ? "p1" : "r1";
  const std::string k2 = serial ? "p2" : "r0";
  for (const auto& [key, value] : *gains) {
    if (key != k1 && key != k2) r.fail("gains", "unexpected gain '" + key + "'");
  }
  if (!gains->count(k1) || !gains->count(k2)) {
    r.fail("gains", "expected {" + k1 + " = ..., " + k2 + " = ...}");
  }
  s.gain1 = gains->at(k1);
  s.gain2 = gains->at(k2);
  if (!(s.gain1 > 0.0) || !(s.gain2 > 0.0)) r.fail("gains", "gains must be positive");

  s.metric = read_graph(r, "metric", "metric_file", base_dir);

  s.offsets = r.numbers("offsets");
  s.v_ref = r.number("v_ref").value_or(0.0);

  const std::string init = r.string("init").value_or("impulse_leader");
  if (init == "impulse_leader") {
    s.init = InitRule::impulse_leader;
  } else if (init == "explicit") {
    s.init = InitRule::explicit_vectors;
    auto x0 = r.numbers("x0");
    auto v0 = r.numbers("v0");
    if (!x0 || !v0) r.fail("init", "explicit init needs x0 and v0");
    s.x0 = *x0;
    s.v0 = *v0;
  } else {
    r.fail("init", "expected \"impulse_leader\" or \"explicit\"");
  }
  for (Eigen::Index n : s.agent_counts) {
    const auto un = static_cast<std::size_t>(n);
    if (s.offsets && s.offsets->size() != un) {
      r.fail("offsets", "length differs from N=" + std::to_string(n));
    }
    if (s.init == InitRule::explicit_vectors &&
        (s.x0.size() != un || s.v0.size() != un)) {
      r.fail("x0", "x0/v0 length differs from N=" + std::to_string(n));
    }
  }

  s.horizon = r.number("horizon").value_or(30.0);
  s.dt = r.number("dt").value_or(0.02);
  if (!(s.horizon > 0.0)) r.fail("horizon", "must be positive");
  if (!(s.dt > 0.0)) r.fail("dt", "must be positive");

  s.outputs = {Output::trajectory, Output::performance};
  if (auto outs = r.strings("outputs")) {
    s.outputs.clear();
    for (const auto& o : *outs) {
      const Output out = parse_output(r, o);
      if (out == Output::certificate) {
        r.fail("outputs", "certificate output is for closure scenarios");
      }
      s.outputs.insert(out);
    }
  }
  r.reject_unused();
  return s;
}

std::string fmt(const char* pattern, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string certificate_text(const FeedbackClassCertificate& c) {
  std::ostringstream out;
  out << "q=" << c.hops << " c=" << fmt("%.6g", c.gain_bound) << ' '
      << (c.holds ? "holds" : "fails");
  return out.str();
}

void write_certificate(std::ostream& out, const std::string& label,
                       const FeedbackClassCertificate& c) {
  out << label << ": " << certificate_text(c) << '\n';
  for (const auto& v : c.violations) {
    out << "  " << to_string(v.reason);
    if (v.i >= 0) out << " row " << v.i + 1;
    if (v.j >= 0) out << " col " << v.j + 1;
    out << " value " << fmt("%.17g", v.value) << '\n';
  }
}

std::string file_stem(const Scenario& s, Eigen::Index n) {
  return s.name + "_N" + std::to_string(n);
}

void write_spectrum(std::ostream& out, const ClosedLoopSystem& sys,
                    const StabilityReport& st) {
  write_matrix_dump(out, sys);
  const ComplexList eig = spectrum(sys);
  out << "eigenvalues " << eig.size() << '\n';
  for (const Complex& z : eig) {
    out << fmt("%.17g", z.real()) << ' ' << fmt("%.17g", z.imag()) << '\n';
  }
  out << "consensus_stable " << (st.consensus_stable ? 1 : 0) << '\n';
}

void write_plot_script(std::ostream& out, const Scenario& s) {
  out << "# gnuplot: position errors e_p(t) per scenario size\n"
      << "set datafile separator ','\n"
      << "set key off\n"
      << "set xlabel 't'\n"
      << "set ylabel 'e_p'\n"
      << "set terminal pngcairo size 800,500\n";
  for (Eigen::Index n : s.agent_counts) {
    const std::string stem = file_stem(s, n);
    out << "set output '" << stem << "_ep.png'\n"
        << "set title '" << s.name << " N=" << n << "'\n"
        << "plot for [i=" << 2 * n + 2 << ":" << 3 * n + 1 << "] '" << stem
        << "_trajectory.csv' using 1:i with lines\n";
  }
}

}  // namespace

std::string_view to_string(Output o) noexcept {
  switch (o) {
    case Output::trajectory:
      return "trajectory";
    case Output::performance:
      return "performance";
    case Output::spectrum:
      return "spectrum";
    case Output::plot:
      return "plot";
    case Output::certificate:
      return "certificate";
  }
  return "unknown";
}

WeightedDigraph GraphRef::build(Eigen::Index n) const {
  if (named) return build_named_topology(*named, n);
  WeightedDigraph g = read_edge_list_file(file);
  if (g.size() != n) {
    throw Error(Errc::config, file.string() + ": edge list has " +
                                  std::to_string(g.size()) + " vertices, expected " +
                                  std::to_string(n));
  }
  return g;
}

std::string GraphRef::label() const {
  return named ? std::string(to_string(*named)) : file.filename().string();
}

std::vector<Scenario> parse_scenarios(std::string_view text,
                                      const std::filesystem::path& base_dir) {
  const config::Document doc = config::parse(text);
  const auto& defaults = doc.sections.front().entries;
  std::vector<Scenario> out;
  std::set<std::string> used;
  for (std::size_t k = 1; k < doc.sections.size(); ++k) {
    const auto& section = doc.sections[k];
    auto merged = section.entries;
    std::set<std::string> inherited;
    for (const auto& [key, entry] : defaults) {
      if (merged.emplace(key, entry).second) inherited.insert(key);
    }
    out.push_back(read_scenario(section.name, section.line, std::move(merged),
                                std::move(inherited), base_dir, used));
  }
  if (out.empty()) {
    throw Error(Errc::config, "config defines no [scenario] sections");
  }
  for (const auto& [key, entry] : defaults) {
    if (!used.count(key)) {
      throw Error(Errc::config, "line " + std::to_string(entry.line) +
                                    ", field '" + key + "': unknown field");
    }
  }
  return out;
}

ControllerSpec build_spec(const Scenario& s, Eigen::Index n) {
  const LaplacianMatrix base = laplacian_of(s.base.build(n));
  ControllerSpec spec = [&] {
    if (!s.graph1 && !s.graph2) {
      return s.controller == ControllerKind::serial
                 ? ControllerSpec::serial(base, s.gain1, s.gain2)
                 : ControllerSpec::conventional(base, s.gain1, s.gain2);
    }
    const LaplacianMatrix l1 =
        s.graph1 ? laplacian_of(s.graph1->build(n)) : base;
    const LaplacianMatrix l2 =
        s.graph2 ? laplacian_of(s.graph2->build(n)) : base;
    return s.controller == ControllerKind::serial
               ? ControllerSpec::serial(l1.scaled(s.gain1), l2.scaled(s.gain2))
               : ControllerSpec::conventional(l1.scaled(s.gain1),
                                              l2.scaled(s.gain2));
  }();
  if (s.offsets || s.v_ref != 0.0) {
    Vector p = Vector::Zero(n);
    if (s.offsets) p = Eigen::Map<const Vector>(s.offsets->data(), n);
    spec = spec.with_offsets(std::move(p), s.v_ref);
  }
  return spec;
}

LaplacianMatrix build_metric(const Scenario& s, Eigen::Index n) {
  return laplacian_of(s.metric ? s.metric->build(n) : s.base.build(n));
}

StateVector build_init(const Scenario& s, Eigen::Index n) {
  if (s.init == InitRule::explicit_vectors) {
    return {Eigen::Map<const Vector>(s.x0.data(), n),
            Eigen::Map<const Vector>(s.v0.data(), n)};
  }
  StateVector init{Vector::Zero(n), Vector::Zero(n)};
  init.v[0] = 1.0;
  return init;
}

std::string summary_line(const std::string& scenario, const SweepRow& row) {
  std::ostringstream out;
  out << scenario << " N=" << row.agents;
  if (!row.error.empty()) {
    out << " error: " << row.error;
    return out.str();
  }
  out << ' ' << (row.stability->consensus_stable ? "stable" : "unstable");
  const PerformanceReport& rep = *row.report;
  out << " observed_ratio=";
  if (rep.indeterminate) {
    out << "indeterminate";
  } else {
    out << fmt("%.6g", rep.observed_ratio);
  }
  if (rep.overflow) out << " overflow";
  if (rep.alpha_bound) {
    out << " alpha=" << fmt("%.6g", *rep.alpha_bound) << " bound "
        << (rep.bound_satisfied.value_or(false) ? "satisfied" : "violated");
  }
  return out.str();
}

void write_performance_csv(std::ostream& out, const Scenario& s,
                           const std::vector<SweepRow>& rows) {
  out << "scenario,N,controller,base_graph,consensus_stable,alpha,"
         "observed_ratio,bound_satisfied,time_of_peak,overflow,horizon,error\n";
  for (const SweepRow& row : rows) {
    out << s.name << ',' << row.agents << ',' << to_string(s.controller) << ','
        << s.base.label() << ',';
    if (!row.error.empty()) {
      std::string msg = row.error;
      for (char& c : msg) {
        if (c == ',' || c == '\n') c = ';';
      }
      out << ",,,,,,," << msg << '\n';
      continue;
    }
    const PerformanceReport& rep = *row.report;
    out << (row.stability->consensus_stable ? 1 : 0) << ',';
    if (rep.alpha_bound) out << fmt("%.10g", *rep.alpha_bound);
    out << ',';
    out << (rep.indeterminate ? std::string("nan") : fmt("%.10g", rep.observed_ratio))
        << ',';
    if (rep.bound_satisfied) out << (*rep.bound_satisfied ? 1 : 0);
    out << ',' << fmt("%.10g", rep.time_of_peak) << ',' << (rep.overflow ? 1 : 0)
        << ',' << fmt("%.10g", rep.horizon) << ",\n";
  }
}

ScenarioResult run_scenario(const Scenario& s, const RunOptions& opts) {
  namespace fs = std::filesystem;
  ScenarioResult result;
  result.name = s.name;
  if (opts.write_outputs) fs::create_directories(opts.out_dir);

  if (s.kind == ScenarioKind::closure) {
    for (Eigen::Index n : s.agent_counts) {
      const WeightedDigraph w = s.base.build(n);
      const LaplacianMatrix l1 =
          laplacian_of(s.graph1 ? s.graph1->build(n) : s.base.build(n));
      const LaplacianMatrix l2 =
          laplacian_of(s.graph2 ? s.graph2->build(n) : s.base.build(n));
      const ClosureCertificates certs =
          hop_sparsity_closure_demo(l1, l2, w, s.closure_gain);
      const double c2 = std::max(2.0 * s.closure_gain, s.closure_gain * s.closure_gain);
      const FeedbackClassCertificate one_step =
          check_membership(multiply(l2.matrix(), l1.matrix()), w, 1, c2);
      std::ostringstream line;
      line << s.name << " N=" << n << " sum " << certificate_text(certs.sum)
           << "; product " << certificate_text(certs.product)
           << "; product " << certificate_text(one_step);
      result.summary_lines.push_back(line.str());
      if (opts.write_outputs && s.outputs.count(Output::certificate)) {
        write_file_atomic(opts.out_dir / (file_stem(s, n) + "_closure.txt"),
                          [&](std::ostream& out) {
                            out << "# L1 " << (s.graph1 ? s.graph1->label() : s.base.label())
                                << ", L2 " << (s.graph2 ? s.graph2->label() : s.base.label())
                                << ", W " << s.base.label() << ", c "
                                << fmt("%.6g", s.closure_gain) << '\n';
                            write_certificate(out, "L2+L1", certs.sum);
                            write_certificate(out, "L2*L1", certs.product);
                            write_certificate(out, "L2*L1 (1-step)", one_step);
                          });
      }
      result.closure = certs;
      result.product_one_step = one_step;
    }
    return result;
  }

  SweepOptions sweep_opts;
  sweep_opts.integration.horizon = opts.horizon.value_or(s.horizon);
  sweep_opts.integration.dt = opts.dt.value_or(s.dt);
  sweep_opts.keep_trajectories = s.outputs.count(Output::trajectory) > 0;
  result.rows = sweep(
      s.agent_counts,
      [&](Eigen::Index n) {
        return SweepCase{build_spec(s, n), build_metric(s, n), build_init(s, n)};
      },
      sweep_opts);

  for (const SweepRow& row : result.rows) {
    result.summary_lines.push_back(summary_line(s.name, row));
    if (!row.error.empty()) {
      result.numerical_failure = true;
      continue;
    }
    if (!opts.write_outputs) continue;
    const std::string stem = file_stem(s, row.agents);
    if (s.outputs.count(Output::trajectory)) {
      write_file_atomic(opts.out_dir / (stem + "_trajectory.csv"),
                        [&](std::ostream& out) {
                          write_trajectory_csv(out, row.trajectory);
                        });
    }
    if (s.outputs.count(Output::spectrum)) {
      const ClosedLoopSystem sys =
          assemble(build_spec(s, row.agents), Coordinates::physical);
      write_file_atomic(opts.out_dir / (stem + "_spectrum.txt"),
                        [&](std::ostream& out) {
                          write_spectrum(out, sys, *row.stability);
                        });
    }
  }
  if (opts.write_outputs && s.outputs.count(Output::performance)) {
    write_file_atomic(opts.out_dir / (s.name + "_performance.csv"),
                      [&](std::ostream& out) {
                        write_performance_csv(out, s, result.rows);
                      });
  }
  if (opts.write_outputs && s.outputs.count(Output::plot)) {
    write_file_atomic(opts.out_dir / (s.name + ".gp"),
                      [&](std::ostream& out) { write_plot_script(out, s); });
  }
  return result;
}

}  // namespace serialcon
