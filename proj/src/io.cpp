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

#include "serialcon/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "serialcon/error.hpp"

namespace serialcon {

namespace {

[[noreturn]] void fail_at(int line, const std::string& what) {
  throw Error(Errc::config, "edge list line " + std::to_string(line) + ": " + what);
}

}  // namespace

WeightedDigraph read_edge_list(std::istream& in) {
  std::string line;
  int line_no = 0;
  Eigen::Index n = -1;
  Matrix w;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    if (n < 0) {
      std::string tag;
      long long count = 0;
      if (!(fields >> tag >> count) || tag != "n") {
        fail_at(line_no, "expected header 'n <count>'");
      }
      if (count < 1) fail_at(line_no, "vertex count must be positive");
      n = static_cast<Eigen::Index>(count);
      w = Matrix::Zero(n, n);
      continue;
    }
    long long i = 0, j = 0;
    double weight = 0.0;
    if (!(fields >> i >> j >> weight)) fail_at(line_no, "expected 'i j w'");
    std::string extra;
    if (fields >> extra) fail_at(line_no, "trailing field '" + extra + "'");
    if (i < 1 || j < 1 || i > n || j > n) fail_at(line_no, "index out of range");
    if (i == j) fail_at(line_no, "self-loops are not allowed");
    if (!(weight >= 0.0)) fail_at(line_no, "weight must be nonnegative");
    if (w(i - 1, j - 1) != 0.0) fail_at(line_no, "repeated edge");
    w(i - 1, j - 1) = weight;
  }
  if (n < 0) throw Error(Errc::config, "edge list: missing 'n <count>' header");
  return WeightedDigraph(std::move(w));
}

WeightedDigraph read_edge_list_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open edge list " + path.string());
  try {
    return read_edge_list(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_edge_list(std::ostream& out, const WeightedDigraph& g) {
  out << "n " << g.size() << '\n';
  char buf[40];
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      if (!g.has_edge(i, j)) continue;
      std::snprintf(buf, sizeof buf, "%.17g", g.weight(i, j));
      out << i + 1 << ' ' << j + 1 << ' ' << buf << '\n';
    }
  }
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot write " + tmp.string());
    writer(out);
    out.flush();
    if (!out) throw Error(Errc::io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::io, "cannot move output into place: " + path.string());
  }
}

}  // namespace serialcon
