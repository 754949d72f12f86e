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

#include "serialcon/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <set>
#include <sstream>

#include "serialcon/error.hpp"

namespace serialcon::config {

namespace {

class LineParser {
 public:
  LineParser(std::string_view text, int line) : s_(text), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(Errc::config, "line " + std::to_string(line_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  std::string key() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
            s_[pos_] == '_' || s_[pos_] == '-' || s_[pos_] == '.')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  Scalar scalar() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"') return string_literal();
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return number();
  }

  Value value() {
    skip_ws();
    if (consume('[')) {
      Array items;
      if (consume(']')) return items;
      do {
        items.push_back(scalar());
      } while (consume(','));
      expect(']');
      return items;
    }
    if (consume('{')) {
      Table table;
      if (consume('}')) return table;
      do {
        const std::string k = key();
        expect('=');
        const Scalar v = scalar();
        if (!std::holds_alternative<double>(v)) {
          fail("inline table '" + k + "' must hold numbers");
        }
        if (!table.emplace(k, std::get<double>(v)).second) {
          fail("duplicate inline key '" + k + "'");
        }
      } while (consume(','));
      expect('}');
      return table;
    }
    return std::visit([](auto&& v) -> Value { return v; }, scalar());
  }

 private:
  std::string string_literal() {
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      out.push_back(s_[pos_++]);
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  double number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
            s_[pos_] == '+' || s_[pos_] == '-' || s_[pos_] == '.' ||
            s_[pos_] == 'e' || s_[pos_] == 'E' || s_[pos_] == '_')) {
      ++pos_;
    }
    std::string token(s_.substr(start, pos_ - start));
    std::erase(token, '_');
    if (token.empty()) fail("expected a value");
    double v = 0.0;
    const auto [end, ec] =
        std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || end != token.data() + token.size()) {
      fail("malformed number '" + token + "'");
    }
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
};

}  // namespace

Document parse(std::string_view text) {
  Document doc;
  doc.sections.push_back({"", 0, {}});
  std::set<std::string> section_names;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = end + 1;

    LineParser p(line, line_no);
    if (p.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    if (p.consume('[')) {
      std::string name = p.key();
      p.expect(']');
      if (!p.at_end()) p.fail("trailing text after section header");
      constexpr std::string_view prefix = "scenario.";
      if (name.starts_with(prefix)) name.erase(0, prefix.size());
      if (name.empty()) p.fail("empty section name");
      if (!section_names.insert(name).second) {
        p.fail("duplicate section '" + name + "'");
      }
      doc.sections.push_back({name, line_no, {}});
    } else {
      const std::string k = p.key();
      p.expect('=');
      Value v = p.value();
      if (!p.at_end()) p.fail("trailing text after value of '" + k + "'");
      auto& entries = doc.sections.back().entries;
      if (!entries.emplace(k, Entry{std::move(v), line_no}).second) {
        p.fail("duplicate key '" + k + "'");
      }
    }
    if (end == text.size()) break;
  }
  return doc;
}

std::string describe(const Value& v) {
  struct Visitor {
    std::string operator()(double d) const {
      std::ostringstream s;
      s << d;
      return s.str();
    }
    std::string operator()(const std::string& s) const { return '"' + s + '"'; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const Array& a) const {
      return "array of " + std::to_string(a.size());
    }
    std::string operator()(const Table& t) const {
      return "table of " + std::to_string(t.size());
    }
  };
  return std::visit(Visitor{}, v);
}

}  // namespace serialcon::config
