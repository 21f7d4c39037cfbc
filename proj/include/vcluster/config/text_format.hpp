// Copyright 2026 The vcluster Authors
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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vcluster/core/error.hpp"

namespace vcluster::config {

// Line-oriented sectioned config text:
//
//   # comment
//   [section]
//   count = 4
//   rate = 0.25
//   name = "worker"
//   flag = true
//   servers = ["10.0.0.2", "10.0.0.3"]
//
// Sections may repeat (each occurrence is kept separately, in file order);
// keys may not repeat within one occurrence. Strings carry no escape
// sequences, so a value cannot contain a double quote.

struct ConfigValue {
  std::variant<bool, std::int64_t, double, std::string, std::vector<std::string>> v;
  int line = 0;

  bool is_string() const { return std::holds_alternative<std::string>(v); }

  bool as_bool() const {
    if (auto* b = std::get_if<bool>(&v)) return *b;
    throw ParseError(line, "expected a boolean");
  }
  std::int64_t as_int() const {
    if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
    throw ParseError(line, "expected an integer");
  }
  double as_real() const {
    if (auto* d = std::get_if<double>(&v)) return *d;
    if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    throw ParseError(line, "expected a number");
  }
  const std::string& as_string() const {
    if (auto* s = std::get_if<std::string>(&v)) return *s;
    throw ParseError(line, "expected a quoted string");
  }
  const std::vector<std::string>& as_string_list() const {
    if (auto* l = std::get_if<std::vector<std::string>>(&v)) return *l;
    throw ParseError(line, "expected a string list");
  }
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, ConfigValue> values;
  std::vector<std::string> key_order;

  bool has(const std::string& key) const { return values.count(key) != 0; }

  const ConfigValue& get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) {
      throw ParseError(line, "section [" + name + "] is missing key '" + key + "'");
    }
    return it->second;
  }

  std::int64_t get_int(const std::string& key) const { return get(key).as_int(); }
  double get_real(const std::string& key) const { return get(key).as_real(); }
  bool get_bool(const std::string& key) const { return get(key).as_bool(); }
  const std::string& get_string(const std::string& key) const { return get(key).as_string(); }
  const std::vector<std::string>& get_list(const std::string& key) const {
    return get(key).as_string_list();
  }

  std::int64_t get_int_or(const std::string& key, std::int64_t dflt) const {
    return has(key) ? get_int(key) : dflt;
  }
  double get_real_or(const std::string& key, double dflt) const {
    return has(key) ? get_real(key) : dflt;
  }
  bool get_bool_or(const std::string& key, bool dflt) const {
    return has(key) ? get_bool(key) : dflt;
  }
  std::string get_string_or(const std::string& key, std::string dflt) const {
    return has(key) ? get_string(key) : dflt;
  }
};

struct TextDoc {
  std::vector<Section> sections;

  std::vector<const Section*> named(const std::string& name) const {
    std::vector<const Section*> out;
    for (const Section& s : sections) {
      if (s.name == name) out.push_back(&s);
    }
    return out;
  }

  /// The unique section with this name; absence or duplication is an error.
  const Section& single(const std::string& name) const {
    auto all = named(name);
    if (all.empty()) throw ParseError(0, "missing required section [" + name + "]");
    if (all.size() > 1) throw ParseError(all[1]->line, "duplicate section [" + name + "]");
    return *all[0];
  }

  const Section* maybe_single(const std::string& name) const {
    auto all = named(name);
    if (all.empty()) return nullptr;
    if (all.size() > 1) throw ParseError(all[1]->line, "duplicate section [" + name + "]");
    return all[0];
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

// Cuts a trailing comment, respecting quoted strings.
inline std::string_view strip_comment(std::string_view s) {
  bool in_quote = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_quote = !in_quote;
    if (s[i] == '#' && !in_quote) return s.substr(0, i);
  }
  return s;
}

inline bool all_int_chars(std::string_view s) {
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

inline std::string parse_quoted(std::string_view raw, int line) {
  if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') {
    throw ParseError(line, "malformed quoted string");
  }
  std::string_view body = raw.substr(1, raw.size() - 2);
  if (body.find('"') != std::string_view::npos) {
    throw ParseError(line, "strings cannot contain a quote character");
  }
  return std::string(body);
}

inline ConfigValue parse_value(std::string_view raw, int line) {
  ConfigValue out;
  out.line = line;
  if (raw.empty()) throw ParseError(line, "missing value");

  if (raw.front() == '"') {
    out.v = parse_quoted(raw, line);
    return out;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') throw ParseError(line, "unterminated list");
    std::string_view body = trim(raw.substr(1, raw.size() - 2));
    std::vector<std::string> items;
    while (!body.empty()) {
      bool in_quote = false;
      std::size_t cut = body.size();
      for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '"') in_quote = !in_quote;
        if (body[i] == ',' && !in_quote) {
          cut = i;
          break;
        }
      }
      items.push_back(parse_quoted(trim(body.substr(0, cut)), line));
      body = (cut == body.size()) ? std::string_view{} : trim(body.substr(cut + 1));
    }
    out.v = std::move(items);
    return out;
  }
  if (raw == "true" || raw == "false") {
    out.v = (raw == "true");
    return out;
  }
  if (all_int_chars(raw)) {
    try {
      out.v = static_cast<std::int64_t>(std::stoll(std::string(raw)));
      return out;
    } catch (const std::exception&) {
      throw ParseError(line, "integer out of range");
    }
  }
  try {
    std::size_t used = 0;
    double d = std::stod(std::string(raw), &used);
    if (used != raw.size()) throw std::invalid_argument("trailing junk");
    out.v = d;
    return out;
  } catch (const std::exception&) {
    throw ParseError(line, "unrecognized value: " + std::string(raw));
  }
}

}  // namespace detail

inline TextDoc parse_text_config(std::string_view text) {
  TextDoc doc;
  Section* current = nullptr;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line =
        (nl == std::string_view::npos) ? text.substr(pos) : text.substr(pos, nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    line = detail::trim(detail::strip_comment(line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      std::string_view name = detail::trim(line.substr(1, line.size() - 2));
      if (!detail::valid_name(name)) throw ParseError(line_no, "invalid section name");
      doc.sections.push_back(Section{std::string(name), line_no, {}, {}});
      current = &doc.sections.back();
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, "expected 'key = value' or a section header");
    }
    if (!current) throw ParseError(line_no, "key outside of any section");
    std::string_view key = detail::trim(line.substr(0, eq));
    if (!detail::valid_name(key)) throw ParseError(line_no, "invalid key name");
    ConfigValue value = detail::parse_value(detail::trim(line.substr(eq + 1)), line_no);
    auto [it, inserted] = current->values.emplace(std::string(key), std::move(value));
    if (!inserted) {
      throw ParseError(line_no, "duplicate key '" + std::string(key) + "' in section [" +
                                    current->name + "]");
    }
    current->key_order.push_back(std::string(key));
  }
  return doc;
}

}  // namespace vcluster::config
