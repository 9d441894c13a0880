// Copyright 2026 The sdid Authors
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

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "sdid/errors.hpp"

namespace sdid {

using Json = nlohmann::ordered_json;

// Shortest decimal string that parses back to the same double.
inline std::string format_real(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  std::string out(buf, end);
  // Keep a decimal point so that integral reals read back as reals.
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

namespace detail {

inline bool is_scalar(const Json& j) {
  return !j.is_array() && !j.is_object();
}

inline void write_scalar(std::string& out, const Json& j) {
  if (j.is_number_float()) {
    out += format_real(j.get<double>());
  } else {
    out += j.dump();
  }
}

inline void write_json(std::string& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += inner;
      out += Json(it.key()).dump();
      out += ": ";
      write_json(out, it.value(), indent + 1);
    }
    out += "\n" + pad + "}";
  } else if (j.is_array()) {
    bool flat = std::all_of(j.begin(), j.end(),
                            [](const Json& e) { return is_scalar(e); });
    if (j.empty()) {
      out += "[]";
    } else if (flat) {
      out += "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ", ";
        first = false;
        write_scalar(out, e);
      }
      out += "]";
    } else {
      out += "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        write_json(out, e, indent + 1);
      }
      out += "\n" + pad + "]";
    }
  } else {
    write_scalar(out, j);
  }
}

}  // namespace detail

// Pretty output with fixed key order, scalar arrays on one line, and reals in
// shortest round-trip form.
inline std::string to_text(const Json& j) {
  std::string out;
  detail::write_json(out, j, 0);
  out += "\n";
  return out;
}

inline Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1,
                                              text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(line, column, e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace sdid
