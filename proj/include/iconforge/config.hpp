// Copyright 2026 The iconforge Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Settings file: a TOML subset (tables, integer / float / boolean / string
// values, `#` comments) covering every tunable of the pipeline.
//
//   [synthgen]   icons_per_window icon_size_min icon_size_max entropy_threshold
//                contrast_threshold max_patch_tries max_icon_redraws
//                max_size_redraws
//                window_size seed
//   [imaging]    canny_low canny_high sigma_frac
//   [tiler]      levels overlap tile_size
//   [aggregate]  score_threshold iou_threshold containment_threshold
//   [eval]       iou_match beta
//   [summarize]  top_k hidden lr epochs batch_size seed
//
// Unknown tables or keys are rejected.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>

#include "iconforge/aggregate.hpp"
#include "iconforge/errors.hpp"
#include "iconforge/eval.hpp"
#include "iconforge/summarize.hpp"
#include "iconforge/synthgen.hpp"
#include "iconforge/tiler.hpp"

namespace iconforge::config {

using Value = std::variant<std::int64_t, double, bool, std::string>;
/// "table.key" -> value
using Document = std::map<std::string, Value>;

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

inline Value parse_value(const std::string& raw, std::size_t lineno) {
  auto fail = [&](const std::string& why) {
    return ValidationError("line " + std::to_string(lineno) + ": " + why + " '" + raw + "'");
  };
  if (raw.empty()) throw fail("missing value");
  if (raw == "true") return true;
  if (raw == "false") return false;
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') throw fail("unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      if (raw[i] == '\\' && i + 2 < raw.size()) {
        const char c = raw[++i];
        out.push_back(c == 'n' ? '\n' : c == 't' ? '\t' : c);
      } else {
        out.push_back(raw[i]);
      }
    }
    return out;
  }
  std::string num;
  for (char c : raw)
    if (c != '_') num.push_back(c);
  const bool is_float = num.find_first_of(".eE") != std::string::npos || num == "inf" || num == "nan";
  const char* first = num.data();
  if (!num.empty() && num.front() == '+') ++first;
  const char* last = num.data() + num.size();
  if (is_float) {
    double d = 0;
    auto [p, ec] = std::from_chars(first, last, d);
    if (ec != std::errc{} || p != last) throw fail("invalid number");
    return d;
  }
  std::int64_t i = 0;
  auto [p, ec] = std::from_chars(first, last, i);
  if (ec != std::errc{} || p != last) throw fail("invalid value");
  return i;
}

inline std::string format_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          std::string out = "\"";
          for (char c : x) {
            if (c == '"' || c == '\\') out.push_back('\\');
            if (c == '\n') {
              out += "\\n";
              continue;
            }
            out.push_back(c);
          }
          return out + "\"";
        } else if constexpr (std::is_same_v<T, double>) {
          char buf[64];
          auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
          std::string s(buf, p);
          if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
          return s;
        } else {
          return std::to_string(x);
        }
      },
      v);
}

}  // namespace detail

inline Document parse(std::string_view text) {
  Document doc;
  std::istringstream in{std::string(text)};
  std::string line, table;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = detail::trim(detail::strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ValidationError("line " + std::to_string(lineno) + ": malformed table header");
      table = detail::trim(std::string_view(s).substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ValidationError("line " + std::to_string(lineno) + ": expected key = value");
    const auto key = detail::trim(std::string_view(s).substr(0, eq));
    const auto full = table.empty() ? key : table + "." + key;
    if (!doc.emplace(full, detail::parse_value(detail::trim(std::string_view(s).substr(eq + 1)), lineno)).second)
      throw ValidationError("line " + std::to_string(lineno) + ": duplicate key '" + full + "'");
  }
  return doc;
}

inline std::string serialize(const Document& doc) {
  std::map<std::string, std::map<std::string, Value>> tables;
  for (const auto& [k, v] : doc) {
    const auto dot = k.rfind('.');
    tables[dot == std::string::npos ? "" : k.substr(0, dot)][dot == std::string::npos ? k : k.substr(dot + 1)] = v;
  }
  std::ostringstream os;
  bool first = true;
  for (const auto& [t, kv] : tables) {
    if (!t.empty()) {
      if (!first) os << '\n';
      os << '[' << t << "]\n";
    }
    for (const auto& [k, v] : kv) os << k << " = " << detail::format_value(v) << '\n';
    first = false;
  }
  return os.str();
}

struct Settings {
  synthgen::AugmentParams synthgen;
  tiler::TilerParams tiler;
  aggregate::AggregateParams aggregate;
  eval::EvalConfig eval;
  summarize::TrainParams train;
  std::size_t top_k = 3;

  friend bool operator==(const Settings& a, const Settings& b) { return serialize_settings(a) == serialize_settings(b); }

  static std::string serialize_settings(const Settings& s);
};

inline Document to_document(const Settings& s) {
  const auto& g = s.synthgen;
  return Document{
      {"synthgen.icons_per_window", std::int64_t{g.icons_per_window}},
      {"synthgen.icon_size_min", std::int64_t{g.icon_size_min}},
      {"synthgen.icon_size_max", std::int64_t{g.icon_size_max}},
      {"synthgen.entropy_threshold", g.entropy_threshold},
      {"synthgen.contrast_threshold", g.contrast_threshold},
      {"synthgen.max_patch_tries", std::int64_t{g.max_patch_tries}},
      {"synthgen.max_icon_redraws", std::int64_t{g.max_icon_redraws}},
      {"synthgen.max_size_redraws", std::int64_t{g.max_size_redraws}},
      {"synthgen.window_size", std::int64_t{g.window_size}},
      {"synthgen.seed", static_cast<std::int64_t>(g.rng_seed)},
      {"imaging.canny_low", g.entropy.canny.low},
      {"imaging.canny_high", g.entropy.canny.high},
      {"imaging.sigma_frac", g.entropy.sigma_frac},
      {"tiler.levels", std::int64_t{s.tiler.levels}},
      {"tiler.overlap", s.tiler.overlap},
      {"tiler.tile_size", std::int64_t{s.tiler.tile_size}},
      {"aggregate.score_threshold", s.aggregate.score_threshold},
      {"aggregate.iou_threshold", s.aggregate.iou_threshold},
      {"aggregate.containment_threshold", s.aggregate.containment_threshold},
      {"eval.iou_match", s.eval.iou_match},
      {"eval.beta", s.eval.beta},
      {"summarize.top_k", static_cast<std::int64_t>(s.top_k)},
      {"summarize.hidden", std::int64_t{s.train.hidden}},
      {"summarize.lr", s.train.lr},
      {"summarize.epochs", std::int64_t{s.train.epochs}},
      {"summarize.batch_size", std::int64_t{s.train.batch_size}},
      {"summarize.seed", static_cast<std::int64_t>(s.train.seed)},
  };
}

inline std::string Settings::serialize_settings(const Settings& s) { return serialize(to_document(s)); }

namespace detail {

inline double as_double(const Value& v, const std::string& key) {
  if (auto* d = std::get_if<double>(&v)) return *d;
  if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw ValidationError("'" + key + "' must be a number");
}

inline std::int64_t as_int(const Value& v, const std::string& key) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw ValidationError("'" + key + "' must be an integer");
}

}  // namespace detail

/// Overlays the values present in `doc` onto `base`.
inline Settings apply(const Document& doc, Settings base = {}) {
  auto& g = base.synthgen;
  for (const auto& [key, v] : doc) {
    auto i = [&] { return static_cast<int>(detail::as_int(v, key)); };
    auto d = [&] { return detail::as_double(v, key); };
    if (key == "synthgen.icons_per_window") g.icons_per_window = i();
    else if (key == "synthgen.icon_size_min") g.icon_size_min = i();
    else if (key == "synthgen.icon_size_max") g.icon_size_max = i();
    else if (key == "synthgen.entropy_threshold") g.entropy_threshold = d();
    else if (key == "synthgen.contrast_threshold") g.contrast_threshold = d();
    else if (key == "synthgen.max_patch_tries") g.max_patch_tries = i();
    else if (key == "synthgen.max_icon_redraws") g.max_icon_redraws = i();
    else if (key == "synthgen.max_size_redraws") g.max_size_redraws = i();
    else if (key == "synthgen.window_size") g.window_size = i();
    else if (key == "synthgen.seed") g.rng_seed = static_cast<std::uint64_t>(detail::as_int(v, key));
    else if (key == "imaging.canny_low") g.entropy.canny.low = d();
    else if (key == "imaging.canny_high") g.entropy.canny.high = d();
    else if (key == "imaging.sigma_frac") g.entropy.sigma_frac = d();
    else if (key == "tiler.levels") base.tiler.levels = i();
    else if (key == "tiler.overlap") base.tiler.overlap = d();
    else if (key == "tiler.tile_size") base.tiler.tile_size = i();
    else if (key == "aggregate.score_threshold") base.aggregate.score_threshold = d();
    else if (key == "aggregate.iou_threshold") base.aggregate.iou_threshold = d();
    else if (key == "aggregate.containment_threshold") base.aggregate.containment_threshold = d();
    else if (key == "eval.iou_match") base.eval.iou_match = d();
    else if (key == "eval.beta") base.eval.beta = d();
    else if (key == "summarize.top_k") base.top_k = static_cast<std::size_t>(detail::as_int(v, key));
    else if (key == "summarize.hidden") base.train.hidden = i();
    else if (key == "summarize.lr") base.train.lr = d();
    else if (key == "summarize.epochs") base.train.epochs = i();
    else if (key == "summarize.batch_size") base.train.batch_size = i();
    else if (key == "summarize.seed") base.train.seed = static_cast<std::uint64_t>(detail::as_int(v, key));
    else throw ValidationError("unknown setting '" + key + "'");
  }
  return base;
}

inline Settings load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return apply(parse(ss.str()));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace iconforge::config
