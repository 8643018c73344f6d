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

// Tabulates evaluation reports: proposal reports as
// "Training data | Model | Prec. | Rec. | F0.3 | mAP" and hashtag reports as
// "Model | Top-1 Prec. | mAP", in Markdown or HTML.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "iconforge/errors.hpp"
#include "iconforge/jsonl.hpp"

namespace iconforge::report {

struct Row {
  std::string group;  // e.g. training data
  std::string label;  // model name
  json report;        // parsed eval report
};

enum class Format { markdown, html };

inline std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

inline std::string html_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string render(const std::vector<Row>& rows, Format fmt) {
  std::vector<std::vector<std::string>> det, tag;
  for (const auto& r : rows) {
    const auto mode = r.report.value("mode", std::string("proposals"));
    if (mode == "hashtags") {
      tag.push_back({r.label, pct(r.report.at("top1_precision").get<double>()), pct(r.report.at("map").get<double>())});
    } else if (mode == "proposals" || mode == "consistency") {
      det.push_back({r.group, r.label, pct(r.report.at("precision").get<double>()),
                     pct(r.report.at("recall").get<double>()), pct(r.report.at("f_beta").get<double>()),
                     pct(r.report.at("map").get<double>())});
    } else {
      throw ValidationError("report: unknown report mode '" + mode + "'");
    }
  }
  const std::vector<std::string> det_head{"Training data", "Model", "Prec.", "Rec.", "F0.3", "mAP"};
  const std::vector<std::string> tag_head{"Model", "Top-1 Prec.", "mAP"};
  std::ostringstream os;
  auto table = [&](const std::string& title, const std::vector<std::string>& head,
                   const std::vector<std::vector<std::string>>& body) {
    if (body.empty()) return;
    if (fmt == Format::markdown) {
      os << "## " << title << "\n\n|";
      for (const auto& h : head) os << ' ' << h << " |";
      os << "\n|";
      const std::size_t text_cols = head.size() == det_head.size() ? 2 : 1;
      for (std::size_t i = 0; i < head.size(); ++i) os << (i < text_cols ? " --- |" : " ---: |");
      os << '\n';
      for (const auto& row : body) {
        os << '|';
        for (const auto& c : row) os << ' ' << c << " |";
        os << '\n';
      }
      os << '\n';
    } else {
      os << "<h2>" << title << "</h2>\n<table>\n<tr>";
      for (const auto& h : head) os << "<th>" << h << "</th>";
      os << "</tr>\n";
      for (const auto& row : body) {
        os << "<tr>";
        for (const auto& c : row) os << "<td>" << html_escape(c) << "</td>";
        os << "</tr>\n";
      }
      os << "</table>\n";
    }
  };
  if (fmt == Format::html) os << "<!DOCTYPE html>\n<html><body>\n";
  table("Icon proposals (%)", det_head, det);
  table("Visual hashtags (%)", tag_head, tag);
  if (fmt == Format::html) os << "</body></html>\n";
  return os.str();
}

}  // namespace iconforge::report
