// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include "report.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "cramlens/version.hpp"

namespace cramlens::cli {

Format parse_format(const std::string& s) {
  if (s == "table") return Format::kTable;
  if (s == "csv") return Format::kCsv;
  if (s == "json") return Format::kJson;
  throw std::invalid_argument("unknown format '" + s + "'");
}

nlohmann::json report_meta(const std::string& command, std::uint64_t seed,
                           const ChipSpec& chip) {
  return {{"tool", "cramlens"},
          {"version", kVersion},
          {"command", command},
          {"seed", seed},
          {"chip", chip.name},
          {"chip_hash", fmt::format("{:016x}", chip.config_hash())}};
}

std::string cell_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  if (v.is_number_float()) return fmt::format("{:.4f}", v.get<double>());
  return v.dump();
}

namespace {

std::string meta_line(const nlohmann::json& m) {
  return fmt::format("# {} {} {} seed={} chip={} chip_hash={}",
                     m.value("tool", "cramlens"), m.value("version", ""),
                     m.value("command", ""), m.value("seed", 0ull),
                     m.value("chip", ""), m.value("chip_hash", ""));
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void render(std::ostream& out, const Report& r, Format f) {
  if (f == Format::kJson) {
    nlohmann::json j = r.meta;
    auto& rows = j["rows"] = nlohmann::json::array();
    for (const auto& row : r.rows) {
      nlohmann::json o = nlohmann::json::object();
      for (std::size_t i = 0; i < r.columns.size() && i < row.size(); ++i) {
        o[r.columns[i]] = row[i];
      }
      rows.push_back(std::move(o));
    }
    for (auto it = r.extra.begin(); it != r.extra.end(); ++it) {
      j[it.key()] = it.value();
    }
    out << j.dump(2) << "\n";
    return;
  }
  out << meta_line(r.meta) << "\n";
  if (f == Format::kCsv) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
      out << (i ? "," : "") << csv_escape(r.columns[i]);
    }
    out << "\n";
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "," : "") << csv_escape(cell_text(row[i]));
      }
      out << "\n";
    }
    return;
  }
  std::vector<std::size_t> width(r.columns.size());
  for (std::size_t i = 0; i < r.columns.size(); ++i) width[i] = r.columns[i].size();
  std::vector<std::vector<std::string>> text;
  for (const auto& row : r.rows) {
    auto& t = text.emplace_back();
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
      t.push_back(cell_text(row[i]));
      width[i] = std::max(width[i], t.back().size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      s += fmt::format("{:<{}}", cells[i], i + 1 < cells.size() ? width[i] + 2 : 0);
    }
    out << s << "\n";
  };
  line(r.columns);
  for (const auto& t : text) line(t);
}

}  // namespace cramlens::cli
