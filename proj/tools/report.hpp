// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

// Tabular reports rendered as an aligned table, CSV or JSON.

#ifndef CRAMLENS_TOOLS_REPORT_HPP_
#define CRAMLENS_TOOLS_REPORT_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cramlens/rmt.hpp"
#include "json.hpp"

namespace cramlens::cli {

enum class Format { kTable, kCsv, kJson };

Format parse_format(const std::string& s);

struct Report {
  nlohmann::json meta;  // tool, version, seed, chip
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
  // Extra members for JSON output only.
  nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json report_meta(const std::string& command, std::uint64_t seed,
                           const ChipSpec& chip);

std::string cell_text(const nlohmann::json& v);

void render(std::ostream& out, const Report& r, Format f);

}  // namespace cramlens::cli

#endif  // CRAMLENS_TOOLS_REPORT_HPP_
