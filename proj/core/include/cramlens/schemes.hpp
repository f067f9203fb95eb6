// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

// Uniform front over the lookup schemes and baselines, used by the sweep
// generator and the command-line tool.

#ifndef CRAMLENS_SCHEMES_HPP_
#define CRAMLENS_SCHEMES_HPP_

#include <optional>
#include <string>
#include <variant>

#include "cramlens/bsic.hpp"
#include "cramlens/cram.hpp"
#include "cramlens/fib.hpp"
#include "cramlens/mashup.hpp"
#include "cramlens/resail.hpp"
#include "json.hpp"

namespace cramlens {

enum class Scheme { kResail, kBsic, kMashup, kLogicalTcam, kSail };

Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme s);

// Unset fields fall back to the family defaults.
struct SchemeParams {
  std::optional<int> min_bmp;
  std::optional<int> pivot;
  std::optional<int> k;
  std::optional<StridePlan> strides;
  std::uint64_t seed = 1;

  ResailConfig resail(Family family) const;
  BsicConfig bsic(Family family) const;
  MashupConfig mashup(Family family) const;
};

using AnyStructure =
    std::variant<ResailStructure, BsicStructure, MashupStructure>;

// Only the three lookup schemes have a structure. Throws BuildError.
AnyStructure build_structure(Scheme s, const Fib& fib,
                             const SchemeParams& params);
NextHop lookup(const AnyStructure& s, Address addr);
CramProgram to_program(const AnyStructure& s);
nlohmann::json structure_to_json(const AnyStructure& s);
AnyStructure structure_from_json(const nlohmann::json& j);
Family structure_family(const AnyStructure& s);

// Program for any scheme, including the two baselines.
CramProgram scheme_program(Scheme s, const Fib& fib,
                           const SchemeParams& params);

}  // namespace cramlens

#endif  // CRAMLENS_SCHEMES_HPP_
