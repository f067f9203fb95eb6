// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include "cramlens/schemes.hpp"

#include <stdexcept>

#include "cramlens/rmt.hpp"

namespace cramlens {

Scheme parse_scheme(const std::string& name) {
  if (name == "resail") return Scheme::kResail;
  if (name == "bsic") return Scheme::kBsic;
  if (name == "mashup") return Scheme::kMashup;
  if (name == "tcam" || name == "logical_tcam") return Scheme::kLogicalTcam;
  if (name == "sail") return Scheme::kSail;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kResail:
      return "resail";
    case Scheme::kBsic:
      return "bsic";
    case Scheme::kMashup:
      return "mashup";
    case Scheme::kLogicalTcam:
      return "logical_tcam";
    case Scheme::kSail:
      return "sail";
  }
  return "unknown";
}

ResailConfig SchemeParams::resail(Family family) const {
  ResailConfig c = ResailConfig::defaults_for(family);
  if (pivot) c.pivot = *pivot;
  if (min_bmp) c.min_bmp = *min_bmp;
  c.seed = seed;
  return c;
}

BsicConfig SchemeParams::bsic(Family family) const {
  BsicConfig c = BsicConfig::defaults_for(family);
  if (k) c.k = *k;
  return c;
}

MashupConfig SchemeParams::mashup(Family family) const {
  MashupConfig c = MashupConfig::defaults_for(family);
  if (strides) c.plan = *strides;
  return c;
}

AnyStructure build_structure(Scheme s, const Fib& fib,
                             const SchemeParams& params) {
  const Family f = fib.family();
  switch (s) {
    case Scheme::kResail:
      return ResailStructure::build(fib, params.resail(f));
    case Scheme::kBsic:
      return BsicStructure::build(fib, params.bsic(f));
    case Scheme::kMashup:
      return MashupStructure::build(fib, params.mashup(f));
    default:
      break;
  }
  throw std::invalid_argument(scheme_name(s) + " has no lookup structure");
}

NextHop lookup(const AnyStructure& s, Address addr) {
  return std::visit([addr](const auto& x) { return x.lookup(addr); }, s);
}

CramProgram to_program(const AnyStructure& s) {
  return std::visit([](const auto& x) { return x.to_program(); }, s);
}

nlohmann::json structure_to_json(const AnyStructure& s) {
  return std::visit([](const auto& x) { return x.to_json(); }, s);
}

AnyStructure structure_from_json(const nlohmann::json& j) {
  const auto scheme = j.at("scheme").get<std::string>();
  if (scheme == "resail") return ResailStructure::from_json(j);
  if (scheme == "bsic") return BsicStructure::from_json(j);
  if (scheme == "mashup") return MashupStructure::from_json(j);
  throw std::invalid_argument("unknown structure scheme '" + scheme + "'");
}

Family structure_family(const AnyStructure& s) {
  return std::visit([](const auto& x) { return x.family(); }, s);
}

CramProgram scheme_program(Scheme s, const Fib& fib,
                           const SchemeParams& params) {
  switch (s) {
    case Scheme::kLogicalTcam:
      return logical_tcam_program(fib);
    case Scheme::kSail:
      return sail_program(
          fib, params.pivot.value_or(
                   ResailConfig::defaults_for(fib.family()).pivot));
    default:
      return to_program(build_structure(s, fib, params));
  }
}

}  // namespace cramlens
