// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include "cramlens/json_io.hpp"

namespace cramlens {

nlohmann::json family_to_json(Family family) {
  return {{"kind", family.kind == FamilyKind::kToy ? "toy" : family.name()},
          {"width", family.width}};
}

Family family_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "ipv4") return Family::ipv4();
  if (kind == "ipv6") return Family::ipv6();
  if (kind == "toy") return Family::toy(j.at("width").get<int>());
  throw std::invalid_argument("unknown family '" + kind + "'");
}

nlohmann::json hop_to_json(NextHop hop) {
  if (hop.is_none()) return nullptr;
  return hop.id;
}

NextHop hop_from_json(const nlohmann::json& j) {
  if (j.is_null()) return NextHop::none();
  return NextHop{j.get<std::uint32_t>()};
}

}  // namespace cramlens
