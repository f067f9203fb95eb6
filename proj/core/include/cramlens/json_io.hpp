// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CRAMLENS_JSON_IO_HPP_
#define CRAMLENS_JSON_IO_HPP_

#include "cramlens/fib.hpp"
#include "json.hpp"

namespace cramlens {

nlohmann::json family_to_json(Family family);
Family family_from_json(const nlohmann::json& j);

// Hops serialize as their id, with null for "no route".
nlohmann::json hop_to_json(NextHop hop);
NextHop hop_from_json(const nlohmann::json& j);

}  // namespace cramlens

#endif  // CRAMLENS_JSON_IO_HPP_
