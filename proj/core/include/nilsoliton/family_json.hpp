#pragma once

#include "nilsoliton/constructions.hpp"

#include <json.hpp>

namespace nilsoliton {

/// {"kind": "non-einstein", "j": 2, "k": 2, "n": 1, "t": [], "d": 0,
///  "base_is_j9": false, "adjoin_list": [...], "dim_q": 4, "dim_p": 6,
///  "lambda": 1, "mu": 1}. Missing fields take the factory defaults for the kind.
nlohmann::json family_to_json(const FamilySpec& spec);
FamilySpec family_from_json(const nlohmann::json& j);

}  // namespace nilsoliton
