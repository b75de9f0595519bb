#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "dimwit/scenario.hpp"

namespace dimwit {

using Functional = std::variant<BellFunctional, DimensionWitness>;

// Witness / functional JSON schema (see docs/schema.md):
//   {"kind":"witness","outcomes":B,"preparations":X,"settingsY":Y,"dim":d,
//    "coeff":[b][x][y],"constant":c}
//   {"kind":"bell","outcomes":[A,B],"settingsX":X,"settingsY":Y,
//    "coeff":[a][b][x][y],"constant":c}
nlohmann::json toJson(const BellFunctional& f);
nlohmann::json toJson(const DimensionWitness& w);
nlohmann::json toJson(const Functional& f);

Functional functionalFromJson(const nlohmann::json& j);
BellFunctional bellFromJson(const nlohmann::json& j);
DimensionWitness witnessFromJson(const nlohmann::json& j);

Functional loadFunctional(const std::filesystem::path& path);
void saveFunctional(const std::filesystem::path& path, const Functional& f);

}  // namespace dimwit
