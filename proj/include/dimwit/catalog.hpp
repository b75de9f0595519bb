#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dimwit/io.hpp"
#include "dimwit/scenario.hpp"

namespace dimwit::catalog {

enum class Kind { Bell, WitnessFull, WitnessReduced, RelaxationFunctional };
enum class Provenance { Published, Computed };

std::string kindName(Kind k);
std::string provenanceName(Provenance p);

struct SMax {
    double value = 0.0;
    Provenance provenance = Provenance::Computed;
    std::string note;
};

struct Entry {
    std::string name;
    Kind kind = Kind::Bell;
    Functional payload;
    std::optional<SymmetryMap> symmetry;
    std::vector<int> half;
    std::optional<SMax> sMax;
    int x0 = 0;
    int y0 = 0;
    std::vector<std::string> crossRefs;
    std::string labels;  // 1-indexed printed labels -> internal indices

    const BellFunctional& bell() const;
    const DimensionWitness& witness() const;
    bool isWitness() const { return std::holds_alternative<DimensionWitness>(payload); }
};

const Entry& get(const std::string& name);
std::vector<std::string> list();
bool contains(const std::string& name);

nlohmann::json toJson(const Entry& e);

}  // namespace dimwit::catalog
