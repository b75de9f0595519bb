#include "dimwit/io.hpp"

#include <fstream>

namespace dimwit {

using nlohmann::json;

namespace {

int positiveInt(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer())
        fail(ErrorCode::Parse, std::string("missing integer field '") + key + "'");
    const int v = j.at(key).get<int>();
    require(v >= 1, ErrorCode::Parse, std::string("field '") + key + "' must be positive");
    return v;
}

double number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) fail(ErrorCode::Parse, std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

const json& nested(const json& j, std::size_t index, int expected, const char* level) {
    if (!j.is_array() || static_cast<int>(j.size()) != expected)
        fail(ErrorCode::Parse, std::string("coefficient array has wrong length at ") + level);
    return j.at(index);
}

}  // namespace

json toJson(const BellFunctional& f) {
    const DiScenario& s = f.scenario;
    json coeff = json::array();
    for (int a = 0; a < s.outcomesA; ++a) {
        json ja = json::array();
        for (int b = 0; b < s.outcomesB; ++b) {
            json jb = json::array();
            for (int x = 0; x < s.settingsX; ++x) {
                json jx = json::array();
                for (int y = 0; y < s.settingsY; ++y) jx.push_back(f.at(a, b, x, y));
                jb.push_back(std::move(jx));
            }
            ja.push_back(std::move(jb));
        }
        coeff.push_back(std::move(ja));
    }
    return json{{"kind", "bell"},
                {"outcomes", {s.outcomesA, s.outcomesB}},
                {"settingsX", s.settingsX},
                {"settingsY", s.settingsY},
                {"coeff", std::move(coeff)},
                {"constant", f.constant}};
}

json toJson(const DimensionWitness& w) {
    const SdiScenario& s = w.scenario;
    json coeff = json::array();
    for (int b = 0; b < s.outcomes; ++b) {
        json jb = json::array();
        for (int x = 0; x < s.preparations; ++x) {
            json jx = json::array();
            for (int y = 0; y < s.settings; ++y) jx.push_back(w.at(b, x, y));
            jb.push_back(std::move(jx));
        }
        coeff.push_back(std::move(jb));
    }
    return json{{"kind", "witness"},      {"outcomes", s.outcomes}, {"preparations", s.preparations},
                {"settingsY", s.settings}, {"dim", s.dim},          {"coeff", std::move(coeff)},
                {"constant", w.constant}};
}

json toJson(const Functional& f) {
    return std::visit([](const auto& v) { return toJson(v); }, f);
}

BellFunctional bellFromJson(const json& j) {
    if (!j.contains("outcomes") || !j.at("outcomes").is_array() || j.at("outcomes").size() != 2)
        fail(ErrorCode::Parse, "bell 'outcomes' must be a two-element array [A, B]");
    DiScenario s{j.at("outcomes")[0].get<int>(), j.at("outcomes")[1].get<int>(), positiveInt(j, "settingsX"),
                 positiveInt(j, "settingsY")};
    s.validate();
    BellFunctional f = BellFunctional::zero(s, number(j, "constant", 0.0));
    if (!j.contains("coeff")) fail(ErrorCode::Parse, "missing 'coeff'");
    const json& c = j.at("coeff");
    for (int a = 0; a < s.outcomesA; ++a) {
        const json& ja = nested(c, a, s.outcomesA, "a");
        for (int b = 0; b < s.outcomesB; ++b) {
            const json& jb = nested(ja, b, s.outcomesB, "b");
            for (int x = 0; x < s.settingsX; ++x) {
                const json& jx = nested(jb, x, s.settingsX, "x");
                for (int y = 0; y < s.settingsY; ++y) f.at(a, b, x, y) = nested(jx, y, s.settingsY, "y").get<double>();
            }
        }
    }
    f.validate();
    return f;
}

DimensionWitness witnessFromJson(const json& j) {
    SdiScenario s{positiveInt(j, "outcomes"), positiveInt(j, "preparations"), positiveInt(j, "settingsY"),
                  j.contains("dim") ? j.at("dim").get<int>() : 2};
    s.validate();
    DimensionWitness w = DimensionWitness::zero(s, number(j, "constant", 0.0));
    if (!j.contains("coeff")) fail(ErrorCode::Parse, "missing 'coeff'");
    const json& c = j.at("coeff");
    for (int b = 0; b < s.outcomes; ++b) {
        const json& jb = nested(c, b, s.outcomes, "b");
        for (int x = 0; x < s.preparations; ++x) {
            const json& jx = nested(jb, x, s.preparations, "x");
            for (int y = 0; y < s.settings; ++y) w.at(b, x, y) = nested(jx, y, s.settings, "y").get<double>();
        }
    }
    w.validate();
    return w;
}

Functional functionalFromJson(const json& j) {
    const std::string kind = j.value("kind", "");
    if (kind == "witness") return witnessFromJson(j);
    if (kind == "bell") return bellFromJson(j);
    fail(ErrorCode::Parse, "unknown functional kind '" + kind + "'");
}

Functional loadFunctional(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::Parse, "cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(ErrorCode::Parse, path.string() + ": " + e.what());
    }
    return functionalFromJson(j);
}

void saveFunctional(const std::filesystem::path& path, const Functional& f) {
    std::ofstream out(path);
    require(static_cast<bool>(out), ErrorCode::Parse, "cannot write " + path.string());
    out << toJson(f).dump(2) << '\n';
}

}  // namespace dimwit
