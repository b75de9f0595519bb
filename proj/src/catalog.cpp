#include "dimwit/catalog.hpp"

#include <cmath>
#include <map>

namespace dimwit::catalog {

namespace {

// Printed term lists use 1-indexed settings/preparations.
struct CorrTerm {
    int x;
    int y;
    double sign;
};

struct JointTerm {
    int a;
    int b;
    int x;
    int y;
    double sign;
};

struct WitnessTerm {
    int b;
    int x;
    int y;
    double sign;
};

Eigen::MatrixXd correlators(int nx, int ny, const std::vector<CorrTerm>& terms, double scale = 1.0) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(nx, ny);
    for (const CorrTerm& t : terms) c(t.x - 1, t.y - 1) += scale * t.sign;
    return c;
}

BellFunctional correlationBell(int nx, int ny, const std::vector<CorrTerm>& terms, double scale = 1.0) {
    return CorrelationBell{correlators(nx, ny, terms, scale), 0.0}.expand();
}

// Symmetric full witness: sum alpha_hat W'(x,y) stored as
// beta[b][(a,x)][y] = (-1)^(a+b) alpha_hat / 2 with (a,x) -> a*|X| + x.
DimensionWitness fullWitness(const Eigen::MatrixXd& c) {
    const int nx = static_cast<int>(c.rows());
    const int ny = static_cast<int>(c.cols());
    DimensionWitness w = DimensionWitness::zero({2, 2 * nx, ny, 2});
    for (int a = 0; a < 2; ++a)
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y) {
                const double v = (a == 0 ? 0.5 : -0.5) * c(x, y);
                w.at(0, a * nx + x, y) = v;
                w.at(1, a * nx + x, y) = -v;
            }
    return w;
}

// Reduced witness sum alpha_hat (2P(0|x,y) - 1) in the equivalent
// beta[0] = alpha_hat, beta[1] = -alpha_hat form.
DimensionWitness reducedWitness(const Eigen::MatrixXd& c) {
    const int nx = static_cast<int>(c.rows());
    const int ny = static_cast<int>(c.cols());
    DimensionWitness w = DimensionWitness::zero({2, nx, ny, 2});
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            w.at(0, x, y) = c(x, y);
            w.at(1, x, y) = -c(x, y);
        }
    return w;
}

Entry makeEntry(std::string name, Kind kind, Functional payload) {
    Entry e;
    e.name = std::move(name);
    e.kind = kind;
    e.payload = std::move(payload);
    return e;
}

SymmetryMap flipA(int nx) {
    SymmetryMap phi;
    for (int k = 0; k < 2 * nx; ++k) phi.phi.push_back((k + nx) % (2 * nx));
    return phi;
}

std::vector<int> firstHalf(int nx) {
    std::vector<int> h;
    for (int x = 0; x < nx; ++x) h.push_back(x);
    return h;
}

void addCorrelationFamily(std::map<std::string, Entry>& reg, const std::string& name, int nx, int ny,
                          const std::vector<CorrTerm>& bellTerms, const std::vector<CorrTerm>& fullFunctionalTerms,
                          SMax smax, const std::string& bellLabels) {
    const Eigen::MatrixXd c = correlators(nx, ny, bellTerms);
    const std::vector<std::string> family{name, name + "-full", name + "-reduced", name + "-full-functional"};
    auto refs = [&](const std::string& self) {
        std::vector<std::string> out;
        for (const auto& n : family)
            if (n != self) out.push_back(n);
        return out;
    };
    const std::string fullLabels = "preparation (a,x) -> a*" + std::to_string(nx) +
                                   " + x, i.e. printed (0,1)..(0," + std::to_string(nx) + ") -> 0.." +
                                   std::to_string(nx - 1) + ", (1,1)..(1," + std::to_string(nx) + ") -> " +
                                   std::to_string(nx) + ".." + std::to_string(2 * nx - 1) +
                                   "; printed setting y -> y-1";

    Entry bell = makeEntry(name, Kind::Bell, CorrelationBell{c, 0.0}.expand());
    bell.sMax = smax;
    bell.crossRefs = refs(name);
    bell.labels = bellLabels;
    reg[bell.name] = bell;

    Entry full = makeEntry(name + "-full", Kind::WitnessFull, fullWitness(c));
    full.symmetry = flipA(nx);
    full.half = firstHalf(nx);
    full.sMax = smax;
    full.crossRefs = refs(full.name);
    full.labels = fullLabels;
    reg[full.name] = full;

    Entry reduced = makeEntry(name + "-reduced", Kind::WitnessReduced, reducedWitness(c));
    reduced.sMax = smax;
    reduced.crossRefs = refs(reduced.name);
    reduced.labels = "printed preparation x -> x-1, setting y -> y-1";
    reg[reduced.name] = reduced;

    Entry functional = makeEntry(name + "-full-functional", Kind::RelaxationFunctional,
                     correlationBell(2 * nx, ny, fullFunctionalTerms, 0.5));
    functional.sMax = smax;
    functional.crossRefs = refs(functional.name);
    functional.labels = "printed Alice setting k -> k-1 with " + fullLabels;
    reg[functional.name] = functional;
}

// T3 family: preparations are 3-bit strings x0x1x2 (x0 most significant);
// the full witness is sum (-1)^{x_y} P(0|x,y).
int bit(int x, int y) { return (x >> (2 - y)) & 1; }

void addT3Family(std::map<std::string, Entry>& reg) {
    const SMax smax{4.0 * std::sqrt(3.0), Provenance::Published, "maximal qubit value of the 3-to-1 QRAC witness"};
    const std::vector<std::string> family{"T3", "T3-full", "T3-reduced", "T3-full-functional"};
    auto refs = [&](const std::string& self) {
        std::vector<std::string> out;
        for (const auto& n : family)
            if (n != self) out.push_back(n);
        return out;
    };

    // Printed T3 Bell operator over x in {00,01,10,11} -> 1..4.
    const std::vector<CorrTerm> t3{{1, 1, 1},  {2, 1, 1},  {3, 1, 1},  {4, 1, 1},  {1, 2, 1},  {1, 3, 1},
                                   {2, 2, 1},  {2, 3, -1}, {3, 2, -1}, {3, 3, 1},  {4, 2, -1}, {4, 3, -1}};
    Entry bell = makeEntry("T3", Kind::Bell, correlationBell(4, 3, t3));
    bell.sMax = smax;
    bell.crossRefs = refs("T3");
    bell.labels = "printed x = 1..4 -> 00,01,10,11 -> 0..3; printed y = 1..3 -> 0..2";
    reg[bell.name] = bell;

    // Full witness in the symmetric form beta[b] = (-1)^b (-1)^{x_y} / 2,
    // equal in value to the printed single-outcome sum since every column
    // of signs sums to zero.
    DimensionWitness full = DimensionWitness::zero({2, 8, 3, 2});
    for (int x = 0; x < 8; ++x)
        for (int y = 0; y < 3; ++y) {
            const double s = bit(x, y) ? -1.0 : 1.0;
            full.at(0, x, y) = 0.5 * s;
            full.at(1, x, y) = -0.5 * s;
        }
    Entry fe = makeEntry("T3-full", Kind::WitnessFull, full);
    SymmetryMap phi;
    for (int x = 0; x < 8; ++x) phi.phi.push_back(7 - x);
    fe.symmetry = phi;
    fe.half = {0, 1, 2, 3};
    fe.sMax = smax;
    fe.crossRefs = refs("T3-full");
    fe.labels = "preparation index = bits x0x1x2 (000 -> 0 ... 111 -> 7); y = 0..2; phi = bitwise negation";
    reg[fe.name] = fe;

    // Printed reduced witness over {00,01,10,11}: signs of P(0|x,y).
    const std::vector<WitnessTerm> t3dw{{0, 1, 1, 1},  {0, 2, 1, 1},  {0, 3, 1, 1},  {0, 4, 1, 1},
                                        {0, 1, 2, 1},  {0, 1, 3, 1},  {0, 2, 2, 1},  {0, 2, 3, -1},
                                        {0, 3, 2, -1}, {0, 3, 3, 1},  {0, 4, 2, -1}, {0, 4, 3, -1}};
    DimensionWitness red = DimensionWitness::zero({2, 4, 3, 2});
    for (const WitnessTerm& t : t3dw) {
        red.at(0, t.x - 1, t.y - 1) = t.sign;
        red.at(1, t.x - 1, t.y - 1) = -t.sign;
    }
    Entry re = makeEntry("T3-reduced", Kind::WitnessReduced, red);
    re.sMax = smax;
    re.crossRefs = refs("T3-reduced");
    re.labels = "printed x = 00,01,10,11 -> 0..3 (leading bit 0 half of T3-full); printed y = 0..2 unchanged";
    reg[re.name] = re;

    const std::vector<CorrTerm> t3full{{1, 1, 1},  {5, 1, -1}, {2, 1, 1},  {6, 1, -1}, {3, 1, 1},  {7, 1, -1},
                                       {4, 1, 1},  {8, 1, -1}, {1, 2, 1},  {5, 2, -1}, {1, 3, 1},  {5, 3, -1},
                                       {2, 2, 1},  {6, 2, -1}, {2, 3, -1}, {6, 3, 1},  {3, 2, -1}, {7, 2, 1},
                                       {3, 3, 1},  {7, 3, -1}, {4, 2, -1}, {8, 2, 1},  {4, 3, -1}, {8, 3, 1}};
    // Printed x = 5..8 are the complements of x = 1..4.
    std::vector<CorrTerm> relabelled;
    for (CorrTerm t : t3full) {
        if (t.x > 4) t.x = 13 - t.x;
        relabelled.push_back(t);
    }
    Entry ff = makeEntry("T3-full-functional", Kind::RelaxationFunctional, correlationBell(8, 3, relabelled, 0.5));
    ff.sMax = smax;
    ff.crossRefs = refs("T3-full-functional");
    ff.labels = "printed x = 1..4 -> 000,001,010,011 -> 0..3; printed x = 5..8 -> 111,110,101,100 -> 7..4; "
                "printed y = 1..3 -> 0..2";
    reg[ff.name] = ff;
}

void addCglmp(std::map<std::string, Entry>& reg) {
    const std::vector<JointTerm> bell{
        {0, 0, 1, 1, 1},  {0, 2, 1, 1, -1}, {0, 0, 1, 2, 1},  {0, 2, 1, 2, -1}, {1, 0, 1, 1, -1}, {1, 1, 1, 1, 1},
        {1, 0, 1, 2, -1}, {1, 1, 1, 2, 1},  {2, 1, 1, 1, -1}, {2, 2, 1, 1, 1},  {2, 1, 1, 2, -1}, {2, 2, 1, 2, 1},
        {0, 0, 2, 1, -1}, {0, 1, 2, 1, 1},  {0, 0, 2, 2, 1},  {0, 2, 2, 2, -1}, {1, 1, 2, 1, -1}, {1, 2, 2, 1, 1},
        {1, 0, 2, 2, -1}, {1, 1, 2, 2, 1},  {2, 0, 2, 1, 1},  {2, 2, 2, 1, -1}, {2, 1, 2, 2, -1}, {2, 2, 2, 2, 1}};
    BellFunctional f = BellFunctional::zero({3, 3, 2, 2});
    for (const JointTerm& t : bell) f.at(t.a, t.b, t.x - 1, t.y - 1) += t.sign;
    Entry be = makeEntry("CGLMP", Kind::Bell, f);
    be.crossRefs = {"CGLMP-witness", "CGLMP-relaxation"};
    be.labels = "printed P(a,b|x,y): outcomes 0-indexed as printed, settings x,y = 1..2 -> 0..1";
    reg[be.name] = be;

    const std::vector<WitnessTerm> dw{
        {0, 1, 1, 1},  {2, 1, 1, -1}, {0, 1, 2, 1},  {2, 1, 2, -1}, {0, 2, 1, -1}, {1, 2, 1, 1},
        {0, 2, 2, -1}, {1, 2, 2, 1},  {1, 3, 1, -1}, {2, 3, 1, 1},  {1, 3, 2, -1}, {2, 3, 2, 1},
        {0, 4, 1, -1}, {1, 4, 1, 1},  {0, 4, 2, 1},  {2, 4, 2, -1}, {1, 5, 1, -1}, {2, 5, 1, 1},
        {0, 5, 2, -1}, {1, 5, 2, 1},  {0, 6, 1, 1},  {2, 6, 1, -1}, {1, 6, 2, -1}, {2, 6, 2, 1}};
    DimensionWitness w = DimensionWitness::zero({3, 6, 2, 3});
    for (const WitnessTerm& t : dw) w.at(t.b, t.x - 1, t.y - 1) += t.sign;
    Entry we = makeEntry("CGLMP-witness", Kind::WitnessFull, w);
    we.crossRefs = {"CGLMP", "CGLMP-relaxation"};
    we.labels = "printed preparation 1..6 = (a,x) pairs (0,1),(1,1),(2,1),(0,2),(1,2),(2,2) -> a + 3*(x-1); "
                "coefficients as printed, without the P(a|x) = 1/3 factor";
    reg[we.name] = we;

    BellFunctional rel = BellFunctional::zero({2, 3, 6, 2});
    for (const WitnessTerm& t : dw) rel.at(0, t.b, t.x - 1, t.y - 1) += t.sign;
    Entry re = makeEntry("CGLMP-relaxation", Kind::RelaxationFunctional, rel);
    re.crossRefs = {"CGLMP", "CGLMP-witness"};
    re.labels = "printed P(0,b|x,y) with x = 1..6 -> 0..5, y = 1..2 -> 0..1; Alice outcome 1 has zero weight";
    reg[re.name] = re;
}

std::map<std::string, Entry> build() {
    std::map<std::string, Entry> reg;
    const double r2 = std::sqrt(2.0);
    const double r3 = std::sqrt(3.0);

    addCorrelationFamily(reg, "T2", 2, 2, {{1, 1, 1}, {1, 2, 1}, {2, 1, 1}, {2, 2, -1}},
                         {{1, 1, 1}, {1, 2, 1}, {2, 1, 1}, {2, 2, -1}, {3, 1, 1}, {3, 2, 1}, {4, 1, 1}, {4, 2, -1}},
                         {2.0 * r2, Provenance::Computed, "Tsirelson value; see-saw and SDP agree"},
                         "printed x,y = 1..2 -> 0..1");
    addCorrelationFamily(reg, "BC3", 3, 3, {{1, 1, 1}, {1, 2, 1}, {2, 2, 1}, {2, 3, 1}, {3, 3, 1}, {3, 1, -1}},
                         {{1, 1, 1}, {1, 2, 1}, {2, 2, 1}, {2, 3, 1}, {3, 3, 1}, {3, 1, -1},
                          {4, 1, 1}, {4, 2, 1}, {5, 2, 1}, {5, 3, 1}, {6, 3, 1}, {6, 1, -1}},
                         {3.0 * r3, Provenance::Computed, "chained-inequality optimum; see-saw, grid and SDP agree"},
                         "printed x,y = 1..3 -> 0..2");
    addCorrelationFamily(reg, "modCHSH", 2, 3, {{1, 2, 1}, {1, 3, 1}, {2, 1, 1}, {2, 2, 1}, {2, 3, -1}},
                         {{1, 2, 1}, {1, 3, 1}, {2, 1, 1}, {2, 2, 1}, {2, 3, -1},
                          {3, 2, 1}, {3, 3, 1}, {4, 1, 1}, {4, 2, 1}, {4, 3, -1}},
                         {1.0 + 2.0 * r2, Provenance::Computed, "1 + 2 sqrt 2; see-saw and SDP agree"},
                         "printed x = 1..2 -> 0..1, y = 1..3 -> 0..2");
    // CHSH is the T2 Bell operator under its usual name.
    Entry chsh = reg.at("T2");
    chsh.name = "CHSH";
    chsh.crossRefs = {"T2", "T2-full", "T2-reduced", "T2-full-functional"};
    reg["CHSH"] = chsh;
    addT3Family(reg);
    addCglmp(reg);
    return reg;
}

const std::map<std::string, Entry>& registry() {
    static const std::map<std::string, Entry> reg = build();
    return reg;
}

}  // namespace

std::string kindName(Kind k) {
    switch (k) {
        case Kind::Bell: return "bell";
        case Kind::WitnessFull: return "witness-full";
        case Kind::WitnessReduced: return "witness-reduced";
        case Kind::RelaxationFunctional: return "relaxation-functional";
    }
    return "?";
}

std::string provenanceName(Provenance p) { return p == Provenance::Published ? "published" : "computed"; }

const BellFunctional& Entry::bell() const {
    const auto* f = std::get_if<BellFunctional>(&payload);
    require(f != nullptr, ErrorCode::Precondition, "catalog entry '" + name + "' is not a Bell functional");
    return *f;
}

const DimensionWitness& Entry::witness() const {
    const auto* w = std::get_if<DimensionWitness>(&payload);
    require(w != nullptr, ErrorCode::Precondition, "catalog entry '" + name + "' is not a dimension witness");
    return *w;
}

const Entry& get(const std::string& name) {
    const auto& reg = registry();
    const auto it = reg.find(name);
    require(it != reg.end(), ErrorCode::Domain, "unknown catalog entry '" + name + "'");
    return it->second;
}

std::vector<std::string> list() {
    std::vector<std::string> names;
    for (const auto& [n, e] : registry()) names.push_back(n);
    return names;
}

bool contains(const std::string& name) { return registry().count(name) > 0; }

nlohmann::json toJson(const Entry& e) {
    nlohmann::json j{{"name", e.name},     {"kind", kindName(e.kind)}, {"payload", dimwit::toJson(e.payload)},
                     {"x0", e.x0},         {"y0", e.y0},               {"crossRefs", e.crossRefs},
                     {"labels", e.labels}};
    if (e.symmetry) {
        j["symmetry"] = e.symmetry->phi;
        j["half"] = e.half;
    }
    if (e.sMax) j["sMax"] = {{"value", e.sMax->value}, {"provenance", provenanceName(e.sMax->provenance)},
                             {"note", e.sMax->note}};
    return j;
}

}  // namespace dimwit::catalog
