#include "dimwit/npa.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

namespace dimwit::npa {

namespace {

Word reduceRun(const Word& seq, bool& zero) {
    Word out;
    for (const Symbol& s : seq) {
        if (!out.empty() && out.back().setting == s.setting) {
            if (out.back().outcome == s.outcome) continue;
            zero = true;
            return {};
        }
        out.push_back(s);
    }
    return out;
}

Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

// Projectors of one party, excluding each setting's last outcome.
std::vector<Symbol> operators(const DiScenario& s) {
    std::vector<Symbol> ops;
    for (int x = 0; x < s.settingsX; ++x)
        for (int a = 0; a + 1 < s.outcomesA; ++a) ops.push_back({Party::A, x, a});
    for (int y = 0; y < s.settingsY; ++y)
        for (int b = 0; b + 1 < s.outcomesB; ++b) ops.push_back({Party::B, y, b});
    return ops;
}

bool wordLess(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

int maxLength(Level level) {
    switch (level) {
        case Level::One:
        case Level::OnePlusAB: return 1;
        case Level::Two: return 2;
        case Level::Three: return 3;
    }
    return 1;
}

// Completeness: E^a = I - sum of the stored outcomes when a is the last one.
std::vector<std::pair<Word, double>> expandProjector(Party party, int setting, int outcome, int outcomes) {
    if (outcome + 1 < outcomes) return {{Word{Symbol{party, setting, outcome}}, 1.0}};
    std::vector<std::pair<Word, double>> out{{Word{}, 1.0}};
    for (int o = 0; o + 1 < outcomes; ++o) out.push_back({Word{Symbol{party, setting, o}}, -1.0});
    return out;
}

bool sameConstraint(const LinearConstraint& a, const LinearConstraint& b) {
    return a.relation == b.relation && a.rhs == b.rhs && a.lhs.constant == b.lhs.constant &&
           a.lhs.coeffs == b.lhs.coeffs;
}

}  // namespace

std::optional<Word> canonicalize(const Word& w) {
    Word a;
    Word b;
    for (const Symbol& s : w) (s.party == Party::A ? a : b).push_back(s);
    bool zero = false;
    Word ra = reduceRun(a, zero);
    if (zero) return std::nullopt;
    Word rb = reduceRun(b, zero);
    if (zero) return std::nullopt;
    return concat(ra, rb);
}

Word adjoint(const Word& w) {
    Word a;
    Word b;
    for (const Symbol& s : w) (s.party == Party::A ? a : b).push_back(s);
    std::reverse(a.begin(), a.end());
    std::reverse(b.begin(), b.end());
    return concat(a, b);
}

std::string wordName(const Word& w) {
    if (w.empty()) return "1";
    std::ostringstream out;
    for (const Symbol& s : w) out << (s.party == Party::A ? "A" : "B") << s.setting << "_" << s.outcome;
    return out.str();
}

Level parseLevel(const std::string& s) {
    if (s == "1") return Level::One;
    if (s == "1+AB" || s == "1+ab") return Level::OnePlusAB;
    if (s == "2") return Level::Two;
    if (s == "3") return Level::Three;
    fail(ErrorCode::Domain, "unsupported NPA level '" + s + "' (use 1, 1+AB, 2 or 3)");
}

std::string levelName(Level level) {
    switch (level) {
        case Level::One: return "1";
        case Level::OnePlusAB: return "1+AB";
        case Level::Two: return "2";
        case Level::Three: return "3";
    }
    return "?";
}

LinearForm& LinearForm::operator+=(const LinearForm& o) {
    for (const auto& [k, v] : o.coeffs) {
        const double nv = (coeffs[k] += v);
        if (nv == 0.0) coeffs.erase(k);
    }
    constant += o.constant;
    return *this;
}

LinearForm& LinearForm::operator*=(double f) {
    if (f == 0.0) {
        coeffs.clear();
        constant = 0.0;
        return *this;
    }
    for (auto& [k, v] : coeffs) v *= f;
    constant *= f;
    return *this;
}

double LinearForm::evaluate(const Eigen::VectorXd& y) const {
    double value = constant;
    for (const auto& [k, v] : coeffs) value += v * y(k);
    return value;
}

LinearForm operator+(LinearForm lhs, const LinearForm& rhs) { return lhs += rhs; }
LinearForm operator-(LinearForm lhs, const LinearForm& rhs) { return lhs += -1.0 * rhs; }
LinearForm operator*(double f, LinearForm form) { return form *= f; }

std::optional<int> MomentProblem::variableOf(const Word& w) const {
    const auto canon = canonicalize(w);
    if (!canon || canon->empty()) return std::nullopt;
    const Word key = std::min(*canon, adjoint(*canon));
    const auto it = lookup.find(key);
    if (it == lookup.end()) return std::nullopt;
    return it->second;
}

namespace {

LinearForm momentForm(const MomentProblem& mp, const Word& w) {
    LinearForm f;
    const auto canon = canonicalize(w);
    if (!canon) return f;
    if (canon->empty()) {
        f.constant = 1.0;
        return f;
    }
    const auto id = mp.variableOf(*canon);
    require(id.has_value(), ErrorCode::Domain, "moment " + wordName(*canon) + " is not part of this relaxation");
    f.coeffs[*id] = 1.0;
    return f;
}

}  // namespace

LinearForm MomentProblem::probability(int a, int b, int x, int y) const {
    require(a >= 0 && a < scenario.outcomesA && b >= 0 && b < scenario.outcomesB && x >= 0 &&
                x < scenario.settingsX && y >= 0 && y < scenario.settingsY,
            ErrorCode::Shape, "probability index out of range");
    LinearForm out;
    for (const auto& [wa, ca] : expandProjector(Party::A, x, a, scenario.outcomesA))
        for (const auto& [wb, cb] : expandProjector(Party::B, y, b, scenario.outcomesB))
            out += (ca * cb) * momentForm(*this, concat(wa, wb));
    return out;
}

LinearForm MomentProblem::marginalA(int a, int x) const {
    LinearForm out;
    for (const auto& [w, c] : expandProjector(Party::A, x, a, scenario.outcomesA)) out += c * momentForm(*this, w);
    return out;
}

LinearForm MomentProblem::marginalB(int b, int y) const {
    LinearForm out;
    for (const auto& [w, c] : expandProjector(Party::B, y, b, scenario.outcomesB)) out += c * momentForm(*this, w);
    return out;
}

MomentProblem buildMomentProblem(const DiScenario& scen, Level level, bool complexMoments) {
    scen.validate();
    MomentProblem mp;
    mp.scenario = scen;
    mp.level = level;
    mp.complexMoments = complexMoments;

    const std::vector<Symbol> ops = operators(scen);
    std::set<Word, decltype(&wordLess)> found(&wordLess);
    found.insert(Word{});
    std::vector<Word> frontier{Word{}};
    for (int len = 1; len <= maxLength(level); ++len) {
        std::vector<Word> next;
        for (const Word& w : frontier) {
            for (const Symbol& s : ops) {
                Word ext = w;
                ext.push_back(s);
                const auto canon = canonicalize(ext);
                if (canon && found.insert(*canon).second) next.push_back(*canon);
            }
        }
        frontier = std::move(next);
    }
    if (level == Level::OnePlusAB) {
        for (const Symbol& sa : ops) {
            if (sa.party != Party::A) continue;
            for (const Symbol& sb : ops)
                if (sb.party == Party::B) found.insert(Word{sa, sb});
        }
    }
    mp.words.assign(found.begin(), found.end());

    const int n = mp.size();
    mp.index.assign(static_cast<std::size_t>(n), std::vector<MomentRef>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        const Word left = adjoint(mp.words[static_cast<std::size_t>(i)]);
        for (int j = 0; j < n; ++j) {
            const auto canon = canonicalize(concat(left, mp.words[static_cast<std::size_t>(j)]));
            MomentRef& ref = mp.index[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (!canon) continue;
            if (canon->empty()) {
                ref.var = MomentRef::kOne;
                continue;
            }
            const Word adj = adjoint(*canon);
            const Word key = std::min(*canon, adj);
            auto it = mp.lookup.find(key);
            if (it == mp.lookup.end()) {
                it = mp.lookup.emplace(key, mp.numVars()).first;
                mp.variables.push_back(key);
                mp.selfAdjoint.push_back(*canon == adj);
            }
            ref.var = it->second;
            ref.conjugate = *canon != key;
        }
    }
    return mp;
}

void addConstraint(MomentProblem& mp, LinearConstraint c) {
    for (const LinearConstraint& existing : mp.constraints)
        if (sameConstraint(existing, c)) return;
    mp.constraints.push_back(std::move(c));
}

namespace {

LinearForm functionalForm(const MomentProblem& mp, const BellFunctional& f) {
    require(f.scenario == mp.scenario, ErrorCode::Shape, "functional scenario differs from the moment problem");
    LinearForm form;
    form.constant = f.constant;
    const DiScenario& s = f.scenario;
    for (int a = 0; a < s.outcomesA; ++a)
        for (int b = 0; b < s.outcomesB; ++b)
            for (int x = 0; x < s.settingsX; ++x)
                for (int y = 0; y < s.settingsY; ++y) {
                    const double c = f.at(a, b, x, y);
                    if (c != 0.0) form += c * mp.probability(a, b, x, y);
                }
    return form;
}

}  // namespace

void addWitnessValueConstraint(MomentProblem& mp, const BellFunctional& f, double s, Relation relation) {
    if (s == -std::numeric_limits<double>::infinity()) return;
    require(std::isfinite(s), ErrorCode::Domain, "witness value must be finite or -inf");
    addConstraint(mp, {functionalForm(mp, f), relation, s});
}

void addTheorem1Marginals(MomentProblem& mp, int d) {
    require(d >= 2, ErrorCode::Domain, "dimension must be at least 2");
    for (int x = 0; x < mp.scenario.settingsX; ++x)
        addConstraint(mp, {mp.marginalA(0, x), Relation::Equal, 1.0 / d});
}

void addSymmetryConstraints(MomentProblem& mp) {
    require(mp.scenario.binary(), ErrorCode::Precondition, "symmetry constraints need a binary scenario");
    for (int x = 0; x < mp.scenario.settingsX; ++x)
        for (int y = 0; y < mp.scenario.settingsY; ++y)
            for (int b = 0; b < 2; ++b)
                addConstraint(mp, {mp.probability(0, b, x, y) - mp.probability(1, 1 - b, x, y), Relation::Equal, 0.0});
}

void setGuessingObjective(MomentProblem& mp, GuessMode mode, int a, int b, int x0, int y0, int d) {
    switch (mode) {
        case GuessMode::DI: mp.objective = mp.probability(a, b, x0, y0); break;
        case GuessMode::Theorem1: mp.objective = static_cast<double>(d) * mp.probability(0, b, x0, y0); break;
        case GuessMode::Theorem2:
            require(mp.scenario.binary(), ErrorCode::Precondition, "Theorem-2 objective needs a binary scenario");
            mp.objective = mp.probability(0, b, x0, y0) + mp.probability(1, 1 - b, x0, y0);
            break;
    }
}

void setObjective(MomentProblem& mp, const BellFunctional& f) { mp.objective = functionalForm(mp, f); }

sdp::LmiProblem toLmi(const MomentProblem& mp) {
    const int n = mp.size();
    const int nv = mp.numVars();
    std::vector<int> imagId(static_cast<std::size_t>(nv), -1);
    int total = nv;
    if (mp.complexMoments)
        for (int k = 0; k < nv; ++k)
            if (!mp.selfAdjoint[static_cast<std::size_t>(k)]) imagId[static_cast<std::size_t>(k)] = total++;

    sdp::LmiProblem lmi;
    lmi.numVars = total;
    lmi.terms.resize(static_cast<std::size_t>(total));
    lmi.blocks.push_back({mp.complexMoments ? 2 * n : n, false});
    auto put = [&](int r, int c, const MomentRef& ref, double scale) {
        if (ref.var == MomentRef::kZero || scale == 0.0) return;
        if (ref.var == MomentRef::kOne)
            lmi.constant.push_back({0, r, c, scale});
        else
            lmi.terms[static_cast<std::size_t>(ref.var)].push_back({0, r, c, scale});
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const MomentRef& ref = mp.index[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            put(i, j, ref, 1.0);
            if (mp.complexMoments) put(n + i, n + j, ref, 1.0);
        }
    }
    if (mp.complexMoments) {
        // Off-diagonal block holds -Im(Gamma).
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const MomentRef& ref = mp.index[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (ref.var < 0) continue;
                const int im = imagId[static_cast<std::size_t>(ref.var)];
                if (im < 0) continue;
                lmi.terms[static_cast<std::size_t>(im)].push_back({0, i, n + j, ref.conjugate ? 1.0 : -1.0});
            }
        }
    }

    int ineq = 0;
    for (const LinearConstraint& c : mp.constraints)
        if (c.relation == Relation::GreaterEqual) ++ineq;
    if (ineq > 0) lmi.blocks.push_back({ineq, true});
    int slot = 0;
    for (const LinearConstraint& c : mp.constraints) {
        if (c.relation == Relation::Equal) {
            sdp::LmiProblem::Row row;
            row.coeffs.assign(c.lhs.coeffs.begin(), c.lhs.coeffs.end());
            row.rhs = c.rhs - c.lhs.constant;
            lmi.equalities.push_back(std::move(row));
        } else {
            const double k0 = c.lhs.constant - c.rhs;
            if (k0 != 0.0) lmi.constant.push_back({1, slot, slot, k0});
            for (const auto& [k, v] : c.lhs.coeffs) lmi.terms[static_cast<std::size_t>(k)].push_back({1, slot, slot, v});
            ++slot;
        }
    }

    lmi.objective = Eigen::VectorXd::Zero(total);
    for (const auto& [k, v] : mp.objective.coeffs) lmi.objective(k) = v;
    lmi.objectiveConstant = mp.objective.constant;
    return lmi;
}

sdp::Problem toSdp(const MomentProblem& mp) {
    sdp::Elimination elim;
    double offset = 0.0;
    sdp::Problem p = sdp::toStandardForm(toLmi(mp), elim, offset);
    require(!elim.inconsistent, ErrorCode::Domain, "moment problem equalities are inconsistent");
    return p;
}

void writeSparse(std::ostream& out, const MomentProblem& mp) {
    sdp::Elimination elim;
    double offset = 0.0;
    const sdp::Problem p = sdp::toStandardForm(toLmi(mp), elim, offset);
    require(!elim.inconsistent, ErrorCode::Domain, "moment problem equalities are inconsistent");
    out << "\"NPA level " << levelName(mp.level) << ", " << mp.size() << " words, objective = " << offset
        << " - <C,X>\n";
    sdp::writeSparse(out, p);
}

MomentSolution solve(const MomentProblem& mp, const sdp::Options& opts) {
    const sdp::LmiSolution sol = sdp::solveLmi(toLmi(mp), opts);
    MomentSolution out;
    out.status = sol.status;
    out.value = sol.value;
    out.raw = sol.raw;
    if (sol.y.size() >= mp.numVars()) out.moments = sol.y.head(mp.numVars());
    return out;
}

DiDistribution distributionFromMoments(const MomentProblem& mp, const Eigen::VectorXd& y) {
    DiDistribution p(mp.scenario);
    const DiScenario& s = mp.scenario;
    for (int a = 0; a < s.outcomesA; ++a)
        for (int b = 0; b < s.outcomesB; ++b)
            for (int x = 0; x < s.settingsX; ++x)
                for (int yy = 0; yy < s.settingsY; ++yy) p(a, b, x, yy) = mp.probability(a, b, x, yy).evaluate(y);
    return p;
}

double feasibilityResidual(const MomentProblem& mp, const DiDistribution& p, const sdp::Options& opts) {
    require(p.scenario() == mp.scenario, ErrorCode::Shape, "distribution scenario differs from the moment problem");
    const DiScenario& s = mp.scenario;

    // Moments fixed by the distribution; no-signalling marginals from y = 0 / x = 0.
    Eigen::VectorXd fixedValue = Eigen::VectorXd::Constant(mp.numVars(), std::nan(""));
    for (int x = 0; x < s.settingsX; ++x)
        for (int a = 0; a + 1 < s.outcomesA; ++a)
            if (auto id = mp.variableOf({{Party::A, x, a}})) fixedValue(*id) = p.marginalA(a, x, 0);
    for (int y = 0; y < s.settingsY; ++y)
        for (int b = 0; b + 1 < s.outcomesB; ++b)
            if (auto id = mp.variableOf({{Party::B, y, b}})) fixedValue(*id) = p.marginalB(b, 0, y);
    for (int x = 0; x < s.settingsX; ++x)
        for (int y = 0; y < s.settingsY; ++y)
            for (int a = 0; a + 1 < s.outcomesA; ++a)
                for (int b = 0; b + 1 < s.outcomesB; ++b)
                    if (auto id = mp.variableOf({{Party::A, x, a}, {Party::B, y, b}})) fixedValue(*id) = p(a, b, x, y);

    double linear = 0.0;
    Eigen::VectorXd probe = fixedValue;
    for (Eigen::Index k = 0; k < probe.size(); ++k)
        if (std::isnan(probe(k))) probe(k) = 0.0;
    for (const LinearConstraint& c : mp.constraints) {
        const double v = c.lhs.evaluate(probe) - c.rhs;
        linear = std::max(linear, c.relation == Relation::Equal ? std::abs(v) : std::max(0.0, -v));
    }

    MomentProblem bare = mp;
    bare.constraints.clear();
    bare.objective = LinearForm{};
    sdp::LmiProblem lmi = toLmi(bare);
    const int t = lmi.numVars++;
    lmi.terms.emplace_back();
    for (int i = 0; i < lmi.blocks[0].size; ++i) lmi.terms[static_cast<std::size_t>(t)].push_back({0, i, i, -1.0});
    lmi.objective.conservativeResize(lmi.numVars);
    lmi.objective.setZero();
    lmi.objective(t) = 1.0;
    lmi.objectiveConstant = 0.0;
    for (int k = 0; k < mp.numVars(); ++k)
        if (!std::isnan(fixedValue(k))) lmi.equalities.push_back({{{k, 1.0}}, fixedValue(k)});

    const sdp::LmiSolution sol = sdp::solveLmi(lmi, opts);
    require(sol.status == sdp::Status::Optimal, ErrorCode::Solver,
            "feasibility SDP did not converge: " + sdp::statusName(sol.status));
    return std::max(linear, std::max(0.0, -sol.value));
}

}  // namespace dimwit::npa
