#include "dimwit/seesaw.hpp"

#include <cmath>
#include <algorithm>
#include <random>

#include "dimwit/parallel.hpp"

namespace dimwit::seesaw {

namespace {

Eigen::Vector3d randomUnit(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Vector3d v;
    do {
        v = Eigen::Vector3d(n(rng), n(rng), n(rng));
    } while (v.norm() < 1e-12);
    return v.normalized();
}

// Unit vector along v; keeps the old one when v vanishes.
void alignTo(Eigen::Vector3d& target, const Eigen::Vector3d& v) {
    const double n = v.norm();
    if (n > 1e-15) target = v / n;
}

BlochStrategy randomStrategy(int nx, int ny, std::mt19937_64& rng) {
    BlochStrategy s;
    for (int x = 0; x < nx; ++x) s.states.push_back(randomUnit(rng));
    for (int y = 0; y < ny; ++y) s.measurements.push_back(randomUnit(rng));
    return s;
}

void requireQubitBinary(const DimensionWitness& w) {
    w.validate();
    require(w.binary(), ErrorCode::Precondition, "see-saw needs a binary witness");
    require(w.scenario.dim == 2, ErrorCode::Precondition, "see-saw is restricted to qubits (dim = 2)");
}

std::mt19937_64 restartRng(std::uint64_t seed, int restart) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(restart)};
    return std::mt19937_64(seq);
}

// Objective: lambda * W + (sigma/2) r_x0.m_y0 (the guessing term up to 1/2).
// Alternating exact block maximisation; never decreases the objective.
double alternate(const BlochForm& f, BlochStrategy& s, double lambda, int x0, int y0, double sigma,
                 const Options& opts) {
    const int nx = static_cast<int>(f.gamma.rows());
    const int ny = static_cast<int>(f.gamma.cols());
    auto objective = [&] {
        double v = lambda * witnessValue(f, s);
        if (x0 >= 0) v += 0.5 * sigma * s.states[x0].dot(s.measurements[y0]);
        return v;
    };
    double prev = objective();
    for (int round = 0; round < opts.maxRounds; ++round) {
        for (int x = 0; x < nx; ++x) {
            Eigen::Vector3d v = Eigen::Vector3d::Zero();
            for (int y = 0; y < ny; ++y) v += lambda * f.gamma(x, y) * s.measurements[y];
            if (x == x0) v += 0.5 * sigma * s.measurements[y0];
            alignTo(s.states[x], v);
        }
        for (int y = 0; y < ny; ++y) {
            Eigen::Vector3d v = Eigen::Vector3d::Zero();
            for (int x = 0; x < nx; ++x) v += lambda * f.gamma(x, y) * s.states[x];
            if (y == y0 && x0 >= 0) v += 0.5 * sigma * s.states[x0];
            alignTo(s.measurements[y], v);
        }
        const double cur = objective();
        if (cur - prev < opts.tolerance) {
            prev = std::max(prev, cur);
            break;
        }
        prev = cur;
    }
    return prev;
}

StrategyPoint makePoint(const DimensionWitness& w, const BlochStrategy& s, int x0, int y0, int restart) {
    StrategyPoint p;
    p.found = true;
    p.strategy = s;
    p.realization = s.realization();
    const SdiDistribution prob = probabilities(p.realization);
    p.achievedWitness = evaluateWitness(w, prob);
    if (x0 >= 0) {
        const double p0 = prob(0, x0, y0);
        const double p1 = prob(1, x0, y0);
        p.bStar = p1 > p0 ? 1 : 0;
        p.guessingProb = std::min(1.0, std::max(p0, p1));
    }
    p.restart = restart;
    return p;
}

}  // namespace

QuantumRealization BlochStrategy::realization() const {
    QuantumRealization r;
    r.dim = 2;
    for (const auto& v : states) r.states.push_back(fromBloch(v));
    for (const auto& m : measurements) r.povms.push_back({fromBloch(m), fromBloch(-m)});
    return r;
}

BlochForm blochForm(const DimensionWitness& w) {
    require(w.binary(), ErrorCode::Precondition, "Bloch form needs a binary witness");
    const int nx = w.scenario.preparations;
    const int ny = w.scenario.settings;
    BlochForm f;
    f.offset = w.constant;
    f.gamma = Eigen::MatrixXd::Zero(nx, ny);
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            f.offset += 0.5 * (w.at(0, x, y) + w.at(1, x, y));
            f.gamma(x, y) = 0.5 * (w.at(0, x, y) - w.at(1, x, y));
        }
    return f;
}

double witnessValue(const BlochForm& f, const BlochStrategy& s) {
    double v = f.offset;
    for (int x = 0; x < f.gamma.rows(); ++x)
        for (int y = 0; y < f.gamma.cols(); ++y) v += f.gamma(x, y) * s.states[x].dot(s.measurements[y]);
    return v;
}

StrategyPoint maximizeWitness(const DimensionWitness& w, const Options& opts) {
    requireQubitBinary(w);
    require(opts.restarts >= 1, ErrorCode::Domain, "see-saw needs at least one restart");
    const BlochForm f = blochForm(w);
    const int nx = w.scenario.preparations;
    const int ny = w.scenario.settings;
    std::vector<BlochStrategy> found(static_cast<std::size_t>(opts.restarts));
    std::vector<double> value(found.size());
    parallelFor(found.size(), opts.jobs, [&](std::size_t i) {
        std::mt19937_64 rng = restartRng(opts.seed, static_cast<int>(i));
        BlochStrategy s = randomStrategy(nx, ny, rng);
        alternate(f, s, 1.0, -1, 0, 0.0, opts);
        found[i] = s;
        value[i] = witnessValue(f, s);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < found.size(); ++i)
        if (value[i] > value[best]) best = i;
    return makePoint(w, found[best], -1, 0, static_cast<int>(best));
}

StrategyPoint maximizeGuessing(const DimensionWitness& w, int x0, int y0, double sFloor, const Options& opts) {
    requireQubitBinary(w);
    require(x0 >= 0 && x0 < w.scenario.preparations, ErrorCode::Domain, "x0 out of range");
    require(y0 >= 0 && y0 < w.scenario.settings, ErrorCode::Domain, "y0 out of range");
    require(opts.restarts >= 1, ErrorCode::Domain, "see-saw needs at least one restart");
    const BlochForm f = blochForm(w);
    const int nx = w.scenario.preparations;
    const int ny = w.scenario.settings;

    std::vector<std::optional<BlochStrategy>> found(static_cast<std::size_t>(opts.restarts));
    parallelFor(found.size(), opts.jobs, [&](std::size_t i) {
        std::mt19937_64 rng = restartRng(opts.seed, static_cast<int>(i));
        const BlochStrategy start = randomStrategy(nx, ny, rng);
        std::optional<BlochStrategy> best;
        double bestG = -1.0;
        auto consider = [&](const BlochStrategy& s) {
            if (witnessValue(f, s) < sFloor) return false;
            const double g = 0.5 * (1.0 + std::abs(s.states[x0].dot(s.measurements[y0])));
            if (g > bestG) {
                bestG = g;
                best = s;
            }
            return true;
        };
        for (double sigma : {1.0, -1.0}) {
            // A tiny multiplier lets the remaining vectors chase the witness
            // once the guessing pair has aligned.
            double lo = 1e-9;
            BlochStrategy s = start;
            alternate(f, s, lo, x0, y0, sigma, opts);
            if (consider(s)) continue;
            double hi = 1.0;
            BlochStrategy feasible;
            bool ok = false;
            for (; hi <= 1e6; hi *= 10.0) {
                BlochStrategy t = start;
                alternate(f, t, hi, x0, y0, sigma, opts);
                if (consider(t)) {
                    feasible = t;
                    ok = true;
                    break;
                }
                lo = hi;
            }
            if (!ok) continue;
            for (int k = 0; k < opts.bisections; ++k) {
                const double mid = std::sqrt(lo * hi);
                BlochStrategy t = feasible;
                alternate(f, t, mid, x0, y0, sigma, opts);
                if (consider(t)) {
                    hi = mid;
                    feasible = t;
                } else {
                    lo = mid;
                }
            }
        }
        found[i] = best;
    });

    StrategyPoint out;
    for (std::size_t i = 0; i < found.size(); ++i) {
        if (!found[i]) continue;
        StrategyPoint p = makePoint(w, *found[i], x0, y0, static_cast<int>(i));
        if (!out.found || p.guessingProb > out.guessingProb) out = p;
    }
    return out;
}

nlohmann::json toJson(const StrategyPoint& p) {
    auto angles = [](const Eigen::Vector3d& v) {
        return nlohmann::json{{"theta", std::acos(std::clamp(v.z(), -1.0, 1.0))}, {"phi", std::atan2(v.y(), v.x())}};
    };
    nlohmann::json j{{"found", p.found},
                     {"achievedWitness", p.achievedWitness},
                     {"guessingProb", p.guessingProb},
                     {"bStar", p.bStar},
                     {"restart", p.restart}};
    j["states"] = nlohmann::json::array();
    j["measurements"] = nlohmann::json::array();
    for (const auto& v : p.strategy.states) j["states"].push_back(angles(v));
    for (const auto& m : p.strategy.measurements) j["measurements"].push_back(angles(m));
    return j;
}

StrategyPoint strategyFromJson(const nlohmann::json& j, const DimensionWitness& w, int x0, int y0) {
    auto vec = [](const nlohmann::json& a) {
        const double t = a.at("theta").get<double>();
        const double ph = a.at("phi").get<double>();
        return Eigen::Vector3d(std::sin(t) * std::cos(ph), std::sin(t) * std::sin(ph), std::cos(t));
    };
    BlochStrategy s;
    for (const auto& a : j.at("states")) s.states.push_back(vec(a));
    for (const auto& a : j.at("measurements")) s.measurements.push_back(vec(a));
    require(static_cast<int>(s.states.size()) == w.scenario.preparations &&
                static_cast<int>(s.measurements.size()) == w.scenario.settings,
            ErrorCode::Shape, "strategy does not match the witness scenario");
    return makePoint(w, s, x0, y0, j.value("restart", -1));
}

}  // namespace dimwit::seesaw
