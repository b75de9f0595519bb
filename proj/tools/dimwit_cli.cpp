// dimwit: command-line front end for certification runs, sweeps, transforms,
// oracle checks, see-saw strategies and figure data.
//
// Exit codes: 0 success, 1 error, 2 infeasible / no strategy found.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dimwit/catalog.hpp"
#include "dimwit/certify.hpp"
#include "dimwit/figures.hpp"
#include "dimwit/io.hpp"
#include "dimwit/oracle.hpp"
#include "dimwit/seesaw.hpp"
#include "dimwit/transforms.hpp"

using namespace dimwit;
using nlohmann::json;

namespace {

constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

std::string errorCodeName(ErrorCode c) {
    switch (c) {
        case ErrorCode::Shape: return "shape";
        case ErrorCode::Domain: return "domain";
        case ErrorCode::Precondition: return "precondition";
        case ErrorCode::InvalidRealization: return "invalid-realization";
        case ErrorCode::Solver: return "solver";
        case ErrorCode::Parse: return "parse";
    }
    return "unknown";
}

int defaultJobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

// Flags > DIMWIT_* environment > defaults. CLI11 applies the first two.
struct Config {
    int jobs = defaultJobs();
    std::string level = "1+AB";
    std::uint64_t seed = 1;
    int restarts = 50;
    double tolerance = 1e-8;
    int maxIter = 200;
    int verbosity = 0;
    double faceMargin = 1e-7;

    json toJson() const {
        return {{"jobs", jobs},           {"level", level},           {"seed", seed},
                {"restarts", restarts},   {"tolerance", tolerance},   {"maxIter", maxIter},
                {"verbosity", verbosity}, {"faceMargin", faceMargin}};
    }
};

struct Target {
    std::string name;
    Functional payload;
    const catalog::Entry* entry = nullptr;
};

Target loadTarget(const std::string& name) {
    if (catalog::contains(name)) {
        const auto& e = catalog::get(name);
        return {name, e.payload, &e};
    }
    require(std::filesystem::exists(name), ErrorCode::Domain,
            "unknown target '" + name + "' (not a catalog name or an existing file)");
    return {name, loadFunctional(name), nullptr};
}

const DimensionWitness& asWitness(const Target& t) {
    const auto* w = std::get_if<DimensionWitness>(&t.payload);
    require(w != nullptr, ErrorCode::Precondition, t.name + " is not a dimension witness");
    return *w;
}

const BellFunctional& asBell(const Target& t) {
    const auto* f = std::get_if<BellFunctional>(&t.payload);
    require(f != nullptr, ErrorCode::Precondition, t.name + " is not a Bell functional");
    return *f;
}

double constantOf(const Functional& f) {
    return std::visit([](const auto& g) { return g.constant; }, f);
}

struct Reference {
    double value = 0.0;
    std::string provenance;
};

// Maximum that p = 1 refers to: explicit flag, catalog, see-saw for qubit
// witnesses, otherwise the relaxation maximum.
Reference referenceMax(const Target& t, const certify::Options& co, std::optional<double> flag, const Config& cfg) {
    if (flag) return {*flag, "flag"};
    if (co.mode == certify::Mode::DI) return {certify::relaxationMaximum(t.payload, co), "relaxation"};
    if (co.mode == certify::Mode::Theorem1 && t.entry && !t.entry->sMax)
        return {certify::relaxationMaximum(t.payload, co), "relaxation"};
    if (t.entry && t.entry->sMax) return {t.entry->sMax->value, catalog::provenanceName(t.entry->sMax->provenance)};
    const auto& w = asWitness(t);
    if (w.binary() && w.scenario.dim == 2) {
        seesaw::Options so;
        so.restarts = cfg.restarts;
        so.seed = cfg.seed;
        so.jobs = cfg.jobs;
        return {seesaw::maximizeWitness(w, so).achievedWitness, "see-saw"};
    }
    return {certify::relaxationMaximum(t.payload, co), "relaxation"};
}

sdp::Options solverOptions(const Config& cfg) { return {cfg.tolerance, cfg.maxIter, cfg.verbosity}; }

void writeText(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    require(static_cast<bool>(f), ErrorCode::Domain, "cannot write " + path.string());
    f << text;
}

// ---------------------------------------------------------------- certify

struct CertifyArgs {
    std::string target;
    std::string mode = "thm2";
    int dim = 2;
    std::optional<double> p;
    std::optional<double> s;
    std::optional<double> sMax;
    std::optional<int> x0;
    std::optional<int> y0;
    std::optional<std::string> level;
    int deltaGrid = 21;
    bool noRefine = false;
    bool equality = false;
    bool asJson = false;
    bool asCsv = false;
};

certify::Options certifyOptions(const CertifyArgs& a, const Target& t, const Config& cfg) {
    certify::Options co;
    co.mode = certify::parseMode(a.mode);
    co.level = npa::parseLevel(a.level.value_or(cfg.level));
    co.dim = a.dim;
    co.deltaSteps = a.deltaGrid;
    co.refineDelta = !a.noRefine;
    co.equality = a.equality;
    co.faceMargin = cfg.faceMargin;
    co.jobs = cfg.jobs;
    co.solver = solverOptions(cfg);
    co.x0 = a.x0.value_or(t.entry ? t.entry->x0 : 0);
    co.y0 = a.y0.value_or(t.entry ? t.entry->y0 : 0);
    return co;
}

void addCertifyFlags(CLI::App* c, CertifyArgs& a) {
    c->add_option("--target", a.target, "Catalog name or functional JSON file")->required();
    c->add_option("--mode", a.mode, "di | thm1 | thm2 | mixed")->capture_default_str();
    c->add_option("--dim", a.dim, "Dimension bound for thm1")->capture_default_str();
    c->add_option("--s-max", a.sMax, "Reference maximum for --p (default: catalog, see-saw or relaxation)");
    c->add_option("--x0", a.x0, "Target preparation / Alice setting (0-indexed)");
    c->add_option("--y0", a.y0, "Target measurement (0-indexed)");
    c->add_option("--level", a.level, "NPA level: 1 | 1+AB | 2 | 3");
    c->add_option("--delta-grid", a.deltaGrid, "Uniform delta grid size for mixed mode")->capture_default_str();
    c->add_flag("--no-refine", a.noRefine, "Skip golden-section refinement of delta");
    c->add_flag("--equality", a.equality, "Constrain witness = s instead of >= s");
}

int runCertify(const CertifyArgs& a, const Config& cfg) {
    const Target t = loadTarget(a.target);
    const auto co = certifyOptions(a, t, cfg);
    double s = 0.0;
    json ref;
    if (a.s) {
        s = *a.s;
    } else {
        const Reference r = referenceMax(t, co, a.sMax, cfg);
        s = certify::valueAtFraction(*a.p, r.value, constantOf(t.payload));
        ref = {{"p", *a.p}, {"sMax", r.value}, {"provenance", r.provenance}};
    }
    const certify::Result r = certify::certify(t.payload, s, co);
    if (a.asJson) {
        json j = certify::toJson(r);
        j["target"] = t.name;
        if (!ref.is_null()) j["reference"] = ref;
        std::cout << j.dump(2) << '\n';
    } else if (a.asCsv) {
        certify::writeCsvHeader(std::cout);
        certify::writeCsvRow(std::cout, a.p.value_or(NAN), r);
    } else {
        std::cout << "target      " << t.name << "\nmode        " << certify::modeName(r.mode) << "\nlevel       "
                  << npa::levelName(r.level) << "\ns           " << r.s << "\nstatus      " << r.status()
                  << "\np_guess     " << r.pGuessBound << "\nh_min       " << r.minEntropyBound << '\n';
        if (r.minEntropyMinusLog2d) std::cout << "di-log2d    " << *r.minEntropyMinusLog2d << '\n';
        if (r.bestDelta) std::cout << "best_delta  " << *r.bestDelta << '\n';
        for (const auto& n : r.notes) std::cout << "note        " << n << '\n';
    }
    return r.attainable ? 0 : kExitInfeasible;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
    CertifyArgs c;
    double pMin = 0.8;
    double pMax = 1.0;
    int steps = 21;
    std::string out;
    bool critical = false;
};

int runSweep(const SweepArgs& a, const Config& cfg) {
    const Target t = loadTarget(a.c.target);
    const auto co = certifyOptions(a.c, t, cfg);
    const Reference ref = referenceMax(t, co, a.c.sMax, cfg);
    const auto ps = certify::linspace(a.pMin, a.pMax, a.steps);
    certify::Sweep sw = certify::sweep(t.payload, ref.value, ps, co);
    if (a.critical) {
        auto inner = co;
        inner.jobs = 1;
        sw.criticalP = certify::criticalP(t.payload, ref.value, a.pMin, a.pMax, inner);
    }

    std::ostringstream csv;
    certify::writeCsv(csv, sw);
    const std::filesystem::path out(a.out);
    writeText(out, csv.str());
    json j = certify::toJson(sw);
    j["target"] = t.name;
    j["reference"] = {{"sMax", ref.value}, {"provenance", ref.provenance}};
    std::filesystem::path jsonPath = out;
    writeText(jsonPath.replace_extension(".json"), j.dump(2) + "\n");

    figures::Panel panel{out.stem().string(), t.name + " (" + certify::modeName(co.mode) + ")", {}};
    chart::Series h{"h_min", ps, {}};
    for (const auto& pt : sw.points) h.y.push_back(pt.result.minEntropyBound);
    panel.series.push_back(h);
    std::ostringstream dat;
    dat.precision(12);
    dat << "# p h_min p_guess\n";
    for (const auto& pt : sw.points) dat << pt.p << ' ' << pt.result.minEntropyBound << ' ' << pt.result.pGuessBound << '\n';
    std::filesystem::path datPath = out;
    writeText(datPath.replace_extension(".dat"), dat.str());
    std::ostringstream svg;
    figures::writeSvg(svg, panel);
    std::filesystem::path svgPath = out;
    writeText(svgPath.replace_extension(".svg"), svg.str());

    std::cout << "wrote " << out.string() << " (" << sw.points.size() << " points)";
    if (sw.criticalP) std::cout << ", critical p " << *sw.criticalP;
    std::cout << '\n';
    return 0;
}

// ---------------------------------------------------------------- figure

struct FigureArgs {
    std::vector<int> numbers{1, 2, 3, 4, 5};
    std::string outDir = "figures";
    double pMin = 0.8;
    double pMax = 1.0;
    int steps = 21;
    std::optional<std::string> level;
};

int runFigure(const FigureArgs& a, const Config& cfg) {
    figures::Options fo;
    fo.ps = certify::linspace(a.pMin, a.pMax, a.steps);
    fo.level = npa::parseLevel(a.level.value_or(cfg.level));
    fo.jobs = cfg.jobs;
    fo.seed = cfg.seed;
    fo.seesawRestarts = std::min(cfg.restarts, 20);
    for (int n : a.numbers) {
        for (const auto& p : figures::figure(n, fo)) {
            figures::writePanelFiles(a.outDir, p);
            std::cout << "wrote " << (std::filesystem::path(a.outDir) / (p.id + ".csv")).string() << '\n';
        }
    }
    return 0;
}

// ---------------------------------------------------------------- transform

struct TransformArgs {
    std::string target;
    std::string out;
    std::string order = "outcome-major";
    std::vector<double> marginals;  // P(a|x), a-major; empty = uniform
    int dim = 2;
    int y0 = 0;
    double delta = 1.0;
    int theorem = 2;
    std::vector<int> phi;
    std::vector<int> half;
};

void emit(const TransformArgs& a, const Functional& f) {
    const json j = toJson(f);
    if (a.out.empty() || a.out == "-") std::cout << j.dump(2) << '\n';
    else saveFunctional(a.out, f);
}

int runTransform(const std::string& which, const TransformArgs& a) {
    const Target t = loadTarget(a.target);
    if (which == "bell-to-witness") {
        const auto& f = asBell(t);
        Eigen::MatrixXd pA = uniformMarginals(f.scenario);
        if (!a.marginals.empty()) {
            require(static_cast<Eigen::Index>(a.marginals.size()) == pA.size(), ErrorCode::Shape,
                    "--marginals needs |A|*|X| values");
            for (int i = 0; i < pA.rows(); ++i)
                for (int x = 0; x < pA.cols(); ++x) pA(i, x) = a.marginals[static_cast<std::size_t>(i * pA.cols() + x)];
        }
        require(a.order == "outcome-major" || a.order == "setting-major", ErrorCode::Domain,
                "--order must be outcome-major or setting-major");
        const auto order = a.order == "setting-major" ? LabelOrder::SettingMajor : LabelOrder::OutcomeMajor;
        emit(a, bellToWitness(f, pA, a.dim, order).witness);
    } else if (which == "reduce") {
        const auto& w = asWitness(t);
        SymmetryMap phi;
        std::vector<int> half = a.half;
        if (!a.phi.empty()) {
            phi.phi = a.phi;
        } else {
            require(t.entry && t.entry->symmetry, ErrorCode::Precondition,
                    "reduce needs --phi/--half or a catalog entry with a symmetry map");
            phi = *t.entry->symmetry;
            if (half.empty()) half = t.entry->half;
        }
        require(!half.empty(), ErrorCode::Precondition, "reduce needs --half");
        emit(a, reduceSymmetric(w, phi, half).witness);
    } else if (which == "delta-scale") {
        emit(a, deltaScale(asWitness(t), a.y0, a.delta));
    } else if (which == "to-functional") {
        const auto& w = asWitness(t);
        require(a.theorem == 1 || a.theorem == 2, ErrorCode::Domain, "--theorem must be 1 or 2");
        if (a.theorem == 1) emit(a, witnessToTheorem1Functional(w, a.dim).functional);
        else emit(a, witnessToTheorem2Functional(w).functional);
    } else {
        fail(ErrorCode::Domain, "unknown transform " + which);
    }
    return 0;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
    std::string target;
    double resolution = 1.0;
    bool constantOutcomes = false;
    bool allDecoders = false;
    int samples = 100;
    int preparations = 3;
    int settings = 2;
    std::optional<std::string> level;
};

int runOracle(const std::string& which, const OracleArgs& a, const Config& cfg) {
    json j;
    if (which == "classical-bound") {
        const Target t = loadTarget(a.target);
        if (std::holds_alternative<BellFunctional>(t.payload)) {
            j = oracle::toJson(oracle::classicalBound(asBell(t), cfg.jobs));
        } else {
            j = oracle::toJson(oracle::classicalWitnessBound(asWitness(t), cfg.jobs, !a.allDecoders));
            j["traceOneDecoders"] = !a.allDecoders;
        }
        j["target"] = t.name;
    } else if (which == "grid-max") {
        const Target t = loadTarget(a.target);
        j = oracle::toJson(oracle::gridWitnessMax(asWitness(t), a.resolution, cfg.jobs, a.constantOutcomes));
        j["target"] = t.name;
        j["resolutionDegrees"] = a.resolution;
    } else if (which == "verify-inclusion") {
        oracle::InclusionOptions o;
        o.samples = a.samples;
        o.seed = cfg.seed;
        o.preparations = a.preparations;
        o.settings = a.settings;
        o.level = npa::parseLevel(a.level.value_or("2"));
        o.jobs = cfg.jobs;
        j = oracle::toJson(oracle::verifyInclusion(o));
    } else {
        fail(ErrorCode::Domain, "unknown oracle " + which);
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------- seesaw

struct SeesawArgs {
    std::string target;
    std::optional<double> s;
    std::optional<double> p;
    std::optional<int> x0;
    std::optional<int> y0;
    std::string out;
};

int runSeesaw(const std::string& which, const SeesawArgs& a, const Config& cfg) {
    const Target t = loadTarget(a.target);
    const auto& w = asWitness(t);
    seesaw::Options so;
    so.restarts = cfg.restarts;
    so.seed = cfg.seed;
    so.jobs = cfg.jobs;
    seesaw::StrategyPoint pt;
    json j;
    if (which == "max-witness") {
        pt = seesaw::maximizeWitness(w, so);
        j = seesaw::toJson(pt);
    } else {
        double floor = 0.0;
        if (a.s) {
            floor = *a.s;
        } else {
            require(a.p.has_value(), ErrorCode::Domain, "max-guessing needs --s or --p");
            const double sMax = t.entry && t.entry->sMax ? t.entry->sMax->value
                                                         : seesaw::maximizeWitness(w, so).achievedWitness;
            floor = std::min(certify::valueAtFraction(*a.p, sMax, w.constant), sMax - cfg.faceMargin * (1 + std::abs(sMax)));
        }
        const int x0 = a.x0.value_or(t.entry ? t.entry->x0 : 0);
        const int y0 = a.y0.value_or(t.entry ? t.entry->y0 : 0);
        pt = seesaw::maximizeGuessing(w, x0, y0, floor, so);
        j = seesaw::toJson(pt);
        j["sFloor"] = floor;
        if (pt.found) j["minEntropy"] = minEntropy(pt.guessingProb);
        else j["result"] = "no strategy found";
    }
    j["target"] = t.name;
    if (!a.out.empty()) writeText(a.out, j.dump(2) + "\n");
    std::cout << j.dump(2) << '\n';
    return pt.found ? 0 : kExitInfeasible;
}

// ---------------------------------------------------------------- sdp

struct SdpArgs {
    std::string input;
    CertifyArgs c;
    std::optional<double> s;
    std::string out;
};

int runSdpSolve(const SdpArgs& a, const Config& cfg) {
    std::ifstream in(a.input);
    require(static_cast<bool>(in), ErrorCode::Domain, "cannot read " + a.input);
    const sdp::Problem p = sdp::readSparse(in);
    const sdp::Solution s = sdp::solve(p, solverOptions(cfg));
    std::cout << json{{"status", sdp::statusName(s.status)}, {"primalObj", s.primalObj},
                      {"dualObj", s.dualObj},     {"relativeGap", s.relativeGap},
                      {"primalResidual", s.primalResidual}, {"dualResidual", s.dualResidual},
                      {"iterations", s.iterations}}
                     .dump(2)
              << '\n';
    return s.status == sdp::Status::Optimal ? 0 : kExitInfeasible;
}

// Writes the moment problem for the guessing objective (branch b = 0, a = 0)
// under the witness constraint, in the sparse text format.
int runSdpExport(const SdpArgs& a, const Config& cfg) {
    const Target t = loadTarget(a.c.target);
    const auto co = certifyOptions(a.c, t, cfg);
    BellFunctional f;
    npa::GuessMode gm = npa::GuessMode::DI;
    int d = 2;
    if (co.mode == certify::Mode::DI) {
        f = asBell(t);
    } else if (co.mode == certify::Mode::Theorem1) {
        f = witnessToTheorem1Functional(asWitness(t), co.dim).functional;
        gm = npa::GuessMode::Theorem1;
        d = co.dim;
    } else {
        f = witnessToTheorem2Functional(asWitness(t)).functional;
        gm = npa::GuessMode::Theorem2;
    }
    npa::MomentProblem mp = npa::buildMomentProblem(f.scenario, co.level);
    if (co.mode == certify::Mode::Theorem1) npa::addTheorem1Marginals(mp, d);
    if (gm == npa::GuessMode::Theorem2) npa::addSymmetryConstraints(mp);
    if (a.s) npa::addWitnessValueConstraint(mp, f, *a.s);
    npa::setGuessingObjective(mp, gm, 0, 0, co.x0, co.y0, d);
    std::ostringstream text;
    npa::writeSparse(text, mp);
    if (a.out.empty() || a.out == "-") std::cout << text.str();
    else writeText(a.out, text.str());
    return 0;
}

// ---------------------------------------------------------------- catalog

int runCatalog(const std::string& which, const std::string& name, bool asJson) {
    if (which == "list") {
        for (const auto& n : catalog::list()) {
            const auto& e = catalog::get(n);
            std::cout << n << '\t' << catalog::kindName(e.kind);
            if (e.sMax) std::cout << "\tsMax=" << e.sMax->value << " (" << catalog::provenanceName(e.sMax->provenance) << ')';
            std::cout << '\n';
        }
        return 0;
    }
    const auto& e = catalog::get(name);
    if (asJson) {
        std::cout << catalog::toJson(e).dump(2) << '\n';
        return 0;
    }
    json j = catalog::toJson(e);
    j.erase("payload");
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dimwit: randomness certification from dimension witnesses and Bell functionals"};
    app.require_subcommand(1);
    Config cfg;
    bool showConfig = false;
    app.add_option("--jobs", cfg.jobs, "Worker threads (default: logical cores)")->envname("DIMWIT_JOBS");
    app.add_option("--default-level", cfg.level, "Default NPA level")->envname("DIMWIT_LEVEL")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Seed for randomised searches")->envname("DIMWIT_SEED")->capture_default_str();
    app.add_option("--restarts", cfg.restarts, "See-saw restarts")->envname("DIMWIT_RESTARTS")->capture_default_str();
    app.add_option("--tolerance", cfg.tolerance, "SDP tolerance")->envname("DIMWIT_TOLERANCE")->capture_default_str();
    app.add_option("--max-iter", cfg.maxIter, "SDP iteration limit")->envname("DIMWIT_MAX_ITER")->capture_default_str();
    app.add_option("--face-margin", cfg.faceMargin, "Relative clamp below the witness maximum")
        ->envname("DIMWIT_FACE_MARGIN")
        ->capture_default_str();
    app.add_option("-v,--verbosity", cfg.verbosity, "Solver log level (0-2)")->envname("DIMWIT_VERBOSITY");
    app.add_flag("--show-config", showConfig, "Print the effective configuration and exit");
    app.allow_extras(false);
    app.fallthrough();

    CertifyArgs certifyArgs;
    auto* certifyCmd = app.add_subcommand("certify", "Bound the guessing probability at one witness value");
    addCertifyFlags(certifyCmd, certifyArgs);
    auto* pOpt = certifyCmd->add_option("--p", certifyArgs.p, "Fraction of the reference maximum");
    auto* sOpt = certifyCmd->add_option("--s", certifyArgs.s, "Absolute witness value");
    pOpt->excludes(sOpt);
    certifyCmd->add_flag("--json", certifyArgs.asJson, "JSON output");
    certifyCmd->add_flag("--csv", certifyArgs.asCsv, "CSV output");

    SweepArgs sweepArgs;
    auto* sweepCmd = app.add_subcommand("sweep", "Certify over a p grid; writes CSV, JSON, gnuplot data and SVG");
    addCertifyFlags(sweepCmd, sweepArgs.c);
    sweepCmd->add_option("--p-min", sweepArgs.pMin)->capture_default_str();
    sweepCmd->add_option("--p-max", sweepArgs.pMax)->capture_default_str();
    sweepCmd->add_option("--steps", sweepArgs.steps)->capture_default_str();
    sweepCmd->add_option("--out", sweepArgs.out, "CSV path; siblings get .json/.dat/.svg")->required();
    sweepCmd->add_flag("--critical", sweepArgs.critical, "Bisect for the smallest p with positive entropy");

    FigureArgs figureArgs;
    auto* figureCmd = app.add_subcommand("figure", "Plot data for figure panels 1-5");
    figureCmd->add_option("numbers", figureArgs.numbers, "Figure numbers (default: all)");
    figureCmd->add_option("--out", figureArgs.outDir)->capture_default_str();
    figureCmd->add_option("--p-min", figureArgs.pMin)->capture_default_str();
    figureCmd->add_option("--p-max", figureArgs.pMax)->capture_default_str();
    figureCmd->add_option("--steps", figureArgs.steps)->capture_default_str();
    figureCmd->add_option("--level", figureArgs.level);

    TransformArgs transformArgs;
    std::string transformWhich;
    auto* transformCmd = app.add_subcommand("transform", "Bell/witness transforms (file or catalog in, JSON out)");
    transformCmd->add_option("which", transformWhich, "bell-to-witness | reduce | delta-scale | to-functional")
        ->required()
        ->check(CLI::IsMember({"bell-to-witness", "reduce", "delta-scale", "to-functional"}));
    transformCmd->add_option("--target", transformArgs.target)->required();
    transformCmd->add_option("--out", transformArgs.out, "Output file (default: stdout)");
    transformCmd->add_option("--order", transformArgs.order, "outcome-major | setting-major")->capture_default_str();
    transformCmd->add_option("--marginals", transformArgs.marginals, "P(a|x) values, a-major");
    transformCmd->add_option("--dim", transformArgs.dim)->capture_default_str();
    transformCmd->add_option("--y0", transformArgs.y0)->capture_default_str();
    transformCmd->add_option("--delta", transformArgs.delta)->capture_default_str();
    transformCmd->add_option("--theorem", transformArgs.theorem)->capture_default_str();
    transformCmd->add_option("--phi", transformArgs.phi, "Preparation permutation");
    transformCmd->add_option("--half", transformArgs.half, "One preparation per orbit");

    OracleArgs oracleArgs;
    std::string oracleWhich;
    auto* oracleCmd = app.add_subcommand("oracle", "Brute-force checks");
    oracleCmd->add_option("which", oracleWhich, "classical-bound | grid-max | verify-inclusion")
        ->required()
        ->check(CLI::IsMember({"classical-bound", "grid-max", "verify-inclusion"}));
    oracleCmd->add_option("--target", oracleArgs.target);
    oracleCmd->add_option("--resolution", oracleArgs.resolution, "Grid spacing in degrees")->capture_default_str();
    oracleCmd->add_flag("--constant-outcomes", oracleArgs.constantOutcomes, "Allow constant-outcome settings");
    oracleCmd->add_flag("--all-decoders", oracleArgs.allDecoders, "Allow every classical decoder");
    oracleCmd->add_option("--samples", oracleArgs.samples)->capture_default_str();
    oracleCmd->add_option("--preparations", oracleArgs.preparations)->capture_default_str();
    oracleCmd->add_option("--settings", oracleArgs.settings)->capture_default_str();
    oracleCmd->add_option("--level", oracleArgs.level);

    SeesawArgs seesawArgs;
    std::string seesawWhich;
    auto* seesawCmd = app.add_subcommand("seesaw", "Explicit qubit strategies");
    seesawCmd->add_option("which", seesawWhich, "max-witness | max-guessing")
        ->required()
        ->check(CLI::IsMember({"max-witness", "max-guessing"}));
    seesawCmd->add_option("--target", seesawArgs.target)->required();
    seesawCmd->add_option("--s", seesawArgs.s, "Witness floor");
    seesawCmd->add_option("--p", seesawArgs.p, "Floor as a fraction of the maximum");
    seesawCmd->add_option("--x0", seesawArgs.x0);
    seesawCmd->add_option("--y0", seesawArgs.y0);
    seesawCmd->add_option("--out", seesawArgs.out, "Also write the strategy JSON here");

    SdpArgs sdpArgs;
    std::string sdpWhich;
    auto* sdpCmd = app.add_subcommand("sdp", "Sparse-format SDP solve and export");
    sdpCmd->add_option("which", sdpWhich, "solve | export")->required()->check(CLI::IsMember({"solve", "export"}));
    sdpCmd->add_option("--in", sdpArgs.input, "Sparse SDP file (solve)");
    sdpCmd->add_option("--target", sdpArgs.c.target, "Functional (export)");
    sdpCmd->add_option("--mode", sdpArgs.c.mode)->capture_default_str();
    sdpCmd->add_option("--dim", sdpArgs.c.dim)->capture_default_str();
    sdpCmd->add_option("--level", sdpArgs.c.level);
    sdpCmd->add_option("--x0", sdpArgs.c.x0);
    sdpCmd->add_option("--y0", sdpArgs.c.y0);
    sdpCmd->add_option("--s", sdpArgs.s, "Witness constraint value (export)");
    sdpCmd->add_option("--out", sdpArgs.out, "Output file (default: stdout)");

    std::string catalogWhich, catalogName;
    bool catalogJson = false;
    auto* catalogCmd = app.add_subcommand("catalog", "Built-in functionals");
    catalogCmd->add_option("which", catalogWhich, "list | show")->required()->check(CLI::IsMember({"list", "show"}));
    catalogCmd->add_option("name", catalogName);
    catalogCmd->add_flag("--json", catalogJson, "Include the coefficient payload");

    // --show-config works without a subcommand.
    app.require_subcommand(0, 1);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitError;
    }
    if (showConfig) {
        std::cout << cfg.toJson().dump(2) << '\n';
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return kExitError;
    }

    try {
        if (certifyCmd->parsed()) {
            require(certifyArgs.p || certifyArgs.s, ErrorCode::Domain, "certify needs --p or --s");
            return runCertify(certifyArgs, cfg);
        }
        if (sweepCmd->parsed()) return runSweep(sweepArgs, cfg);
        if (figureCmd->parsed()) return runFigure(figureArgs, cfg);
        if (transformCmd->parsed()) return runTransform(transformWhich, transformArgs);
        if (oracleCmd->parsed()) {
            require(oracleWhich == "verify-inclusion" || !oracleArgs.target.empty(), ErrorCode::Domain,
                    oracleWhich + " needs --target");
            return runOracle(oracleWhich, oracleArgs, cfg);
        }
        if (seesawCmd->parsed()) return runSeesaw(seesawWhich, seesawArgs, cfg);
        if (sdpCmd->parsed()) {
            if (sdpWhich == "solve") {
                require(!sdpArgs.input.empty(), ErrorCode::Domain, "sdp solve needs --in");
                return runSdpSolve(sdpArgs, cfg);
            }
            require(!sdpArgs.c.target.empty(), ErrorCode::Domain, "sdp export needs --target");
            return runSdpExport(sdpArgs, cfg);
        }
        if (catalogCmd->parsed()) {
            require(catalogWhich == "list" || !catalogName.empty(), ErrorCode::Domain, "catalog show needs a name");
            return runCatalog(catalogWhich, catalogName, catalogJson);
        }
    } catch (const Error& e) {
        std::cerr << "error [" << errorCodeName(e.code()) << "]: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return 0;
}
