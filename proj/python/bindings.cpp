// Thin pybind11 layer. Functionals travel as catalog names, file paths or
// JSON text; results come back as JSON text that dimwit/__init__.py decodes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <sstream>

#include "dimwit/catalog.hpp"
#include "dimwit/certify.hpp"
#include "dimwit/figures.hpp"
#include "dimwit/oracle.hpp"
#include "dimwit/seesaw.hpp"
#include "dimwit/transforms.hpp"

namespace py = pybind11;
using namespace dimwit;
using nlohmann::json;

namespace {

struct Target {
    Functional payload;
    const catalog::Entry* entry = nullptr;
};

// JSON text (leading '{'), catalog name, or path to a JSON file.
Target resolve(const std::string& spec) {
    if (!spec.empty() && spec.front() == '{') {
        json j;
        try {
            j = json::parse(spec);
        } catch (const json::exception& e) {
            fail(ErrorCode::Parse, std::string("functional JSON: ") + e.what());
        }
        return {functionalFromJson(j), nullptr};
    }
    if (catalog::contains(spec)) {
        const auto& e = catalog::get(spec);
        return {e.payload, &e};
    }
    require(std::filesystem::exists(spec), ErrorCode::Domain, "unknown target '" + spec + "'");
    return {loadFunctional(spec), nullptr};
}

const DimensionWitness& asWitness(const Target& t) {
    const auto* w = std::get_if<DimensionWitness>(&t.payload);
    require(w != nullptr, ErrorCode::Precondition, "target is not a dimension witness");
    return *w;
}

certify::Options options(const Target& t, const std::string& mode, const std::string& level, int dim,
                         std::optional<int> x0, std::optional<int> y0, int jobs) {
    certify::Options o;
    o.mode = certify::parseMode(mode);
    o.level = npa::parseLevel(level);
    o.dim = dim;
    o.jobs = jobs;
    o.x0 = x0.value_or(t.entry ? t.entry->x0 : 0);
    o.y0 = y0.value_or(t.entry ? t.entry->y0 : 0);
    return o;
}

double constantOf(const Functional& f) {
    return std::visit([](const auto& g) { return g.constant; }, f);
}

// Reference maximum for relative parameters: explicit, catalog, else relaxation.
double referenceMax(const Target& t, const certify::Options& o, std::optional<double> sMax) {
    if (sMax) return *sMax;
    if (o.mode != certify::Mode::DI && t.entry && t.entry->sMax) return t.entry->sMax->value;
    return certify::relaxationMaximum(t.payload, o);
}

std::string certifyJson(const std::string& target, std::optional<double> s, std::optional<double> p,
                        const std::string& mode, const std::string& level, int dim, std::optional<int> x0,
                        std::optional<int> y0, std::optional<double> sMax, int jobs) {
    require(s.has_value() != p.has_value(), ErrorCode::Domain, "give exactly one of s and p");
    const Target t = resolve(target);
    const auto o = options(t, mode, level, dim, x0, y0, jobs);
    const double value = s ? *s : certify::valueAtFraction(*p, referenceMax(t, o, sMax), constantOf(t.payload));
    return certify::toJson(certify::certify(t.payload, value, o)).dump();
}

std::string sweepJson(const std::string& target, double pMin, double pMax, int steps, const std::string& mode,
                      const std::string& level, int dim, std::optional<int> x0, std::optional<int> y0,
                      std::optional<double> sMax, int jobs) {
    const Target t = resolve(target);
    const auto o = options(t, mode, level, dim, x0, y0, jobs);
    return certify::toJson(certify::sweep(t.payload, referenceMax(t, o, sMax), certify::linspace(pMin, pMax, steps), o))
        .dump();
}

json panelJson(const figures::Panel& p) {
    json series = json::array();
    for (const auto& s : p.series) {
        json ys = json::array();
        for (double y : s.y) ys.push_back(std::isnan(y) ? json(nullptr) : json(y));
        series.push_back({{"label", s.label}, {"x", s.x}, {"y", ys}});
    }
    return {{"id", p.id}, {"title", p.title}, {"series", series}};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "dimwit native core";
    static py::exception<Error> errorType(m, "DimwitError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            errorType(e.what());
        }
    });

    m.def("catalog_list", &catalog::list);
    m.def("catalog_entry", [](const std::string& name) {
        const auto& e = catalog::get(name);
        json j = catalog::toJson(e);
        j["payload"] = toJson(e.payload);
        return j.dump();
    });
    m.def("functional", [](const std::string& target) { return toJson(resolve(target).payload).dump(); });

    m.def("certify", &certifyJson, py::arg("target"), py::arg("s") = py::none(), py::arg("p") = py::none(),
          py::arg("mode") = "thm2", py::arg("level") = "1+AB", py::arg("dim") = 2, py::arg("x0") = py::none(),
          py::arg("y0") = py::none(), py::arg("s_max") = py::none(), py::arg("jobs") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("sweep", &sweepJson, py::arg("target"), py::arg("p_min") = 0.8, py::arg("p_max") = 1.0,
          py::arg("steps") = 21, py::arg("mode") = "thm2", py::arg("level") = "1+AB", py::arg("dim") = 2,
          py::arg("x0") = py::none(), py::arg("y0") = py::none(), py::arg("s_max") = py::none(), py::arg("jobs") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "relaxation_maximum",
        [](const std::string& target, const std::string& mode, const std::string& level, int dim) {
            const Target t = resolve(target);
            return certify::relaxationMaximum(t.payload, options(t, mode, level, dim, {}, {}, 1));
        },
        py::arg("target"), py::arg("mode") = "thm2", py::arg("level") = "1+AB", py::arg("dim") = 2,
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "classical_bound",
        [](const std::string& target, int jobs, bool traceOne) {
            const Target t = resolve(target);
            if (const auto* f = std::get_if<BellFunctional>(&t.payload))
                return oracle::toJson(oracle::classicalBound(*f, jobs)).dump();
            return oracle::toJson(oracle::classicalWitnessBound(asWitness(t), jobs, traceOne)).dump();
        },
        py::arg("target"), py::arg("jobs") = 1, py::arg("trace_one") = true,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "grid_max",
        [](const std::string& target, double resolution, int jobs) {
            return oracle::toJson(oracle::gridWitnessMax(asWitness(resolve(target)), resolution, jobs)).dump();
        },
        py::arg("target"), py::arg("resolution") = 1.0, py::arg("jobs") = 1,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "verify_inclusion",
        [](int samples, std::uint64_t seed, const std::string& level) {
            oracle::InclusionOptions o;
            o.samples = samples;
            o.seed = seed;
            o.level = npa::parseLevel(level);
            return oracle::toJson(oracle::verifyInclusion(o)).dump();
        },
        py::arg("samples") = 100, py::arg("seed") = 1, py::arg("level") = "2",
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "seesaw_max_witness",
        [](const std::string& target, int restarts, std::uint64_t seed) {
            seesaw::Options o;
            o.restarts = restarts;
            o.seed = seed;
            return seesaw::toJson(seesaw::maximizeWitness(asWitness(resolve(target)), o)).dump();
        },
        py::arg("target"), py::arg("restarts") = 50, py::arg("seed") = 1,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "seesaw_max_guessing",
        [](const std::string& target, double sFloor, std::optional<int> x0, std::optional<int> y0, int restarts,
           std::uint64_t seed) {
            const Target t = resolve(target);
            seesaw::Options o;
            o.restarts = restarts;
            o.seed = seed;
            return seesaw::toJson(seesaw::maximizeGuessing(asWitness(t), x0.value_or(t.entry ? t.entry->x0 : 0),
                                                           y0.value_or(t.entry ? t.entry->y0 : 0), sFloor, o))
                .dump();
        },
        py::arg("target"), py::arg("s_floor"), py::arg("x0") = py::none(), py::arg("y0") = py::none(),
        py::arg("restarts") = 50, py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());

    m.def("bell_to_witness", [](const std::string& target, int dim) {
        const Target t = resolve(target);
        const auto* f = std::get_if<BellFunctional>(&t.payload);
        require(f != nullptr, ErrorCode::Precondition, "target is not a Bell functional");
        return toJson(bellToWitness(*f, uniformMarginals(f->scenario), dim).witness).dump();
    }, py::arg("target"), py::arg("dim") = 2);
    m.def("reduce", [](const std::string& name) {
        const auto& e = catalog::get(name);
        require(e.symmetry.has_value(), ErrorCode::Precondition, name + " has no symmetry map");
        return toJson(reduceSymmetric(e.witness(), *e.symmetry, e.half).witness).dump();
    });
    m.def("theorem2_functional", [](const std::string& target) {
        return toJson(witnessToTheorem2Functional(asWitness(resolve(target))).functional).dump();
    });
    m.def("theorem1_functional", [](const std::string& target, int dim) {
        return toJson(witnessToTheorem1Functional(asWitness(resolve(target)), dim).functional).dump();
    }, py::arg("target"), py::arg("dim") = 2);

    m.def(
        "figure",
        [](int n, std::vector<double> ps, const std::string& level, int jobs) {
            figures::Options o;
            if (!ps.empty()) o.ps = std::move(ps);
            o.level = npa::parseLevel(level);
            o.jobs = jobs;
            json out = json::array();
            for (const auto& p : figures::figure(n, o)) out.push_back(panelJson(p));
            return out.dump();
        },
        py::arg("n"), py::arg("ps") = std::vector<double>{}, py::arg("level") = "1+AB", py::arg("jobs") = 1,
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "solve_sparse",
        [](const std::string& text) {
            std::istringstream in(text);
            const auto s = sdp::solve(sdp::readSparse(in));
            return json{{"status", sdp::statusName(s.status)},
                        {"primalObj", s.primalObj},
                        {"dualObj", s.dualObj},
                        {"relativeGap", s.relativeGap},
                        {"iterations", s.iterations}}
                .dump();
        },
        py::call_guard<py::gil_scoped_release>());
    m.def("min_entropy", &minEntropy);
}
