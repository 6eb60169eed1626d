#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbp/ctbp.hpp"
#include "cbp/degree_dist.hpp"
#include "cbp/discrete_pam.hpp"
#include "cbp/experiment.hpp"
#include "cbp/io.hpp"
#include "cbp/malthusian.hpp"
#include "cbp/stats.hpp"

namespace py = pybind11;
using namespace cbp;

namespace {

py::dict graph_to_dict(const Multigraph& graph) {
    py::dict out;
    out["m"] = graph.m;
    out["n_vertices"] = graph.n_vertices;
    out["n_edges"] = graph.n_edges;
    py::list edges;
    for (const auto& e : graph.edges)
        edges.append(py::make_tuple(e.source, e.target, e.multiplicity));
    out["edges"] = edges;
    out["in_degrees"] = graph.in_degrees;
    out["out_degrees"] = graph.out_degrees;
    return out;
}

py::dict dist_to_dict(const DegreeDistribution& dist) {
    py::dict out;
    out["values"] = dist.values;
    out["tail_mass"] = dist.tail_mass;
    out["provenance"] = provenance_name(dist.provenance);
    return out;
}

DegreeDistribution dist_from_args(const std::vector<double>& values, double tail_mass) {
    DegreeDistribution dist;
    dist.values = values;
    dist.tail_mass = tail_mass;
    return dist;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Collapsed branching processes: simulation, generators, and "
                "analytic degree distributions";

    py::class_<RateSequence>(mod, "RateSequence")
        .def_static("constant", &RateSequence::constant, py::arg("c"))
        .def_static("affine", &RateSequence::affine, py::arg("slope"),
                    py::arg("intercept"))
        .def_static(
            "explicit_list",
            [](std::vector<double> values, const std::string& tail, double tail_slope) {
                const auto kind = tail == "affine" ? RateSequence::Tail::Affine
                                                   : RateSequence::Tail::RepeatLast;
                return RateSequence::explicit_list(std::move(values), kind, tail_slope);
            },
            py::arg("values"), py::arg("tail") = "repeat_last",
            py::arg("tail_slope") = 0.0)
        .def("value", &RateSequence::value, py::arg("k"));

    py::class_<AgingFunction>(mod, "AgingFunction")
        .def_static("identity", &AgingFunction::identity)
        .def_static("exponential", &AgingFunction::exponential, py::arg("c"))
        .def_static(
            "tabulated",
            [](std::vector<double> t, std::vector<double> g, bool beyond_zero) {
                return AgingFunction::tabulated(std::move(t), std::move(g),
                                                beyond_zero
                                                    ? AgingFunction::Beyond::Zero
                                                    : AgingFunction::Beyond::Error);
            },
            py::arg("t"), py::arg("g"), py::arg("beyond_zero") = false)
        .def("g", &AgingFunction::g, py::arg("t"))
        .def("G", &AgingFunction::G, py::arg("t"))
        .def("G_total", &AgingFunction::G_total)
        .def("integrable", &AgingFunction::integrable);

    py::class_<BirthProcessSpec>(mod, "BirthProcessSpec")
        .def(py::init([](const RateSequence& rates, std::optional<AgingFunction> aging) {
                 BirthProcessSpec spec;
                 spec.rates = rates;
                 if (aging) spec.aging = *aging;
                 return spec;
             }),
             py::arg("rates"), py::arg("aging") = py::none());

    py::class_<BirthLog>(mod, "BirthLog")
        .def("__len__", [](const BirthLog& log) { return log.individuals.size(); })
        .def_property_readonly(
            "parents",
            [](const BirthLog& log) {
                std::vector<std::uint64_t> out;
                out.reserve(log.individuals.size());
                for (const auto& i : log.individuals) out.push_back(i.parent_id);
                return out;
            })
        .def_property_readonly(
            "birth_times",
            [](const BirthLog& log) {
                std::vector<double> out;
                out.reserve(log.individuals.size());
                for (const auto& i : log.individuals) out.push_back(i.birth_time);
                return out;
            })
        .def_property_readonly("horizon", [](const BirthLog& log) { return log.horizon; })
        .def_property_readonly("extinct", [](const BirthLog& log) { return log.extinct; })
        .def("to_csv", &birth_log_csv);

    mod.def(
        "simulate_ctbp",
        [](const BirthProcessSpec& spec, std::uint64_t seed,
           std::optional<std::uint64_t> individuals, std::optional<double> horizon) {
            if (individuals.has_value() == horizon.has_value())
                throw std::invalid_argument(
                    "give exactly one of individuals= or horizon=");
            const SimStop stop = individuals ? SimStop::max_individuals(*individuals)
                                             : SimStop::horizon(*horizon);
            return simulate_ctbp(spec, seed, stop);
        },
        py::arg("spec"), py::arg("seed"), py::arg("individuals") = py::none(),
        py::arg("horizon") = py::none());

    mod.def(
        "estimate_growth",
        [](const BirthLog& log, double alpha_star, double mu) {
            auto fit = estimate_growth(log, alpha_star, mu);
            py::dict out;
            out["alpha_hat"] = fit.alpha_hat;
            out["theta_t"] = fit.theta_t;
            out["fit_lo"] = fit.fit_lo;
            out["fit_hi"] = fit.fit_hi;
            return out;
        },
        py::arg("log"), py::arg("alpha_star"), py::arg("mu"));

    mod.def(
        "collapse",
        [](const BirthLog& log, unsigned m, std::optional<double> t) {
            return graph_to_dict(collapse(log, m, t));
        },
        py::arg("log"), py::arg("m"), py::arg("t") = py::none());

    mod.def(
        "children_count_histogram",
        [](const BirthLog& log, std::optional<double> t) {
            return t ? children_count_histogram(log, *t) : children_count_histogram(log);
        },
        py::arg("log"), py::arg("t") = py::none());

    mod.def(
        "solve_malthusian",
        [](const BirthProcessSpec& spec) {
            auto result = solve_malthusian(spec);
            py::dict out;
            out["alpha_star"] = result.alpha_star;
            out["mu"] = result.mu;
            out["supercritical"] = result.supercritical;
            out["limit_mean_progeny"] = result.limit_mean_progeny;
            out["residual"] = result.residual;
            out["closed_form_alpha_star"] =
                result.closed_form_alpha_star
                    ? py::cast(*result.closed_form_alpha_star)
                    : py::object(py::none());
            return out;
        },
        py::arg("spec"));

    mod.def(
        "check_supercritical",
        [](const BirthProcessSpec& spec) {
            auto result = check_supercritical(spec);
            py::dict out;
            out["supercritical"] = result.supercritical;
            out["limit_mean_progeny"] = result.limit_mean_progeny;
            return out;
        },
        py::arg("spec"));

    mod.def(
        "count_probabilities",
        [](const BirthProcessSpec& spec, double t, std::size_t K) {
            auto probs = count_probabilities(spec, t, K);
            py::dict out;
            out["t"] = probs.t;
            out["values"] = probs.values;
            out["tail_mass"] = probs.tail_mass;
            return out;
        },
        py::arg("spec"), py::arg("t"), py::arg("K"));

    mod.def(
        "generate_pam",
        [](unsigned m, double delta, std::uint64_t n, std::uint64_t seed) {
            return graph_to_dict(generate_pam(m, delta, n, seed));
        },
        py::arg("m"), py::arg("delta"), py::arg("n"), py::arg("seed"));

    mod.def(
        "generate_rrg",
        [](unsigned m, std::uint64_t n, std::uint64_t seed) {
            return graph_to_dict(generate_rrg(m, n, seed));
        },
        py::arg("m"), py::arg("n"), py::arg("seed"));

    mod.def(
        "generate_via_embedding",
        [](const BirthProcessSpec& spec, unsigned m, std::uint64_t n,
           std::uint64_t seed) {
            return graph_to_dict(generate_via_embedding(spec, m, n, seed));
        },
        py::arg("spec"), py::arg("m"), py::arg("n"), py::arg("seed"));

    mod.def(
        "limiting_distribution",
        [](const BirthProcessSpec& spec, unsigned m, std::size_t K) {
            return dist_to_dict(limiting_distribution(spec, m, K));
        },
        py::arg("spec"), py::arg("m"), py::arg("K"));

    mod.def(
        "pam_closed_form",
        [](unsigned m, double delta, std::size_t K) {
            return dist_to_dict(pam_closed_form(m, delta, K));
        },
        py::arg("m"), py::arg("delta"), py::arg("K"));

    mod.def(
        "rrg_closed_form",
        [](unsigned m, std::size_t K) { return dist_to_dict(rrg_closed_form(m, K)); },
        py::arg("m"), py::arg("K"));

    mod.def("default_truncation_pam", &default_truncation_pam, py::arg("m"),
            py::arg("delta"), py::arg("tail_bound") = 1e-6);
    mod.def("default_truncation_rrg", &default_truncation_rrg, py::arg("m"),
            py::arg("tail_bound") = 1e-6);

    mod.def(
        "aging_tail_report",
        [](const BirthProcessSpec& spec, unsigned m, double delta, std::size_t K,
           std::size_t k_lo, std::size_t k_hi) {
            auto report = aging_tail_report(spec, m, delta, K, k_lo, k_hi);
            py::dict out;
            out["dist"] = dist_to_dict(report.dist);
            out["C"] = report.C;
            out["k_lo"] = report.k_lo;
            out["k_hi"] = report.k_hi;
            out["r"] = report.r;
            out["shape_ratio"] = report.shape_ratio;
            out["mean_r"] = report.mean_r;
            out["rel_gap"] = report.rel_gap;
            out["trends_toward_C"] = report.trends_toward_C;
            return out;
        },
        py::arg("spec"), py::arg("m"), py::arg("delta"), py::arg("K"),
        py::arg("k_lo") = 25, py::arg("k_hi") = 50);

    mod.def(
        "empirical_distribution",
        [](const std::vector<std::uint64_t>& counts) {
            return dist_to_dict(empirical_distribution(counts));
        },
        py::arg("counts"));

    mod.def(
        "tv_distance",
        [](const std::vector<double>& empirical, const std::vector<double>& analytic,
           double analytic_tail) {
            return tv_distance(dist_from_args(empirical, 0.0),
                               dist_from_args(analytic, analytic_tail));
        },
        py::arg("empirical"), py::arg("analytic"), py::arg("analytic_tail") = 0.0);

    mod.def(
        "run_experiment",
        [](const std::string& config_json) {
            const auto config = config_from_json(nlohmann::json::parse(config_json));
            const auto report = run_experiment(config);
            return report_to_json(config, report).dump(2);
        },
        py::arg("config_json"),
        "Run a full experiment from a JSON config string; returns the report "
        "as a JSON string.");
}
