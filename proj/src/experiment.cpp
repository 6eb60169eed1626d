#include "cbp/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "cbp/io.hpp"
#include "cbp/malthusian.hpp"
#include "cbp/stats.hpp"

namespace cbp {

namespace {

std::string tail_name(RateSequence::Tail t) {
    return t == RateSequence::Tail::RepeatLast ? "repeat_last" : "affine";
}

std::string beyond_name(AgingFunction::Beyond b) {
    return b == AgingFunction::Beyond::Error ? "error" : "zero";
}

}  // namespace

nlohmann::json rates_to_json(const RateSequence& rates) {
    nlohmann::json j;
    switch (rates.kind()) {
        case RateSequence::Kind::Constant:
            j["kind"] = "constant";
            j["c"] = rates.intercept();
            break;
        case RateSequence::Kind::Affine:
            j["kind"] = "affine";
            j["slope"] = rates.slope();
            j["intercept"] = rates.intercept();
            break;
        case RateSequence::Kind::Explicit:
            j["kind"] = "explicit";
            j["values"] = rates.values();
            j["tail"] = tail_name(rates.tail());
            if (rates.tail() == RateSequence::Tail::Affine)
                j["tail_slope"] = rates.tail_slope();
            break;
    }
    return j;
}

RateSequence rates_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind");
    if (kind == "constant") return RateSequence::constant(j.at("c"));
    if (kind == "affine")
        return RateSequence::affine(j.at("slope"), j.at("intercept"));
    if (kind == "explicit") {
        const std::vector<double> values = j.at("values");
        const std::string tail = j.value("tail", "repeat_last");
        if (tail == "repeat_last")
            return RateSequence::explicit_list(values,
                                               RateSequence::Tail::RepeatLast);
        if (tail == "affine")
            return RateSequence::explicit_list(values, RateSequence::Tail::Affine,
                                               j.at("tail_slope"));
        throw std::invalid_argument("unknown rate tail: " + tail);
    }
    throw std::invalid_argument("unknown rate kind: " + kind);
}

nlohmann::json aging_to_json(const AgingFunction& aging) {
    nlohmann::json j;
    switch (aging.kind()) {
        case AgingFunction::Kind::Identity:
            j["kind"] = "identity";
            break;
        case AgingFunction::Kind::Exponential:
            j["kind"] = "exponential";
            j["c"] = aging.param_c();
            break;
        case AgingFunction::Kind::Tabulated:
            j["kind"] = "tabulated";
            j["t"] = aging.grid_t();
            j["g"] = aging.grid_g();
            j["beyond"] = beyond_name(aging.beyond());
            break;
    }
    return j;
}

AgingFunction aging_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind");
    if (kind == "identity") return AgingFunction::identity();
    if (kind == "exponential") return AgingFunction::exponential(j.at("c"));
    if (kind == "tabulated") {
        const std::string beyond = j.value("beyond", "error");
        if (beyond != "error" && beyond != "zero")
            throw std::invalid_argument("unknown aging beyond rule: " + beyond);
        return AgingFunction::tabulated(j.at("t"), j.at("g"),
                                        beyond == "error"
                                            ? AgingFunction::Beyond::Error
                                            : AgingFunction::Beyond::Zero);
    }
    throw std::invalid_argument("unknown aging kind: " + kind);
}

nlohmann::json spec_to_json(const BirthProcessSpec& spec) {
    return {{"rates", rates_to_json(spec.rates)},
            {"aging", aging_to_json(spec.aging)}};
}

BirthProcessSpec spec_from_json(const nlohmann::json& j) {
    BirthProcessSpec spec;
    spec.rates = rates_from_json(j.at("rates"));
    if (j.contains("aging")) spec.aging = aging_from_json(j.at("aging"));
    return spec;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
    nlohmann::json model;
    switch (config.model.kind) {
        case ModelConfig::Kind::Pam:
            model["kind"] = "pam";
            model["m"] = config.model.m;
            model["delta"] = config.model.delta;
            break;
        case ModelConfig::Kind::Rrg:
            model["kind"] = "rrg";
            model["m"] = config.model.m;
            break;
        case ModelConfig::Kind::Embedded:
            model["kind"] = "embedded";
            model["m"] = config.model.m;
            model["delta"] = config.model.delta;
            model["spec"] = spec_to_json(config.model.spec);
            break;
    }

    nlohmann::json comparisons = nlohmann::json::array();
    for (const ComparisonSpec& c : config.comparisons) {
        nlohmann::json cj;
        if (c.check == ComparisonSpec::Check::Tv) {
            cj["check"] = "tv";
            cj["reference"] = c.reference;
            cj["tolerance"] = c.tolerance;
            cj["K"] = c.K;
        } else {
            cj["check"] = "growth";
            cj["lo"] = c.lo;
            cj["hi"] = c.hi;
        }
        comparisons.push_back(cj);
    }

    return {{"model", model},
            {"n_vertices", config.n_vertices},
            {"replicas", config.replicas},
            {"seed", config.seed},
            {"workers", config.workers},
            {"outputs",
             {{"directory", config.outputs.directory},
              {"edges", config.outputs.edges},
              {"degrees", config.outputs.degrees},
              {"report", config.outputs.report},
              {"birth_log", config.outputs.birth_log}}},
            {"comparisons", comparisons}};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig config;
    const nlohmann::json& model = j.at("model");
    const std::string kind = model.at("kind");
    if (kind == "pam") {
        config.model.kind = ModelConfig::Kind::Pam;
        config.model.m = model.at("m");
        config.model.delta = model.value("delta", 0.0);
    } else if (kind == "rrg") {
        config.model.kind = ModelConfig::Kind::Rrg;
        config.model.m = model.at("m");
    } else if (kind == "embedded") {
        config.model.kind = ModelConfig::Kind::Embedded;
        config.model.m = model.at("m");
        config.model.delta = model.value("delta", 0.0);
        config.model.spec = spec_from_json(model.at("spec"));
    } else {
        throw std::invalid_argument("unknown model kind: " + kind);
    }

    config.n_vertices = j.at("n_vertices");
    config.replicas = j.value("replicas", 1u);
    config.seed = j.value("seed", std::uint64_t{0});
    config.workers = j.value("workers", 0u);

    if (j.contains("outputs")) {
        const nlohmann::json& o = j.at("outputs");
        config.outputs.directory = o.value("directory", std::string{});
        config.outputs.edges = o.value("edges", false);
        config.outputs.degrees = o.value("degrees", true);
        config.outputs.report = o.value("report", true);
        config.outputs.birth_log = o.value("birth_log", false);
    }

    for (const nlohmann::json& cj : j.value("comparisons", nlohmann::json::array())) {
        ComparisonSpec c;
        const std::string check = cj.at("check");
        if (check == "tv") {
            c.check = ComparisonSpec::Check::Tv;
            c.reference = cj.at("reference");
            c.tolerance = cj.at("tolerance");
            c.K = cj.value("K", std::size_t{0});
        } else if (check == "growth") {
            c.check = ComparisonSpec::Check::Growth;
            c.lo = cj.at("lo");
            c.hi = cj.at("hi");
        } else {
            throw std::invalid_argument("unknown check: " + check);
        }
        config.comparisons.push_back(c);
    }
    return config;
}

unsigned resolve_workers(unsigned configured) {
    if (const char* env = std::getenv("CBP_WORKERS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw std::runtime_error("CBP_WORKERS must be a positive integer");
        return static_cast<unsigned>(v);
    }
    if (configured > 0) return configured;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

namespace {

BirthProcessSpec embedded_equivalent_spec(const ModelConfig& model) {
    switch (model.kind) {
        case ModelConfig::Kind::Pam:
            return {RateSequence::affine(1.0, 1.0 + model.delta / model.m),
                    AgingFunction::identity()};
        case ModelConfig::Kind::Rrg:
            return {RateSequence::constant(1.0), AgingFunction::identity()};
        case ModelConfig::Kind::Embedded:
            return model.spec;
    }
    throw std::logic_error("unreachable");
}

struct ReplicaOutcome {
    std::vector<std::uint64_t> hist;
    std::uint64_t n_vertices = 0;
    std::uint64_t n_edges = 0;
    double alpha_hat = std::numeric_limits<double>::quiet_NaN();
    bool retried = false;
};

ReplicaOutcome run_replica(const ExperimentConfig& config, std::uint64_t replica_seed,
                           double alpha_star, double mu, Multigraph* graph_out,
                           BirthLog* log_out) {
    ReplicaOutcome out;
    Multigraph graph;
    switch (config.model.kind) {
        case ModelConfig::Kind::Pam:
            graph = generate_pam(config.model.m, config.model.delta,
                                 config.n_vertices, replica_seed);
            break;
        case ModelConfig::Kind::Rrg:
            graph = generate_rrg(config.model.m, config.n_vertices, replica_seed);
            break;
        case ModelConfig::Kind::Embedded: {
            const std::uint64_t target = config.n_vertices * config.model.m;
            BirthLog log;
            // Dormancy can stall a whole run below the target size; redraw the
            // replica until it survives (the limit theorems condition on
            // survival anyway) and flag that it happened.
            for (std::uint64_t attempt = 0;; ++attempt) {
                if (attempt == 64)
                    throw std::runtime_error(
                        "population went dormant 64 times in a row; "
                        "spec looks subcritical in practice");
                log = simulate_ctbp(config.model.spec,
                                    substream_seed(replica_seed, attempt),
                                    SimStop::max_individuals(target));
                if (log.individuals.size() >= target) break;
                out.retried = true;
            }
            graph = collapse(log, config.model.m);
            if (target >= 1000)
                out.alpha_hat = estimate_growth(log, alpha_star, mu).alpha_hat;
            if (log_out) *log_out = std::move(log);
            break;
        }
    }
    out.hist = in_degree_histogram(graph);
    out.n_vertices = graph.n_vertices;
    out.n_edges = graph.n_edges;
    if (graph_out) *graph_out = std::move(graph);
    return out;
}

DegreeDistribution reference_distribution(const ModelConfig& model,
                                          const ComparisonSpec& c) {
    if (c.reference == "pam_closed_form") {
        const std::size_t K =
            c.K > 0 ? c.K : default_truncation_pam(model.m, model.delta);
        return pam_closed_form(model.m, model.delta, K);
    }
    if (c.reference == "rrg_closed_form") {
        const std::size_t K = c.K > 0 ? c.K : default_truncation_rrg(model.m);
        return rrg_closed_form(model.m, K);
    }
    if (c.reference == "limiting") {
        const BirthProcessSpec spec = embedded_equivalent_spec(model);
        const std::size_t K =
            c.K > 0 ? c.K : default_truncation_limiting(spec, model.m);
        return limiting_distribution(spec, model.m, K);
    }
    throw std::invalid_argument("unknown reference: " + c.reference);
}

}  // namespace

ComparisonReport run_experiment(const ExperimentConfig& config) {
    if (config.model.m < 1) throw std::invalid_argument("m must be at least 1");
    if (config.n_vertices < 1)
        throw std::invalid_argument("n_vertices must be at least 1");
    if (config.replicas < 1)
        throw std::invalid_argument("replicas must be at least 1");

    ComparisonReport report;
    const BirthProcessSpec eq_spec = embedded_equivalent_spec(config.model);
    try {
        const MalthusianResult mal = solve_malthusian(eq_spec);
        report.alpha_star = mal.alpha_star;
        report.mu = mal.mu;
    } catch (const SubcriticalError& e) {
        report.checks.push_back(
            {"supercritical", e.limit_mean_progeny, "> 1", false});
        report.pass = false;
        return report;
    }

    const unsigned replicas = config.replicas;
    const unsigned workers = std::min(resolve_workers(config.workers), replicas);
    const bool want_graph =
        !config.outputs.directory.empty() && config.outputs.edges;
    const bool want_log = !config.outputs.directory.empty() &&
                          config.outputs.birth_log &&
                          config.model.kind == ModelConfig::Kind::Embedded;

    std::vector<ReplicaOutcome> outcomes(replicas);
    Multigraph graph0;
    BirthLog log0;
    {
        std::atomic<unsigned> next{0};
        std::mutex err_mutex;
        std::exception_ptr first_error;
        auto worker = [&] {
            for (;;) {
                const unsigned i = next.fetch_add(1);
                if (i >= replicas) return;
                try {
                    outcomes[i] = run_replica(
                        config, substream_seed(config.seed, i), report.alpha_star,
                        report.mu, i == 0 && want_graph ? &graph0 : nullptr,
                        i == 0 && want_log ? &log0 : nullptr);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        if (workers <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
            for (std::thread& t : pool) t.join();
        }
        if (first_error) std::rethrow_exception(first_error);
    }

    std::vector<std::uint64_t> merged;
    double alpha_hat_sum = 0.0;
    unsigned alpha_hat_count = 0;
    for (const ReplicaOutcome& o : outcomes) {
        if (o.hist.size() > merged.size()) merged.resize(o.hist.size(), 0);
        for (std::size_t k = 0; k < o.hist.size(); ++k) merged[k] += o.hist[k];
        report.n_vertices += o.n_vertices;
        report.n_edges += o.n_edges;
        report.extinct = report.extinct || o.retried;
        if (std::isfinite(o.alpha_hat)) {
            alpha_hat_sum += o.alpha_hat;
            ++alpha_hat_count;
        }
    }
    if (alpha_hat_count > 0) report.alpha_hat = alpha_hat_sum / alpha_hat_count;

    const DegreeDistribution empirical = empirical_distribution(merged);
    bool first_tv = true;
    for (const ComparisonSpec& c : config.comparisons) {
        if (c.check == ComparisonSpec::Check::Tv) {
            const DegreeDistribution ref = reference_distribution(config.model, c);
            const double tv = tv_distance(empirical, ref);
            if (first_tv) {
                first_tv = false;
                report.tv = tv;
                const std::size_t n =
                    std::max(empirical.values.size(), ref.values.size());
                for (std::size_t k = 0; k < n; ++k) {
                    const double e =
                        k < empirical.values.size() ? empirical.values[k] : 0.0;
                    const double a = k < ref.values.size() ? ref.values[k] : 0.0;
                    report.per_k.push_back({k, e, a, e - a});
                }
                // Final row carries the analytic mass beyond the table so the
                // TV distance is 0.5 * sum |diff| over the rows, exactly.
                report.per_k.push_back({n, 0.0, ref.tail_mass, -ref.tail_mass});
            }
            report.checks.push_back({"tv:" + c.reference, tv,
                                     "<= " + format_double(c.tolerance),
                                     tv <= c.tolerance});
        } else {
            const bool ok = report.alpha_hat >= c.lo && report.alpha_hat <= c.hi;
            report.checks.push_back({"growth", report.alpha_hat,
                                     "in [" + format_double(c.lo) + ", " +
                                         format_double(c.hi) + "]",
                                     ok});
        }
    }
    for (const CheckResult& c : report.checks) report.pass = report.pass && c.pass;

    if (!config.outputs.directory.empty()) {
        namespace fs = std::filesystem;
        const fs::path dir(config.outputs.directory);
        fs::create_directories(dir);
        if (config.outputs.degrees) write_degrees_csv(merged, (dir / "degrees.csv").string());
        if (want_graph) write_edges_csv(graph0, (dir / "edges.csv").string());
        if (want_log) write_birth_log_csv(log0, (dir / "birth_log.csv").string());
        if (config.outputs.report)
            write_text_file((dir / "report.json").string(),
                            report_to_json(config, report).dump(2) + "\n");
    }
    return report;
}

nlohmann::json report_to_json(const ExperimentConfig& config,
                              const ComparisonReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult& c : report.checks)
        checks.push_back({{"name", c.name},
                          {"observed", c.observed},
                          {"bound", c.bound},
                          {"pass", c.pass}});
    nlohmann::json per_k = nlohmann::json::array();
    for (const PerKRow& row : report.per_k)
        per_k.push_back({{"k", row.k},
                         {"empirical", row.empirical},
                         {"analytic", row.analytic},
                         {"diff", row.diff}});
    return {{"config", config_to_json(config)},
            {"alpha_star", report.alpha_star},
            {"mu", report.mu},
            {"alpha_hat", report.alpha_hat},
            {"tv_distance", report.tv},
            {"pass", report.pass},
            {"n_vertices", report.n_vertices},
            {"n_edges", report.n_edges},
            {"extinct", report.extinct},
            {"checks", checks},
            {"per_k", per_k}};
}

}  // namespace cbp
