#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cbp/experiment.hpp"
#include "cbp/io.hpp"
#include "cbp/malthusian.hpp"
#include "cbp/stats.hpp"

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    json j;
    f >> j;
    return j;
}

// Shared model/spec flags. --config or --spec load JSON; otherwise the spec is
// assembled from shorthand flags (--m/--delta for the attachment family,
// --slope/--intercept, --constant) plus an optional --aging-exp clock.
struct SpecFlags {
    std::string config_path;
    std::string spec_path;
    unsigned m = 0;
    double delta = 0.0;
    double slope = 0.0, intercept = 0.0;
    double constant = 0.0;
    double aging_exp = 0.0;
    bool has_affine = false, has_constant = false, has_m = false,
         has_aging = false;

    void attach(CLI::App* cmd, bool with_config = true) {
        if (with_config)
            cmd->add_option("--config", config_path,
                            "experiment config JSON; its model supplies the spec");
        cmd->add_option("--spec", spec_path, "birth process spec JSON");
        cmd->add_option("--m", m, "edges per vertex")->check(CLI::PositiveNumber);
        cmd->add_option("--delta", delta, "attachment shift");
        auto* s = cmd->add_option("--slope", slope, "rate slope");
        auto* i = cmd->add_option("--intercept", intercept, "rate intercept");
        auto* c = cmd->add_option("--constant", constant, "constant rate");
        auto* a = cmd->add_option("--aging-exp", aging_exp,
                                  "exponential aging g(t) = exp(-c t)");
        cmd->parse_complete_callback([this, s, i, c, a, cmd] {
            has_affine = s->count() > 0 || i->count() > 0;
            has_constant = c->count() > 0;
            has_m = cmd->get_option("--m")->count() > 0;
            has_aging = a->count() > 0;
        });
    }

    std::optional<cbp::ExperimentConfig> config() const {
        if (config_path.empty()) return std::nullopt;
        return cbp::config_from_json(load_json(config_path));
    }

    cbp::BirthProcessSpec spec() const {
        cbp::BirthProcessSpec out;
        if (!spec_path.empty()) {
            out = cbp::spec_from_json(load_json(spec_path));
        } else if (has_affine) {
            out.rates = cbp::RateSequence::affine(slope, intercept);
        } else if (has_constant) {
            out.rates = cbp::RateSequence::constant(constant);
        } else if (has_m) {
            out.rates = cbp::RateSequence::affine(1.0, 1.0 + delta / m);
        } else {
            throw CLI::ValidationError(
                "spec", "give --spec, --m/--delta, --slope/--intercept, or --constant");
        }
        if (has_aging) out.aging = cbp::AgingFunction::exponential(aging_exp);
        return out;
    }
};

cbp::BirthProcessSpec model_spec(const cbp::ModelConfig& model) {
    switch (model.kind) {
        case cbp::ModelConfig::Kind::Pam:
            return {cbp::RateSequence::affine(1.0, 1.0 + model.delta / model.m),
                    cbp::AgingFunction::identity()};
        case cbp::ModelConfig::Kind::Rrg:
            return {cbp::RateSequence::constant(1.0), cbp::AgingFunction::identity()};
        case cbp::ModelConfig::Kind::Embedded:
            return model.spec;
    }
    throw std::logic_error("unreachable");
}

json graph_summary(const cbp::Multigraph& g) {
    std::uint64_t max_in = 0;
    for (std::uint64_t d : g.in_degrees) max_in = std::max(max_in, d);
    return {{"m", g.m},
            {"n_vertices", g.n_vertices},
            {"n_edges", g.n_edges},
            {"max_in_degree", max_in}};
}

int cmd_malthusian(const SpecFlags& flags) {
    cbp::BirthProcessSpec spec;
    if (auto cfg = flags.config())
        spec = model_spec(cfg->model);
    else
        spec = flags.spec();
    try {
        const cbp::MalthusianResult r = cbp::solve_malthusian(spec);
        json out = {{"alpha_star", r.alpha_star},
                    {"mu", r.mu},
                    {"supercritical", r.supercritical},
                    {"residual", r.residual},
                    {"limit_mean_progeny", r.limit_mean_progeny}};
        if (r.closed_form_alpha_star)
            out["closed_form_alpha_star"] = *r.closed_form_alpha_star;
        std::cout << out.dump(2) << "\n";
        return 0;
    } catch (const cbp::SubcriticalError& e) {
        json out = {{"supercritical", false},
                    {"limit_mean_progeny", e.limit_mean_progeny},
                    {"error", e.what()}};
        std::cout << out.dump(2) << "\n";
        return 1;
    }
}

int cmd_dist(const SpecFlags& flags, const std::string& model,
             std::size_t K, const std::string& out_path) {
    unsigned m = flags.m;
    double delta = flags.delta;
    cbp::BirthProcessSpec spec;
    std::string kind = model;
    if (auto cfg = flags.config()) {
        m = cfg->model.m;
        delta = cfg->model.delta;
        spec = model_spec(cfg->model);
        if (kind.empty())
            kind = cfg->model.kind == cbp::ModelConfig::Kind::Pam   ? "pam"
                   : cfg->model.kind == cbp::ModelConfig::Kind::Rrg ? "rrg"
                                                                    : "limiting";
    }
    if (kind.empty()) throw CLI::ValidationError("dist", "--model is required");
    if (m < 1) throw CLI::ValidationError("dist", "--m is required");

    cbp::DegreeDistribution dist;
    double alpha_star, mu;
    if (kind == "pam") {
        if (K == 0) K = cbp::default_truncation_pam(m, delta);
        dist = cbp::pam_closed_form(m, delta, K);
        const auto r = cbp::solve_malthusian(
            {cbp::RateSequence::affine(1.0, 1.0 + delta / m)});
        alpha_star = r.alpha_star;
        mu = r.mu;
    } else if (kind == "rrg") {
        if (K == 0) K = cbp::default_truncation_rrg(m);
        dist = cbp::rrg_closed_form(m, K);
        const auto r = cbp::solve_malthusian({cbp::RateSequence::constant(1.0)});
        alpha_star = r.alpha_star;
        mu = r.mu;
    } else if (kind == "limiting") {
        if (flags.config_path.empty()) spec = flags.spec();
        if (K == 0) K = cbp::default_truncation_limiting(spec, m);
        dist = cbp::limiting_distribution(spec, m, K);
        const auto r = cbp::solve_malthusian(spec);
        alpha_star = r.alpha_star;
        mu = r.mu;
    } else {
        throw CLI::ValidationError("dist", "--model must be pam, rrg, or limiting");
    }

    const json header = {{"alpha_star", alpha_star},
                         {"mu", mu},
                         {"m", m},
                         {"provenance", cbp::provenance_name(dist.provenance)},
                         {"tail_mass", dist.tail_mass}};
    std::string csv = "k,p_k\n";
    for (std::size_t k = 0; k < dist.values.size(); ++k)
        csv += std::to_string(k) + "," + cbp::format_double(dist.values[k]) + "\n";

    std::cout << header.dump(2) << "\n";
    if (out_path.empty())
        std::cout << csv;
    else
        cbp::write_text_file(out_path, csv);
    return 0;
}

int cmd_simulate(const SpecFlags& flags, std::uint64_t individuals, double horizon,
                 bool has_horizon, std::uint64_t seed, const std::string& out_path,
                 unsigned collapse_m) {
    cbp::BirthProcessSpec spec;
    if (auto cfg = flags.config()) {
        spec = model_spec(cfg->model);
        if (individuals == 0 && !has_horizon)
            individuals = cfg->n_vertices * cfg->model.m;
        if (seed == 0) seed = cfg->seed;
        if (collapse_m == 0) collapse_m = cfg->model.m;
    } else {
        spec = flags.spec();
    }
    if (individuals == 0 && !has_horizon)
        throw CLI::ValidationError("simulate", "give --individuals or --horizon");

    const cbp::SimStop stop = has_horizon
                                  ? cbp::SimStop::horizon(horizon)
                                  : cbp::SimStop::max_individuals(individuals);
    const cbp::BirthLog log = cbp::simulate_ctbp(spec, seed, stop);
    if (!out_path.empty()) cbp::write_birth_log_csv(log, out_path);

    json out = {{"individuals", log.individuals.size()},
                {"horizon", log.horizon},
                {"extinct", log.extinct},
                {"seed", seed}};
    try {
        const cbp::MalthusianResult r = cbp::solve_malthusian(spec);
        out["alpha_star"] = r.alpha_star;
        if (log.individuals.size() >= 1000) {
            const cbp::GrowthEstimate g = cbp::estimate_growth(log, r.alpha_star, r.mu);
            out["alpha_hat"] = g.alpha_hat;
            out["theta_t"] = g.theta_t;
        }
    } catch (const cbp::SubcriticalError&) {
        out["alpha_star"] = nullptr;
    }
    if (collapse_m > 0)
        out["graph"] = graph_summary(cbp::collapse(log, collapse_m));
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_generate(const SpecFlags& flags, std::string model, std::uint64_t n,
                 std::uint64_t seed, std::string out_path,
                 const std::string& degrees_path, bool total_degree) {
    unsigned m = flags.m;
    double delta = flags.delta;
    cbp::BirthProcessSpec spec;
    bool have_spec = false;
    if (auto cfg = flags.config()) {
        m = cfg->model.m;
        delta = cfg->model.delta;
        spec = model_spec(cfg->model);
        have_spec = true;
        if (n == 0) n = cfg->n_vertices;
        if (seed == 0) seed = cfg->seed;
        if (model.empty())
            model = cfg->model.kind == cbp::ModelConfig::Kind::Pam   ? "pam"
                    : cfg->model.kind == cbp::ModelConfig::Kind::Rrg ? "rrg"
                                                                     : "embedded";
    }
    if (model.empty()) throw CLI::ValidationError("generate", "--model is required");
    if (m < 1) throw CLI::ValidationError("generate", "--m is required");
    if (n < 1) throw CLI::ValidationError("generate", "--n is required");

    cbp::Multigraph g;
    if (model == "pam") {
        g = cbp::generate_pam(m, delta, n, seed);
    } else if (model == "rrg") {
        g = cbp::generate_rrg(m, n, seed);
    } else if (model == "embedded") {
        if (!have_spec && !flags.spec_path.empty()) spec = flags.spec();
        else if (!have_spec)
            spec = {cbp::RateSequence::affine(1.0, 1.0 + delta / m),
                    cbp::AgingFunction::identity()};
        g = cbp::generate_via_embedding(spec, m, n, seed);
    } else {
        throw CLI::ValidationError("generate", "--model must be pam, rrg, or embedded");
    }

    if (out_path.empty()) out_path = "edges.csv";
    cbp::write_edges_csv(g, out_path);
    if (!degrees_path.empty())
        cbp::write_degrees_csv(total_degree ? cbp::total_degree_histogram(g)
                                            : cbp::in_degree_histogram(g),
                               degrees_path);
    std::cout << graph_summary(g).dump(2) << "\n";
    return 0;
}

int cmd_compare(const std::string& config_path, std::optional<std::uint64_t> seed) {
    cbp::ExperimentConfig config = cbp::config_from_json(load_json(config_path));
    if (seed) config.seed = *seed;
    const cbp::ComparisonReport report = cbp::run_experiment(config);
    std::cout << cbp::report_to_json(config, report).dump(2) << "\n";
    return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"collapsed branching process toolkit"};
    app.require_subcommand(1);

    SpecFlags mal_flags;
    CLI::App* mal = app.add_subcommand("malthusian", "growth rate and mu of a spec");
    mal_flags.attach(mal);

    SpecFlags dist_flags;
    std::string dist_model, dist_out;
    std::size_t dist_K = 0;
    CLI::App* dist = app.add_subcommand("dist", "limiting degree distribution");
    dist_flags.attach(dist);
    dist->add_option("--model", dist_model, "pam | rrg | limiting");
    dist->add_option("--K", dist_K, "truncation (0 = automatic)");
    dist->add_option("--out", dist_out, "write the CSV here instead of stdout");

    SpecFlags sim_flags;
    std::uint64_t sim_n = 0, sim_seed = 0;
    double sim_horizon = 0.0;
    unsigned sim_m = 0;
    std::string sim_out;
    CLI::App* sim = app.add_subcommand("simulate", "run the branching population");
    sim_flags.attach(sim);
    sim->add_option("--individuals", sim_n, "stop at this population size");
    auto* hz = sim->add_option("--horizon", sim_horizon, "stop at this time");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--out", sim_out, "write the birth log CSV here");
    sim->add_option("--collapse-m", sim_m, "also collapse into a graph summary");

    SpecFlags gen_flags;
    std::string gen_model, gen_out, gen_degrees;
    std::uint64_t gen_n = 0, gen_seed = 0;
    bool gen_total = false;
    CLI::App* gen = app.add_subcommand("generate", "generate an attachment multigraph");
    gen_flags.attach(gen);
    gen->add_option("--model", gen_model, "pam | rrg | embedded");
    gen->add_option("--n", gen_n, "number of vertices");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--out", gen_out, "edge list path (default edges.csv)");
    gen->add_option("--degrees", gen_degrees, "also write the degree histogram CSV");
    gen->add_flag("--total-degree", gen_total,
                  "histogram total degree instead of in-degree");

    std::string cmp_config;
    std::uint64_t cmp_seed = 0;
    CLI::App* cmp = app.add_subcommand("compare", "run an experiment config");
    cmp->add_option("--config", cmp_config, "experiment config JSON")->required();
    auto* cmp_seed_opt = cmp->add_option("--seed", cmp_seed, "override the config seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (mal->parsed()) return cmd_malthusian(mal_flags);
        if (dist->parsed())
            return cmd_dist(dist_flags, dist_model, dist_K, dist_out);
        if (sim->parsed())
            return cmd_simulate(sim_flags, sim_n, sim_horizon, hz->count() > 0,
                                sim_seed, sim_out, sim_m);
        if (gen->parsed())
            return cmd_generate(gen_flags, gen_model, gen_n, gen_seed, gen_out,
                                gen_degrees, gen_total);
        if (cmp->parsed())
            return cmd_compare(cmp_config, cmp_seed_opt->count() > 0
                                               ? std::optional<std::uint64_t>(cmp_seed)
                                               : std::nullopt);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
