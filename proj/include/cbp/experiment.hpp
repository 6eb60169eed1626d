#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbp/degree_dist.hpp"
#include "cbp/discrete_pam.hpp"

namespace cbp {

struct ModelConfig {
    enum class Kind { Pam, Rrg, Embedded };
    Kind kind = Kind::Pam;
    unsigned m = 1;
    double delta = 0.0;        // pam only
    BirthProcessSpec spec;     // embedded only
};

struct ComparisonSpec {
    enum class Check { Tv, Growth };
    Check check = Check::Tv;
    // tv: reference is one of pam_closed_form | rrg_closed_form | limiting
    std::string reference;
    double tolerance = 0.0;
    std::size_t K = 0;  // 0 = automatic truncation
    // growth: accepted alpha_hat interval
    double lo = 0.0, hi = 0.0;
};

struct OutputSpec {
    std::string directory;  // empty = write nothing
    bool edges = false;
    bool degrees = true;
    bool report = true;
    bool birth_log = false;
};

struct ExperimentConfig {
    ModelConfig model;
    std::uint64_t n_vertices = 0;
    unsigned replicas = 1;
    std::uint64_t seed = 0;
    unsigned workers = 0;  // 0 = hardware concurrency; CBP_WORKERS overrides
    OutputSpec outputs;
    std::vector<ComparisonSpec> comparisons;
};

struct CheckResult {
    std::string name;
    double observed = 0.0;
    std::string bound;
    bool pass = false;
};

struct PerKRow {
    std::uint64_t k;
    double empirical, analytic, diff;
};

struct ComparisonReport {
    double alpha_star = std::numeric_limits<double>::quiet_NaN();
    double mu = std::numeric_limits<double>::quiet_NaN();
    double alpha_hat = std::numeric_limits<double>::quiet_NaN();
    double tv = std::numeric_limits<double>::quiet_NaN();
    std::vector<PerKRow> per_k;
    std::vector<CheckResult> checks;
    bool pass = true;
    std::uint64_t n_vertices = 0;
    std::uint64_t n_edges = 0;
    bool extinct = false;
};

nlohmann::json rates_to_json(const RateSequence& rates);
RateSequence rates_from_json(const nlohmann::json& j);
nlohmann::json aging_to_json(const AgingFunction& aging);
AgingFunction aging_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const BirthProcessSpec& spec);
BirthProcessSpec spec_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

// Worker count after applying the CBP_WORKERS environment override.
unsigned resolve_workers(unsigned configured);

// Simulate/generate (replicas merged), compare against the analytic reference,
// write the requested artifacts, and report. Deterministic given the config.
ComparisonReport run_experiment(const ExperimentConfig& config);

nlohmann::json report_to_json(const ExperimentConfig& config,
                              const ComparisonReport& report);

}  // namespace cbp
