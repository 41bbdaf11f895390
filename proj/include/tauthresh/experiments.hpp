#pragma once

#include "tauthresh/bounds.hpp"
#include "tauthresh/estimators.hpp"
#include "tauthresh/sampling.hpp"
#include "tauthresh/sym_matrix.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tauthresh {

enum class ExperimentKind { sweep, critical, rate_check, tails, coupling };

ExperimentKind experiment_kind_from_string(const std::string& s);
std::string to_string(ExperimentKind kind);

struct ModelSpec {
    enum class Distribution { gaussian, elliptical_pareto };
    Distribution distribution = Distribution::gaussian;
    double pareto_tail = 2.5;      // used by elliptical_pareto
    SparsePattern pattern = IdentityPattern{};
    double rho = 0.0;              // pair correlation for tails/coupling runs
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::sweep;
    int n = 100;
    int p = 500;
    ModelSpec model;
    SparsityClassParams sparsity;
    EstimatorKind estimator = EstimatorKind::rho_star;
    std::vector<double> alpha_grid;
    int replicates = 1;
    std::uint64_t master_seed = 1;
    std::vector<RiskNorm> losses = {RiskNorm::frobenius};
    std::vector<double> gamma_grid;                 // tails
    double sigma = 0.0;                             // coupling
    double zeta = 1.0;                              // coupling cap constant
    std::vector<std::pair<int, int>> grid;          // rate-check (n, p) cells
    int threads = 0;                                // 0 = hardware default
    std::string out = ".";                          // default output directory

    void validate() const;
    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const; // canonical echo, deterministic bytes
};

struct RiskRow {
    int n = 0;
    int p = 0;
    std::string estimator;
    double alpha = 0.0;
    std::string loss;
    double mean = 0.0;
    double se = 0.0;
    int replicates = 0;
    double ratio = 0.0; // mean / rate_benchmark
};

struct RiskReport {
    std::string experiment;
    std::vector<RiskRow> rows;
    std::string config_echo;
    std::string version;
    bool assumptions_ok = true;
    std::vector<AssumptionCheck> assumptions;
    std::vector<std::string> notes;

    std::string csv() const;
    std::string metadata_json() const;
};

struct TailRow {
    double gamma = 0.0;
    double t = 0.0;
    double empirical = 0.0;
    double se = 0.0;
    double exact = -1.0; // -1 when the exact column does not apply (rho != 0)
    double gaussian = 0.0;
    double hoeffding = 0.0;
};

struct TailReport {
    std::vector<TailRow> rows;
    std::string config_echo;
    std::string version;
    bool assumptions_ok = true;
    std::vector<AssumptionCheck> assumptions;
    std::string csv() const;
    std::string metadata_json() const;
};

struct CouplingReport {
    double sigma = 0.0;
    double sigma_cap = 0.0;
    double lambda = 0.0;       // 12 sqrt(|sigma|)
    double threshold = 0.0;    // c_n sqrt(log p / n)
    int exceed_count = 0;
    int replicates = 0;
    double frequency = 0.0;
    double se = 0.0;
    double bernstein_bound = 0.0; // evaluated union-plus-Bernstein bound
    double max_residual = 0.0;
    bool lattice_ok = true;    // tau(Y,Z)-tau(W,Z) multiples of 2/(n(n-1))
    std::string config_echo;
    std::string version;
    bool assumptions_ok = true;
    std::vector<AssumptionCheck> assumptions;
    std::string csv() const;
    std::string metadata_json() const;
};

// population correlation matrix of a model (p x p patterns only)
CorrelationMatrix population_correlation(const ExperimentConfig& config);

// seed of replicate r; depends only on (master, r) so thread count and total
// replicate count never change what a replicate sees
std::uint64_t replicate_seed(std::uint64_t master, int replicate);

RiskReport run_risk_sweep(const ExperimentConfig& config);
RiskReport run_critical_threshold(const ExperimentConfig& config);
RiskReport run_rate_check(const ExperimentConfig& config);
TailReport run_tail_experiment(const ExperimentConfig& config);
CouplingReport run_coupling_experiment(const ExperimentConfig& config);

} // namespace tauthresh
