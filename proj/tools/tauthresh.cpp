#include "tauthresh/bounds.hpp"
#include "tauthresh/errors.hpp"
#include "tauthresh/estimators.hpp"
#include "tauthresh/experiments.hpp"
#include "tauthresh/inversions.hpp"
#include "tauthresh/io.hpp"
#include "tauthresh/kendall.hpp"
#include "tauthresh/linalg.hpp"
#include "tauthresh/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

namespace {

using namespace tauthresh;

int default_threads() {
    if (const char* env = std::getenv("TAUTHRESH_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) return t;
    }
    return 0; // hardware default
}

void emit(const std::string& path, const std::string& content) {
    write_file_atomic(path, content);
    std::cout << "wrote " << path << " (" << content.size() << " bytes)\n";
}

std::string out_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

int run_tau(const std::string& input, const std::string& output, bool naive, int threads) {
    const SampleMatrix x = sample_from_csv(read_file(input));
    const CorrelationMatrix tau = kendall_tau_matrix(x, threads, naive);
    emit(output, matrix_to_csv(tau.sym()));
    return 0;
}

int run_estimate(const std::string& sample_path, const std::string& tau_path, int n_override,
                 const std::string& kind, double alpha, bool project, const std::string& output,
                 int threads) {
    CorrelationMatrix tau = CorrelationMatrix::identity(2);
    int n = 0;
    if (!sample_path.empty()) {
        const SampleMatrix x = sample_from_csv(read_file(sample_path));
        n = x.rows();
        tau = kendall_tau_matrix(x, threads);
    } else {
        tau = CorrelationMatrix::from_sym(matrix_from_csv(read_file(tau_path)));
        n = n_override;
        if (n < 2) throw DomainError("--n is required (>= 2) when estimating from a tau matrix");
    }
    EstimatorSpec spec{estimator_kind_from_string(kind), alpha};
    CorrelationMatrix est = estimate(tau, spec, n, tau.dim());
    if (project) est = nearest_correlation(est.sym());
    emit(output, matrix_to_csv(est.sym()));
    return 0;
}

int run_mahonian(int n, const std::string& mode, const std::string& output) {
    std::string csv = "k,value\n";
    if (mode == "exact") {
        const MahonianPMF pmf = mahonian_pmf(n, MahonianPMF::Mode::exact_integer);
        for (std::size_t k = 0; k < pmf.counts.size(); ++k)
            csv += std::to_string(k) + "," + pmf.counts[k].to_string() + "\n";
    } else if (mode == "float") {
        const MahonianPMF pmf = mahonian_pmf(n, MahonianPMF::Mode::floating);
        for (std::size_t k = 0; k < pmf.probs.size(); ++k)
            csv += std::to_string(k) + "," + format_double(pmf.probs[k]) + "\n";
    } else {
        throw DomainError("--mode must be exact or float");
    }
    emit(output, csv);
    return 0;
}

int run_tails_table(int n, int p_dim, const std::vector<double>& gammas,
                    const std::string& output) {
    std::string csv = "gamma,t,exact,gaussian,hoeffding,exact_over_gaussian,exact_over_hoeffding\n";
    for (const auto& row : tail_comparison(n, p_dim, gammas)) {
        csv += format_double(row.gamma) + "," + format_double(row.t) + "," +
               format_double(row.exact) + "," + format_double(row.gaussian) + "," +
               format_double(row.hoeffding) + "," + format_double(row.exact_over_gaussian) + "," +
               format_double(row.exact_over_hoeffding) + "\n";
    }
    emit(output, csv);
    return 0;
}

ExperimentConfig load_config(const std::string& path, int threads) {
    ExperimentConfig config = ExperimentConfig::from_json_text(read_file(path));
    if (threads > 0) config.threads = threads;
    return config;
}

int finish_risk(const RiskReport& report, const std::string& dir, const std::string& stem,
                bool strict) {
    emit(out_path(dir, stem + ".csv"), report.csv());
    emit(out_path(dir, stem + ".json"), report.metadata_json());
    if (strict && !report.assumptions_ok) {
        std::cerr << "assumption check failed (see " << stem << ".json)\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kendall's tau threshold estimation of sparse correlation matrices"};
    app.require_subcommand(0, 1);
    app.set_version_flag("--version", std::string(version_string));

    int threads = default_threads();
    app.add_option("--threads", threads, "worker thread count (default: TAUTHRESH_THREADS or all cores)");

    // tau
    auto* tau_cmd = app.add_subcommand("tau", "tau-hat matrix of a sample CSV");
    std::string tau_in, tau_out = "tau.csv";
    bool tau_naive = false;
    tau_cmd->add_option("--input", tau_in, "sample CSV (rows = observations)")->required();
    tau_cmd->add_option("--out", tau_out, "output matrix CSV");
    tau_cmd->add_flag("--naive", tau_naive, "force the O(n^2) path for cross-checking");

    // estimate
    auto* est_cmd = app.add_subcommand("estimate", "threshold estimator from a sample or tau CSV");
    std::string est_sample, est_tau, est_kind = "rho-star", est_out = "estimate.csv";
    int est_n = 0;
    double est_alpha = 0.0;
    bool est_project = false;
    auto* opt_sample = est_cmd->add_option("--sample", est_sample, "sample CSV input");
    auto* opt_tau = est_cmd->add_option("--tau", est_tau, "precomputed tau-hat CSV input");
    opt_sample->excludes(opt_tau);
    opt_tau->excludes(opt_sample);
    est_cmd->add_option("--n", est_n, "observation count (required with --tau)");
    est_cmd->add_option("--kind", est_kind, "rho-star | rho-hat | identity");
    est_cmd->add_option("--alpha", est_alpha, "threshold constant")->required();
    est_cmd->add_flag("--project", est_project, "nearest-correlation post step");
    est_cmd->add_option("--out", est_out, "output matrix CSV");

    // mahonian
    auto* mah_cmd = app.add_subcommand("mahonian", "inversion-count pmf table");
    int mah_n = 0;
    std::string mah_mode = "exact", mah_out = "mahonian.csv";
    mah_cmd->add_option("--n", mah_n, "permutation length")->required();
    mah_cmd->add_option("--mode", mah_mode, "exact | float");
    mah_cmd->add_option("--out", mah_out, "output CSV");

    // tails
    auto* tails_cmd = app.add_subcommand("tails", "tail table or Monte Carlo tail experiment");
    std::string tails_config, tails_dir = ".";
    int tails_n = 0, tails_p = 0;
    std::vector<double> tails_gammas;
    bool tails_strict = false;
    tails_cmd->add_option("--config", tails_config, "experiment config JSON (Monte Carlo mode)");
    tails_cmd->add_option("--n", tails_n, "sample size (table mode)");
    tails_cmd->add_option("--p-dim", tails_p, "dimension entering log p (table mode)");
    tails_cmd->add_option("--gammas", tails_gammas, "gamma grid (table mode)")->delimiter(',');
    tails_cmd->add_option("--out", tails_dir, "output directory");
    tails_cmd->add_flag("--strict", tails_strict, "exit 2 on assumption-check failure");

    // experiment runners
    std::string sweep_config, sweep_dir = ".";
    bool sweep_strict = false;
    auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo risk sweep over alpha");
    sweep_cmd->add_option("--config", sweep_config, "experiment config JSON")->required();
    sweep_cmd->add_option("--out", sweep_dir, "output directory");
    sweep_cmd->add_flag("--strict", sweep_strict, "exit 2 on assumption-check failure");

    std::string crit_config, crit_dir = ".";
    bool crit_strict = false;
    auto* crit_cmd = app.add_subcommand("critical", "risk sweep annotated with the critical constant");
    crit_cmd->add_option("--config", crit_config, "experiment config JSON")->required();
    crit_cmd->add_option("--out", crit_dir, "output directory");
    crit_cmd->add_flag("--strict", crit_strict, "exit 2 on assumption-check failure");

    std::string rate_config, rate_dir = ".";
    bool rate_strict = false;
    auto* rate_cmd = app.add_subcommand("rate-check", "normalized risk over an (n, p) grid");
    rate_cmd->add_option("--config", rate_config, "experiment config JSON")->required();
    rate_cmd->add_option("--out", rate_dir, "output directory");
    rate_cmd->add_flag("--strict", rate_strict, "exit 2 on assumption-check failure");

    std::string coup_config, coup_dir = ".";
    bool coup_strict = false;
    auto* coup_cmd = app.add_subcommand("coupling", "tau coupling residual experiment");
    coup_cmd->add_option("--config", coup_config, "experiment config JSON")->required();
    coup_cmd->add_option("--out", coup_dir, "output directory");
    coup_cmd->add_flag("--strict", coup_strict, "exit 2 on assumption-check failure");

    CLI11_PARSE(app, argc, argv);

    try {
        if (tau_cmd->parsed()) return run_tau(tau_in, tau_out, tau_naive, threads);
        if (est_cmd->parsed()) {
            if (est_sample.empty() && est_tau.empty())
                throw DomainError("estimate needs --sample or --tau");
            return run_estimate(est_sample, est_tau, est_n, est_kind, est_alpha, est_project,
                                est_out, threads);
        }
        if (mah_cmd->parsed()) return run_mahonian(mah_n, mah_mode, mah_out);
        if (tails_cmd->parsed()) {
            if (!tails_config.empty()) {
                ExperimentConfig config = load_config(tails_config, threads);
                const std::string dir =
                    tails_cmd->count("--out") ? tails_dir : config.out;
                const TailReport report = run_tail_experiment(config);
                emit(out_path(dir, "tails.csv"), report.csv());
                emit(out_path(dir, "tails.json"), report.metadata_json());
                if (tails_strict && !report.assumptions_ok) {
                    std::cerr << "assumption check failed (see tails.json)\n";
                    return 2;
                }
                return 0;
            }
            if (tails_n < 2 || tails_p < 2 || tails_gammas.empty())
                throw DomainError("tails table mode needs --n, --p-dim and --gammas");
            return run_tails_table(tails_n, tails_p, tails_gammas,
                                   out_path(tails_dir, "tails.csv"));
        }
        if (sweep_cmd->parsed()) {
            ExperimentConfig config = load_config(sweep_config, threads);
            const std::string dir = sweep_cmd->count("--out") ? sweep_dir : config.out;
            return finish_risk(run_risk_sweep(config), dir, "sweep", sweep_strict);
        }
        if (crit_cmd->parsed()) {
            ExperimentConfig config = load_config(crit_config, threads);
            const std::string dir = crit_cmd->count("--out") ? crit_dir : config.out;
            return finish_risk(run_critical_threshold(config), dir, "critical", crit_strict);
        }
        if (rate_cmd->parsed()) {
            ExperimentConfig config = load_config(rate_config, threads);
            const std::string dir = rate_cmd->count("--out") ? rate_dir : config.out;
            return finish_risk(run_rate_check(config), dir, "rate-check", rate_strict);
        }
        if (coup_cmd->parsed()) {
            ExperimentConfig config = load_config(coup_config, threads);
            const std::string dir = coup_cmd->count("--out") ? coup_dir : config.out;
            const CouplingReport report = run_coupling_experiment(config);
            emit(out_path(dir, "coupling.csv"), report.csv());
            emit(out_path(dir, "coupling.json"), report.metadata_json());
            if (coup_strict && !report.assumptions_ok) {
                std::cerr << "assumption check failed (see coupling.json)\n";
                return 2;
            }
            return 0;
        }
        std::cout << app.help();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
