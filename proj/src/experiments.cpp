#include "tauthresh/experiments.hpp"

#include "tauthresh/errors.hpp"
#include "tauthresh/inversions.hpp"
#include "tauthresh/io.hpp"
#include "tauthresh/kendall.hpp"
#include "tauthresh/linalg.hpp"
#include "tauthresh/rng.hpp"
#include "tauthresh/version.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

namespace tauthresh {

using ordered_json = nlohmann::ordered_json;

namespace {
constexpr double pi = 3.14159265358979323846;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    if (count <= 0) return;
    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    nthreads = std::min(nthreads, count);
    if (nthreads == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) break;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe aggregate(const std::vector<double>& values) {
    MeanSe out;
    const std::size_t r = values.size();
    if (r == 0) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(r);
    if (r > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.se = std::sqrt(ss / static_cast<double>(r - 1)) / std::sqrt(static_cast<double>(r));
    }
    return out;
}

std::string loss_name(RiskNorm norm) {
    return norm == RiskNorm::frobenius ? "frobenius" : "spectral";
}

} // namespace

std::uint64_t replicate_seed(std::uint64_t master, int replicate) {
    return splitmix64(master ^
                      (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(replicate) + 1)));
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
    if (s == "sweep") return ExperimentKind::sweep;
    if (s == "critical") return ExperimentKind::critical;
    if (s == "rate-check") return ExperimentKind::rate_check;
    if (s == "tails") return ExperimentKind::tails;
    if (s == "coupling") return ExperimentKind::coupling;
    throw DomainError("unknown experiment kind: " + s);
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::sweep: return "sweep";
        case ExperimentKind::critical: return "critical";
        case ExperimentKind::rate_check: return "rate-check";
        case ExperimentKind::tails: return "tails";
        case ExperimentKind::coupling: return "coupling";
    }
    throw DomainError("invalid experiment kind");
}

void ExperimentConfig::validate() const {
    if (n < 2 || p < 2) throw DomainError("config requires n >= 2 and p >= 2");
    if (replicates < 1) throw DomainError("config requires replicates >= 1");
    sparsity.validate();
    const bool needs_alpha = kind == ExperimentKind::sweep || kind == ExperimentKind::critical ||
                             kind == ExperimentKind::rate_check;
    if (needs_alpha) {
        if (alpha_grid.empty()) throw DomainError("alpha-grid must be nonempty");
        if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end()))
            throw DomainError("alpha-grid must be sorted ascending");
        for (double a : alpha_grid)
            if (a < 0.0) throw DomainError("alpha-grid entries must be nonnegative");
        if (losses.empty()) throw DomainError("losses must be nonempty");
    }
    if (kind == ExperimentKind::tails && gamma_grid.empty())
        throw DomainError("tails experiment needs a gamma-grid");
    if (kind == ExperimentKind::rate_check && grid.empty())
        throw DomainError("rate-check experiment needs a (n, p) grid");
    if (kind == ExperimentKind::coupling) {
        const double cap =
            std::min(zeta * std::sqrt(std::log(static_cast<double>(p)) / n), std::sqrt(3.0) / 2.0);
        if (std::fabs(sigma) > cap)
            throw DomainError("coupling sigma exceeds the cap zeta*sqrt(log p/n) ^ sqrt(3)/2");
    }
}

namespace {

ordered_json pattern_to_json(const SparsePattern& pattern) {
    if (std::holds_alternative<IdentityPattern>(pattern)) return "identity";
    if (const auto* b = std::get_if<BandedPattern>(&pattern)) {
        ordered_json j;
        j["banded"] = ordered_json{{"bandwidth", b->bandwidth}, {"value", b->value}};
        return j;
    }
    const auto& rs = std::get<RandomSupportPattern>(pattern);
    ordered_json j;
    j["random-support"] = ordered_json{{"per-row", rs.per_row}, {"value", rs.value}};
    return j;
}

SparsePattern pattern_from_json(const ordered_json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "identity") return IdentityPattern{};
        throw DomainError("unknown correlation pattern: " + j.get<std::string>());
    }
    if (j.contains("banded")) {
        const auto& b = j.at("banded");
        return BandedPattern{b.at("bandwidth").get<int>(), b.at("value").get<double>()};
    }
    if (j.contains("random-support")) {
        const auto& r = j.at("random-support");
        return RandomSupportPattern{r.at("per-row").get<int>(), r.at("value").get<double>()};
    }
    throw DomainError("unknown correlation pattern object");
}

void reject_unknown_keys(const ordered_json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool found = false;
        for (const char* k : known)
            if (it.key() == k) found = true;
        if (!found) throw DomainError("unknown key '" + it.key() + "' in " + where);
    }
}

} // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    reject_unknown_keys(j,
                        {"kind", "n", "p", "model", "sparsity", "estimator", "alpha-grid",
                         "replicates", "master-seed", "losses", "gamma-grid", "sigma", "zeta",
                         "grid", "threads", "out"},
                        "config");
    ExperimentConfig c;
    c.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
    c.n = j.at("n").get<int>();
    c.p = j.at("p").get<int>();
    if (j.contains("model")) {
        const auto& m = j.at("model");
        reject_unknown_keys(m, {"distribution", "pareto-tail", "correlation", "rho"}, "model");
        if (m.contains("distribution")) {
            const std::string d = m.at("distribution").get<std::string>();
            if (d == "gaussian") c.model.distribution = ModelSpec::Distribution::gaussian;
            else if (d == "elliptical-pareto")
                c.model.distribution = ModelSpec::Distribution::elliptical_pareto;
            else throw DomainError("unknown distribution: " + d);
        }
        if (m.contains("pareto-tail")) c.model.pareto_tail = m.at("pareto-tail").get<double>();
        if (m.contains("correlation")) c.model.pattern = pattern_from_json(m.at("correlation"));
        if (m.contains("rho")) c.model.rho = m.at("rho").get<double>();
    }
    if (j.contains("sparsity")) {
        const auto& s = j.at("sparsity");
        reject_unknown_keys(s, {"q", "c", "M", "m", "v", "eta-l", "eta-u"}, "sparsity");
        if (s.contains("q")) c.sparsity.q = s.at("q").get<double>();
        if (s.contains("c")) c.sparsity.c = s.at("c").get<double>();
        if (s.contains("M")) c.sparsity.M = s.at("M").get<double>();
        if (s.contains("m")) c.sparsity.m = s.at("m").get<double>();
        if (s.contains("v")) c.sparsity.v = s.at("v").get<double>();
        if (s.contains("eta-l")) c.sparsity.eta_l = s.at("eta-l").get<double>();
        if (s.contains("eta-u")) c.sparsity.eta_u = s.at("eta-u").get<double>();
    }
    if (j.contains("estimator"))
        c.estimator = estimator_kind_from_string(j.at("estimator").get<std::string>());
    if (j.contains("alpha-grid")) c.alpha_grid = j.at("alpha-grid").get<std::vector<double>>();
    if (j.contains("replicates")) c.replicates = j.at("replicates").get<int>();
    if (j.contains("master-seed")) c.master_seed = j.at("master-seed").get<std::uint64_t>();
    if (j.contains("losses")) {
        c.losses.clear();
        for (const auto& l : j.at("losses")) {
            const std::string name = l.get<std::string>();
            if (name == "frobenius") c.losses.push_back(RiskNorm::frobenius);
            else if (name == "spectral") c.losses.push_back(RiskNorm::spectral);
            else throw DomainError("unknown loss: " + name);
        }
    }
    if (j.contains("gamma-grid")) c.gamma_grid = j.at("gamma-grid").get<std::vector<double>>();
    if (j.contains("sigma")) c.sigma = j.at("sigma").get<double>();
    if (j.contains("zeta")) c.zeta = j.at("zeta").get<double>();
    if (j.contains("grid")) {
        for (const auto& cell : j.at("grid")) {
            if (!cell.is_array() || cell.size() != 2)
                throw DomainError("grid cells must be [n, p] pairs");
            c.grid.emplace_back(cell[0].get<int>(), cell[1].get<int>());
        }
    }
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    c.validate();
    return c;
}

std::string ExperimentConfig::to_json_text() const {
    ordered_json j;
    j["kind"] = to_string(kind);
    j["n"] = n;
    j["p"] = p;
    ordered_json m;
    m["distribution"] = model.distribution == ModelSpec::Distribution::gaussian
                            ? "gaussian"
                            : "elliptical-pareto";
    if (model.distribution == ModelSpec::Distribution::elliptical_pareto)
        m["pareto-tail"] = model.pareto_tail;
    m["correlation"] = pattern_to_json(model.pattern);
    m["rho"] = model.rho;
    j["model"] = std::move(m);
    j["sparsity"] = ordered_json{{"q", sparsity.q},         {"c", sparsity.c},
                                 {"M", sparsity.M},         {"m", sparsity.m},
                                 {"v", sparsity.v},         {"eta-l", sparsity.eta_l},
                                 {"eta-u", sparsity.eta_u}};
    j["estimator"] = to_string(estimator);
    j["alpha-grid"] = alpha_grid;
    j["replicates"] = replicates;
    j["master-seed"] = master_seed;
    ordered_json losses_json = ordered_json::array();
    for (RiskNorm l : losses) losses_json.push_back(loss_name(l));
    j["losses"] = std::move(losses_json);
    if (!gamma_grid.empty()) j["gamma-grid"] = gamma_grid;
    if (kind == ExperimentKind::coupling) {
        j["sigma"] = sigma;
        j["zeta"] = zeta;
    }
    if (!grid.empty()) {
        ordered_json g = ordered_json::array();
        for (const auto& cell : grid) g.push_back(ordered_json::array({cell.first, cell.second}));
        j["grid"] = std::move(g);
    }
    if (out != ".") j["out"] = out;
    return j.dump(2);
}

CorrelationMatrix population_correlation(const ExperimentConfig& config) {
    return make_sparse_model(config.p, config.sparsity, config.model.pattern,
                             splitmix64(config.master_seed ^ 0xC0FFEEull));
}

namespace {

SampleMatrix draw_sample(const ExperimentConfig& config, const EllipticalSpec& spec, int n,
                         int replicate) {
    const std::uint64_t seed = replicate_seed(config.master_seed, replicate);
    if (config.model.distribution == ModelSpec::Distribution::gaussian)
        return sample_gaussian(spec, n, seed);
    return sample_elliptical(spec, n, seed);
}

EllipticalSpec build_spec(const ExperimentConfig& config, const CorrelationMatrix& rho) {
    RadialSpec radial = RadialGaussianChi{};
    if (config.model.distribution == ModelSpec::Distribution::elliptical_pareto)
        radial = RadialPareto{config.model.pareto_tail};
    return EllipticalSpec(std::vector<double>(static_cast<std::size_t>(rho.dim()), 0.0),
                          rho.sym(), radial);
}

// one sweep cell: coupled alpha sweep, one tau-hat per replicate
void sweep_cell(const ExperimentConfig& config, int n, int p, std::vector<RiskRow>& rows) {
    ExperimentConfig cell = config;
    cell.n = n;
    cell.p = p;
    const CorrelationMatrix rho = population_correlation(cell);
    if (!is_member(rho, config.sparsity))
        throw InfeasibleModelError("population correlation is outside the sparsity class");
    const EllipticalSpec spec = build_spec(cell, rho);

    const std::size_t n_alpha = config.alpha_grid.size();
    const std::size_t n_loss = config.losses.size();
    std::vector<double> losses(static_cast<std::size_t>(config.replicates) * n_alpha * n_loss);

    parallel_for(config.replicates, config.threads, [&](int r) {
        const SampleMatrix x = draw_sample(cell, spec, n, r);
        const CorrelationMatrix tau_hat = kendall_tau_matrix(x, 1);
        for (std::size_t a = 0; a < n_alpha; ++a) {
            const CorrelationMatrix est =
                estimate(tau_hat, {config.estimator, config.alpha_grid[a]}, n, p);
            for (std::size_t l = 0; l < n_loss; ++l) {
                double loss;
                if (config.losses[l] == RiskNorm::frobenius) {
                    loss = frobenius_loss(est.sym(), rho.sym()) / p;
                } else {
                    SymMatrix diff(p);
                    for (std::size_t k = 0; k < diff.raw().size(); ++k)
                        diff.raw()[k] = est.sym().data()[k] - rho.sym().data()[k];
                    const double s = spectral_norm(diff);
                    loss = s * s;
                }
                losses[(static_cast<std::size_t>(r) * n_alpha + a) * n_loss + l] = loss;
            }
        }
    });

    for (std::size_t a = 0; a < n_alpha; ++a) {
        for (std::size_t l = 0; l < n_loss; ++l) {
            std::vector<double> per_rep(static_cast<std::size_t>(config.replicates));
            for (int r = 0; r < config.replicates; ++r)
                per_rep[r] = losses[(static_cast<std::size_t>(r) * n_alpha + a) * n_loss + l];
            const MeanSe agg = aggregate(per_rep);
            RiskRow row;
            row.n = n;
            row.p = p;
            row.estimator = to_string(config.estimator);
            row.alpha = config.alpha_grid[a];
            row.loss = loss_name(config.losses[l]);
            row.mean = agg.mean;
            row.se = agg.se;
            row.replicates = config.replicates;
            const double denom = rate_benchmark(n, p, config.sparsity, config.losses[l]);
            row.ratio = denom > 0.0 ? agg.mean / denom : 0.0;
            rows.push_back(std::move(row));
        }
    }
}

RiskReport make_risk_report(const ExperimentConfig& config) {
    RiskReport report;
    report.experiment = to_string(config.kind);
    report.config_echo = config.to_json_text();
    report.version = version_string;
    report.assumptions = check_assumptions(config.n, config.p, config.sparsity);
    report.assumptions_ok = true;
    for (const auto& a : report.assumptions)
        if (a.checkable && !a.satisfied) report.assumptions_ok = false;
    return report;
}

} // namespace

RiskReport run_risk_sweep(const ExperimentConfig& config) {
    config.validate();
    RiskReport report = make_risk_report(config);
    sweep_cell(config, config.n, config.p, report.rows);
    return report;
}

RiskReport run_critical_threshold(const ExperimentConfig& config) {
    config.validate();
    RiskReport report = make_risk_report(config);
    sweep_cell(config, config.n, config.p, report.rows);
    const double critical = config.estimator == EstimatorKind::rho_hat
                                ? ThresholdConstants::alpha_star_rho_hat
                                : ThresholdConstants::alpha_star_frobenius;
    report.notes.push_back("critical-constant=" + format_double(critical));
    if (!std::holds_alternative<IdentityPattern>(config.model.pattern) ||
        config.model.distribution != ModelSpec::Distribution::gaussian) {
        report.notes.push_back(
            "model-is-not-the-worst-case-witness: the critical constant is derived for "
            "gaussian observations with identity correlation");
    }
    for (std::size_t i = 1; i < config.alpha_grid.size(); ++i) {
        if (config.alpha_grid[i - 1] < critical && config.alpha_grid[i] >= critical) {
            report.notes.push_back("critical-crossing-between=" +
                                   format_double(config.alpha_grid[i - 1]) + "," +
                                   format_double(config.alpha_grid[i]));
        }
    }
    return report;
}

RiskReport run_rate_check(const ExperimentConfig& config) {
    config.validate();
    RiskReport report = make_risk_report(config);
    report.assumptions.clear();
    report.assumptions_ok = true;
    for (const auto& [n, p] : config.grid) {
        auto cell_checks = check_assumptions(n, p, config.sparsity);
        for (auto& chk : cell_checks) {
            chk.name = "n=" + std::to_string(n) + ",p=" + std::to_string(p) + ":" + chk.name;
            if (chk.checkable && !chk.satisfied) report.assumptions_ok = false;
            report.assumptions.push_back(chk);
        }
        sweep_cell(config, n, p, report.rows);
        // identity baseline, exact (no sampling involved)
        ExperimentConfig cell = config;
        cell.n = n;
        cell.p = p;
        const CorrelationMatrix rho = population_correlation(cell);
        for (RiskNorm l : config.losses) {
            RiskRow row;
            row.n = n;
            row.p = p;
            row.estimator = "identity";
            row.alpha = 0.0;
            row.loss = loss_name(l);
            if (l == RiskNorm::frobenius) {
                row.mean = frobenius_loss(SymMatrix::identity(p), rho.sym()) / p;
            } else {
                SymMatrix diff(p);
                for (int i = 0; i < p; ++i)
                    for (int j = 0; j <= i; ++j)
                        diff.set(i, j, (i == j ? 1.0 : 0.0) - rho(i, j));
                const double s = spectral_norm(diff);
                row.mean = s * s;
            }
            row.se = 0.0;
            row.replicates = 0;
            const double denom = rate_benchmark(n, p, config.sparsity, l);
            row.ratio = denom > 0.0 ? row.mean / denom : 0.0;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

TailReport run_tail_experiment(const ExperimentConfig& config) {
    config.validate();
    if (config.gamma_grid.empty()) throw DomainError("tails experiment needs a gamma-grid");
    const double rho = config.model.rho;
    if (std::fabs(rho) >= 1.0) throw DomainError("pair correlation must satisfy |rho| < 1");
    const double weak_level =
        5.0 * pi / 2.0 * std::sqrt(std::log(static_cast<double>(config.p)) / config.n);
    if (std::fabs(rho) > weak_level)
        throw DomainError("tails experiment requires the weak-correlation regime");

    const int n = config.n;
    const double tau_pop = 2.0 / pi * std::asin(rho);
    const double scale = std::sqrt(std::log(static_cast<double>(config.p)) / n);
    std::vector<double> thresholds;
    thresholds.reserve(config.gamma_grid.size());
    for (double g : config.gamma_grid) thresholds.push_back(g * scale);

    const int blocks = 64; // fixed work split; counts are order-independent
    std::vector<std::vector<std::int64_t>> counts(
        static_cast<std::size_t>(blocks),
        std::vector<std::int64_t>(config.gamma_grid.size(), 0));
    const int per_block = (config.replicates + blocks - 1) / blocks;

    parallel_for(blocks, config.threads, [&](int b) {
        std::vector<double> y(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(n));
        const int lo = b * per_block;
        const int hi = std::min(config.replicates, lo + per_block);
        for (int r = lo; r < hi; ++r) {
            CounterRng rng(config.master_seed, static_cast<std::uint64_t>(r));
            for (int i = 0; i < n; ++i) {
                const double g1 = rng.next_normal();
                const double g2 = rng.next_normal();
                z[i] = g1;
                y[i] = rho * g1 + std::sqrt(1.0 - rho * rho) * g2;
            }
            const double tau_hat = kendall_tau_pair_fast(y, z);
            const double dev = std::fabs(tau_hat - tau_pop);
            for (std::size_t g = 0; g < thresholds.size(); ++g)
                if (dev >= thresholds[g]) ++counts[b][g];
        }
    });

    TailReport report;
    report.config_echo = config.to_json_text();
    report.version = version_string;
    report.assumptions = check_assumptions(config.n, config.p, config.sparsity);
    for (const auto& a : report.assumptions)
        if (a.checkable && !a.satisfied) report.assumptions_ok = false;
    for (std::size_t g = 0; g < config.gamma_grid.size(); ++g) {
        std::int64_t total = 0;
        for (int b = 0; b < blocks; ++b) total += counts[b][g];
        TailRow row;
        row.gamma = config.gamma_grid[g];
        row.t = thresholds[g];
        row.empirical = static_cast<double>(total) / config.replicates;
        row.se = std::sqrt(row.empirical * (1.0 - row.empirical) / config.replicates);
        row.exact = rho == 0.0 ? exact_tail_tau(n, row.t) : -1.0;
        row.gaussian = gaussian_tail_approx(config.gamma_grid[g], config.p);
        row.hoeffding = 2.0 * std::exp(-n * row.t * row.t / 4.0);
        report.rows.push_back(row);
    }
    return report;
}

CouplingReport run_coupling_experiment(const ExperimentConfig& config) {
    config.validate();
    const int n = config.n;
    const double sigma = config.sigma;
    const double logp = std::log(static_cast<double>(config.p));
    const double lambda = 12.0 * std::sqrt(std::fabs(sigma));
    const double c_n = lambda * n * std::sqrt(logp) /
                       ((n - 1) * std::pow(static_cast<double>(n), 0.25));
    const double threshold = c_n * std::sqrt(logp / n);
    const double tau_pop = 2.0 / pi * std::asin(sigma);

    const int blocks = 64;
    std::vector<std::int64_t> exceed(static_cast<std::size_t>(blocks), 0);
    std::vector<double> maxres(static_cast<std::size_t>(blocks), 0.0);
    std::vector<char> lattice_ok(static_cast<std::size_t>(blocks), 1);
    const int per_block = (config.replicates + blocks - 1) / blocks;

    parallel_for(blocks, config.threads, [&](int b) {
        std::vector<double> w(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(n)),
            y(static_cast<std::size_t>(n));
        const int lo = b * per_block;
        const int hi = std::min(config.replicates, lo + per_block);
        const double root = std::sqrt(1.0 - sigma * sigma);
        for (int r = lo; r < hi; ++r) {
            CounterRng rng(config.master_seed, static_cast<std::uint64_t>(r));
            for (int i = 0; i < n; ++i) {
                w[i] = rng.next_normal();
                z[i] = rng.next_normal();
                y[i] = root * w[i] + sigma * z[i];
            }
            const double tau_yz = kendall_tau_pair_fast(y, z);
            const double tau_wz = kendall_tau_pair_fast(w, z);
            const double residual = std::fabs(tau_yz - tau_pop - tau_wz);
            if (residual >= threshold) ++exceed[b];
            maxres[b] = std::max(maxres[b], residual);
            // the sign-sum part of the residual lives on the tau lattice
            const double lat = (tau_yz - tau_wz) * (static_cast<double>(n) * (n - 1) / 2.0);
            if (std::fabs(lat - std::round(lat)) > 1e-9) lattice_ok[b] = 0;
        }
    });

    CouplingReport report;
    report.sigma = sigma;
    report.sigma_cap =
        std::min(config.zeta * std::sqrt(logp / n), std::sqrt(3.0) / 2.0);
    report.lambda = lambda;
    report.threshold = threshold;
    report.replicates = config.replicates;
    std::int64_t total = 0;
    for (int b = 0; b < blocks; ++b) {
        total += exceed[b];
        report.max_residual = std::max(report.max_residual, maxres[b]);
        if (!lattice_ok[b]) report.lattice_ok = false;
    }
    report.exceed_count = static_cast<int>(total);
    report.frequency = static_cast<double>(total) / config.replicates;
    report.se = std::sqrt(report.frequency * (1.0 - report.frequency) / config.replicates);

    // union bound over the 1-factorization plus Bernstein on each matching,
    // the evaluable form of the lemma's 2 n p^{-C sqrt(log p)} bound
    const double s = lambda / 6.0 * logp * std::pow(static_cast<double>(n), 0.25);
    const double m = std::floor(n / 2.0);
    const double var = std::min(1.0, 4.0 / pi * std::fabs(sigma));
    const double per_matching = 2.0 * std::exp(-s * s / (2.0 * (m * var + s / 3.0)));
    report.bernstein_bound = std::min(1.0, n * per_matching);

    report.config_echo = config.to_json_text();
    report.version = version_string;
    report.assumptions = check_assumptions(config.n, config.p, config.sparsity);
    for (const auto& a : report.assumptions)
        if (a.checkable && !a.satisfied) report.assumptions_ok = false;
    return report;
}

// --- serialization ----------------------------------------------------------

namespace {

ordered_json assumptions_json(const std::vector<AssumptionCheck>& assumptions) {
    ordered_json checks = ordered_json::array();
    for (const auto& a : assumptions) {
        checks.push_back(ordered_json{{"name", a.name},
                                      {"checkable", a.checkable},
                                      {"satisfied", a.satisfied},
                                      {"detail", a.detail}});
    }
    return checks;
}

} // namespace

std::string RiskReport::csv() const {
    std::string out = "experiment,n,p,estimator,alpha,loss,mean,se,replicates,ratio\n";
    for (const auto& row : rows) {
        out += experiment + "," + std::to_string(row.n) + "," + std::to_string(row.p) + "," +
               row.estimator + "," + format_double(row.alpha) + "," + row.loss + "," +
               format_double(row.mean) + "," + format_double(row.se) + "," +
               std::to_string(row.replicates) + "," + format_double(row.ratio) + "\n";
    }
    return out;
}

std::string RiskReport::metadata_json() const {
    ordered_json j;
    j["version"] = version;
    j["experiment"] = experiment;
    j["assumptions-ok"] = assumptions_ok;
    j["assumptions"] = assumptions_json(assumptions);
    j["notes"] = notes;
    j["config"] = ordered_json::parse(config_echo);
    return j.dump(2);
}

std::string TailReport::csv() const {
    std::string out = "gamma,t,empirical,se,exact,gaussian,hoeffding\n";
    for (const auto& row : rows) {
        out += format_double(row.gamma) + "," + format_double(row.t) + "," +
               format_double(row.empirical) + "," + format_double(row.se) + ",";
        if (row.exact >= 0.0) out += format_double(row.exact);
        out += "," + format_double(row.gaussian) + "," + format_double(row.hoeffding) + "\n";
    }
    return out;
}

std::string TailReport::metadata_json() const {
    ordered_json j;
    j["version"] = version;
    j["experiment"] = "tails";
    j["assumptions-ok"] = assumptions_ok;
    j["assumptions"] = assumptions_json(assumptions);
    j["config"] = ordered_json::parse(config_echo);
    return j.dump(2);
}

std::string CouplingReport::csv() const {
    std::string out =
        "sigma,sigma_cap,lambda,threshold,exceed_count,replicates,frequency,se,"
        "bernstein_bound,max_residual,lattice_ok\n";
    out += format_double(sigma) + "," + format_double(sigma_cap) + "," + format_double(lambda) +
           "," + format_double(threshold) + "," + std::to_string(exceed_count) + "," +
           std::to_string(replicates) + "," + format_double(frequency) + "," + format_double(se) +
           "," + format_double(bernstein_bound) + "," + format_double(max_residual) + "," +
           (lattice_ok ? "1" : "0") + "\n";
    return out;
}

std::string CouplingReport::metadata_json() const {
    ordered_json j;
    j["version"] = version;
    j["experiment"] = "coupling";
    j["assumptions-ok"] = assumptions_ok;
    j["assumptions"] = assumptions_json(assumptions);
    j["config"] = ordered_json::parse(config_echo);
    return j.dump(2);
}

} // namespace tauthresh
