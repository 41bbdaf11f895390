#include "tauthresh/errors.hpp"
#include "tauthresh/experiments.hpp"
#include "tauthresh/inversions.hpp"
#include "tauthresh/kendall.hpp"
#include "tauthresh/linalg.hpp"

#include <doctest.h>

#include <cmath>

using namespace tauthresh;

namespace {

ExperimentConfig small_sweep_config() {
    ExperimentConfig c;
    c.kind = ExperimentKind::sweep;
    c.n = 30;
    c.p = 12;
    c.model.pattern = IdentityPattern{};
    c.sparsity.q = 0.0;
    c.sparsity.c = 1.0;
    c.estimator = EstimatorKind::rho_star;
    c.alpha_grid = {0.0, 0.8, 5.0};
    c.replicates = 6;
    c.master_seed = 99;
    c.threads = 2;
    return c;
}

} // namespace

TEST_CASE("config json round trip and validation") {
    ExperimentConfig c = small_sweep_config();
    const std::string text = c.to_json_text();
    const ExperimentConfig back = ExperimentConfig::from_json_text(text);
    CHECK(back.to_json_text() == text);
    CHECK(back.n == c.n);
    CHECK(back.alpha_grid == c.alpha_grid);
    CHECK(back.master_seed == c.master_seed);

    CHECK_THROWS_AS(ExperimentConfig::from_json_text("{\"kind\":\"sweep\",\"n\":30,\"p\":12,"
                                                     "\"bogus\":1}"),
                    DomainError);
    ExperimentConfig bad = c;
    bad.alpha_grid = {1.0, 0.5};
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = c;
    bad.replicates = 0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("risk sweep determinism across runs and thread counts") {
    ExperimentConfig c = small_sweep_config();
    const RiskReport a = run_risk_sweep(c);
    const RiskReport b = run_risk_sweep(c);
    CHECK(a.csv() == b.csv());
    CHECK(a.metadata_json() == b.metadata_json());

    ExperimentConfig single = c;
    single.threads = 1;
    const RiskReport s = run_risk_sweep(single);
    CHECK(s.csv() == a.csv()); // thread count does not enter the numbers
}

TEST_CASE("risk sweep reconstructed by hand from replicate seeds") {
    ExperimentConfig c = small_sweep_config();
    c.alpha_grid = {0.8};
    c.replicates = 3;
    const RiskReport report = run_risk_sweep(c);
    REQUIRE(report.rows.size() == 1);

    const CorrelationMatrix rho = population_correlation(c);
    double acc = 0.0;
    for (int r = 0; r < c.replicates; ++r) {
        const EllipticalSpec spec(std::vector<double>(c.p, 0.0), rho.sym(), RadialGaussianChi{});
        const SampleMatrix x = sample_gaussian(spec, c.n, replicate_seed(c.master_seed, r));
        const CorrelationMatrix tau_hat = kendall_tau_matrix(x, 1);
        const CorrelationMatrix est = estimate(tau_hat, {c.estimator, 0.8}, c.n, c.p);
        acc += frobenius_loss(est.sym(), rho.sym()) / c.p;
    }
    CHECK(report.rows[0].mean == doctest::Approx(acc / 3.0).epsilon(1e-15));
}

TEST_CASE("identity truth with huge alpha has exactly zero risk") {
    ExperimentConfig c = small_sweep_config();
    c.alpha_grid = {50.0};
    const RiskReport report = run_risk_sweep(c);
    CHECK(report.rows[0].mean == 0.0);
    CHECK(report.rows[0].se == 0.0);
}

TEST_CASE("alpha zero risk matches the exact pmf expectation at small n") {
    // (1/p) E||sin(pi/2 tau_hat) - Id||_F^2 = (p-1) E sin^2(pi/2 tau_12)
    ExperimentConfig c = small_sweep_config();
    c.n = 6;
    c.p = 5;
    c.alpha_grid = {0.0};
    c.replicates = 3000;
    const RiskReport report = run_risk_sweep(c);

    const TauPmf pmf = tau_pmf_from_inversions(c.n);
    double expect_entry = 0.0;
    for (std::size_t k = 0; k < pmf.probs.size(); ++k) {
        const double s = std::sin(3.14159265358979323846 / 2.0 * pmf.values[k]);
        expect_entry += s * s * pmf.probs[k];
    }
    const double expect = (c.p - 1) * expect_entry;
    CHECK(report.rows[0].mean == doctest::Approx(expect).epsilon(0.05));
    CHECK(std::fabs(report.rows[0].mean - expect) <= 5.0 * report.rows[0].se);
}

TEST_CASE("model outside the sparsity class is rejected before sampling") {
    ExperimentConfig c = small_sweep_config();
    c.model.pattern = BandedPattern{1, 0.4};
    c.sparsity.q = 0.0;
    c.sparsity.c = 1.0; // banded rows carry 2 entries
    CHECK_THROWS_AS(run_risk_sweep(c), InfeasibleModelError);
}

TEST_CASE("critical threshold report carries the constant annotation") {
    ExperimentConfig c = small_sweep_config();
    c.kind = ExperimentKind::critical;
    c.alpha_grid = {0.5, 1.1};
    const RiskReport report = run_critical_threshold(c);
    bool has_constant = false, has_crossing = false;
    for (const auto& note : report.notes) {
        if (note.find("critical-constant=") != std::string::npos) has_constant = true;
        if (note.find("critical-crossing-between=") != std::string::npos) has_crossing = true;
    }
    CHECK(has_constant);
    CHECK(has_crossing);
}

TEST_CASE("rate check emits identity baselines and grid rows") {
    ExperimentConfig c = small_sweep_config();
    c.kind = ExperimentKind::rate_check;
    c.grid = {{20, 8}, {40, 8}};
    c.alpha_grid = {2.1};
    c.replicates = 3;
    const RiskReport report = run_rate_check(c);
    int identity_rows = 0, star_rows = 0;
    for (const auto& row : report.rows) {
        if (row.estimator == "identity") {
            ++identity_rows;
            CHECK(row.ratio == 0.0); // truth is the identity here
        } else {
            ++star_rows;
        }
    }
    CHECK(identity_rows == 2);
    CHECK(star_rows == 2);
}

TEST_CASE("tail experiment matches the exact law under independence") {
    ExperimentConfig c;
    c.kind = ExperimentKind::tails;
    c.n = 8;
    c.p = 40;
    c.model.rho = 0.0;
    c.gamma_grid = {0.5, 1.0};
    c.replicates = 40000;
    c.master_seed = 5;
    c.threads = 2;
    const TailReport report = run_tail_experiment(c);
    REQUIRE(report.rows.size() == 2);
    for (const auto& row : report.rows) {
        CHECK(row.exact >= 0.0);
        CHECK(std::fabs(row.empirical - row.exact) <= 4.0 * std::max(row.se, 1e-4));
        CHECK(row.empirical <= row.hoeffding + 4.0 * std::max(row.se, 1e-4));
    }
    // deterministic
    CHECK(run_tail_experiment(c).csv() == report.csv());

    // strong correlation rejected
    ExperimentConfig strong = c;
    strong.n = 100000;
    strong.p = 10;
    strong.replicates = 10;
    strong.model.rho = 0.5;
    CHECK_THROWS_AS(run_tail_experiment(strong), DomainError);
}

TEST_CASE("coupling experiment") {
    ExperimentConfig c;
    c.kind = ExperimentKind::coupling;
    c.n = 40;
    c.p = 200;
    c.sigma = 0.0;
    c.zeta = 1.0;
    c.replicates = 300;
    c.master_seed = 17;
    c.threads = 2;
    const CouplingReport zero = run_coupling_experiment(c);
    CHECK(zero.max_residual == 0.0); // Y == W when sigma = 0
    CHECK(zero.lattice_ok);

    ExperimentConfig at_cap = c;
    at_cap.sigma = std::min(std::sqrt(std::log(200.0) / 40.0), std::sqrt(3.0) / 2.0);
    const CouplingReport cap = run_coupling_experiment(at_cap);
    CHECK(cap.lattice_ok);
    CHECK(cap.frequency <= cap.bernstein_bound + 4.0 * std::max(cap.se, 1e-3));
    CHECK(cap.max_residual > 0.0);
    CHECK(run_coupling_experiment(at_cap).csv() == cap.csv());

    ExperimentConfig over = c;
    over.sigma = 0.95;
    CHECK_THROWS_AS(run_coupling_experiment(over), DomainError);
}

TEST_CASE("elliptical pareto model runs through the sweep") {
    ExperimentConfig c = small_sweep_config();
    c.model.distribution = ModelSpec::Distribution::elliptical_pareto;
    c.model.pareto_tail = 2.5;
    c.replicates = 4;
    c.alpha_grid = {0.8};
    const RiskReport report = run_risk_sweep(c);
    CHECK(report.rows.size() == 1);
    CHECK(report.rows[0].mean > 0.0);
    CHECK(std::isfinite(report.rows[0].mean));
    // echo round-trips the distribution tag
    const ExperimentConfig back = ExperimentConfig::from_json_text(c.to_json_text());
    CHECK(back.model.distribution == ModelSpec::Distribution::elliptical_pareto);
    CHECK(back.model.pareto_tail == 2.5);
}

TEST_CASE("reports embed the version and the full config echo") {
    ExperimentConfig c = small_sweep_config();
    c.replicates = 2;
    c.alpha_grid = {1.0};
    const RiskReport report = run_risk_sweep(c);
    CHECK(report.version == std::string("tauthresh 0.1.0"));
    CHECK(report.metadata_json().find("tauthresh 0.1.0") != std::string::npos);
    CHECK(report.metadata_json().find("\"master-seed\": 99") != std::string::npos);
}

TEST_CASE("spectral loss path in the sweep") {
    ExperimentConfig c = small_sweep_config();
    c.p = 8;
    c.replicates = 3;
    c.alpha_grid = {0.8};
    c.losses = {RiskNorm::frobenius, RiskNorm::spectral};
    const RiskReport report = run_risk_sweep(c);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].loss == "frobenius");
    CHECK(report.rows[1].loss == "spectral");
    CHECK(report.rows[1].mean > 0.0);
    CHECK(std::isfinite(report.rows[1].ratio));
}

TEST_CASE("coupled alpha sweep means are monotone for identity truth") {
    ExperimentConfig c = small_sweep_config();
    c.alpha_grid = {0.3, 0.6, 1.0, 2.0};
    c.replicates = 10;
    const RiskReport report = run_risk_sweep(c);
    REQUIRE(report.rows.size() == 4);
    for (std::size_t i = 1; i < report.rows.size(); ++i)
        CHECK(report.rows[i].mean <= report.rows[i - 1].mean + 1e-15);
}

TEST_CASE("config out field round trips and reports carry assumptions") {
    ExperimentConfig c;
    c.kind = ExperimentKind::tails;
    c.n = 8;
    c.p = 40;
    c.gamma_grid = {1.0};
    c.replicates = 50;
    c.out = "some/dir";
    const ExperimentConfig back = ExperimentConfig::from_json_text(c.to_json_text());
    CHECK(back.out == "some/dir");
    const TailReport report = run_tail_experiment(back);
    CHECK(report.metadata_json().find("assumptions") != std::string::npos);
}
