#include "tauthresh/errors.hpp"
#include "tauthresh/estimators.hpp"
#include "tauthresh/linalg.hpp"
#include "tauthresh/rng.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace tauthresh;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("estimator kinds and spec validation") {
    CHECK(estimator_kind_from_string("rho-star") == EstimatorKind::rho_star);
    CHECK(estimator_kind_from_string("rho-hat") == EstimatorKind::rho_hat);
    CHECK(estimator_kind_from_string("identity") == EstimatorKind::identity);
    CHECK_THROWS_AS(estimator_kind_from_string("ols"), DomainError);
    CHECK(to_string(EstimatorKind::rho_hat) == "rho-hat");
    EstimatorSpec bad{EstimatorKind::rho_star, -0.1};
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("estimate basic behavior") {
    CounterRng rng(61, 0);
    const CorrelationMatrix tau = testutil::random_correlation(rng, 6, 0.6);
    const int n = 100, p = 500;

    // alpha = 0: rho_star equals the sine transform (strict > keeps nonzeros)
    const CorrelationMatrix star0 = estimate(tau, {EstimatorKind::rho_star, 0.0}, n, p);
    const CorrelationMatrix sine = sine_transform(tau);
    CHECK(star0 == sine);

    // tau = Id -> both estimators return Id
    const CorrelationMatrix id = CorrelationMatrix::identity(6);
    CHECK(estimate(id, {EstimatorKind::rho_star, 0.7}, n, p) == id);
    CHECK(estimate(id, {EstimatorKind::rho_hat, 0.7}, n, p) == id);

    // huge alpha -> identity
    CHECK(estimate(tau, {EstimatorKind::rho_star, 1e6}, n, p) == id);
    CHECK(estimate(tau, {EstimatorKind::rho_hat, 1e6}, n, p) == id);

    CHECK(estimate(tau, {EstimatorKind::identity, 0.3}, n, p) == id);
}

TEST_CASE("zero set equivalence for rho_hat") {
    CounterRng rng(62, 0);
    const int n = 100, p = 500;
    for (int rep = 0; rep < 50; ++rep) {
        const CorrelationMatrix tau = testutil::random_correlation(rng, 5, 0.9);
        for (double alpha : {0.3, 0.9, 1.5, 4.0, 30.0}) {
            const CorrelationMatrix out = estimate(tau, {EstimatorKind::rho_hat, alpha}, n, p);
            const double level = alpha * std::sqrt(std::log(static_cast<double>(p)) / n);
            const double tau_level = 2.0 / pi * std::asin(std::min(level, 1.0));
            for (int i = 0; i < 5; ++i) {
                for (int j = 0; j < i; ++j) {
                    const bool zero = out(i, j) == 0.0;
                    const bool predicted = std::fabs(tau(i, j)) <= tau_level;
                    CHECK(zero == predicted);
                }
            }
        }
    }
}

TEST_CASE("rho_hat matches rho_star at the arcsin-adjusted constant") {
    CounterRng rng(63, 0);
    const int n = 100, p = 500;
    const double scale = std::sqrt(std::log(static_cast<double>(p)) / n);
    for (int rep = 0; rep < 30; ++rep) {
        const CorrelationMatrix tau = testutil::random_correlation(rng, 6, 0.9);
        for (double alpha : {0.5, 1.0, 2.0, 4.5}) {
            const double u = std::min(alpha * scale, 1.0);
            const double lambda = u > 0.0 ? std::asin(u) / u : 1.0; // in [1, pi/2]
            CHECK(lambda >= 1.0 - 1e-12);
            CHECK(lambda <= pi / 2.0 + 1e-12);
            const double alpha_bar = 2.0 / pi * alpha * lambda;
            CHECK(alpha_bar >= 2.0 / pi * alpha - 1e-12);
            CHECK(alpha_bar <= alpha + 1e-12);
            const CorrelationMatrix hat = estimate(tau, {EstimatorKind::rho_hat, alpha}, n, p);
            const CorrelationMatrix star =
                estimate(tau, {EstimatorKind::rho_star, alpha_bar}, n, p);
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < i; ++j)
                    CHECK((hat(i, j) == 0.0) == (star(i, j) == 0.0));
        }
    }
}

TEST_CASE("estimators are odd in tau and preserve the diagonal") {
    CounterRng rng(64, 0);
    const int n = 80, p = 300;
    const CorrelationMatrix tau = testutil::random_correlation(rng, 7, 0.8);
    SymMatrix neg = SymMatrix::identity(7);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < i; ++j) neg.set(i, j, -tau(i, j));
    const CorrelationMatrix tau_neg = CorrelationMatrix::from_sym(std::move(neg));
    for (EstimatorKind kind : {EstimatorKind::rho_star, EstimatorKind::rho_hat}) {
        const CorrelationMatrix a = estimate(tau, {kind, 0.8}, n, p);
        const CorrelationMatrix b = estimate(tau_neg, {kind, 0.8}, n, p);
        for (int i = 0; i < 7; ++i) {
            CHECK(a(i, i) == 1.0);
            for (int j = 0; j < i; ++j) CHECK(b(i, j) == -a(i, j));
        }
    }
}

TEST_CASE("thresholded estimators never raise the weak-lq radius of the sine") {
    CounterRng rng(65, 0);
    const int n = 100, p = 400;
    for (int rep = 0; rep < 20; ++rep) {
        const CorrelationMatrix tau = testutil::random_correlation(rng, 6, 0.9);
        const CorrelationMatrix sine = sine_transform(tau);
        for (double alpha : {0.2, 1.0, 3.0}) {
            for (EstimatorKind kind : {EstimatorKind::rho_star, EstimatorKind::rho_hat}) {
                const CorrelationMatrix est = estimate(tau, {kind, alpha}, n, p);
                for (double q : {0.4, 0.7}) {
                    CHECK(weak_lq_radius(est, q) <= weak_lq_radius(sine, q) * (1.0 + 1e-12));
                }
            }
        }
    }
}

TEST_CASE("population_rho_from_tau") {
    SymMatrix t = SymMatrix::identity(3);
    t.set(0, 1, 1.0 / 3.0);
    const CorrelationMatrix tau = CorrelationMatrix::from_sym(std::move(t));
    const CorrelationMatrix rho = population_rho_from_tau(tau);
    CHECK(rho(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(population_rho_from_tau(CorrelationMatrix::identity(4)) ==
          CorrelationMatrix::identity(4));

    // arcsin round trip to 1e-14
    CounterRng rng(66, 0);
    for (int rep = 0; rep < 20; ++rep) {
        const CorrelationMatrix tt = testutil::random_correlation(rng, 5, 1.0);
        const CorrelationMatrix rr = population_rho_from_tau(tt);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < i; ++j) {
                const double back = 2.0 / pi * std::asin(rr(i, j));
                CHECK(std::fabs(back - tt(i, j)) <= 1e-14);
            }
    }
}
