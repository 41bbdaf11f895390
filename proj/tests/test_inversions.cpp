#include "tauthresh/errors.hpp"
#include "tauthresh/inversions.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace tauthresh;

TEST_CASE("mahonian counts for small n") {
    const MahonianPMF m2 = mahonian_pmf(2, MahonianPMF::Mode::exact_integer);
    CHECK(m2.counts.size() == 2);
    CHECK(m2.counts[0] == BigUint(1));
    CHECK(m2.counts[1] == BigUint(1));

    const MahonianPMF m3 = mahonian_pmf(3, MahonianPMF::Mode::exact_integer);
    const std::vector<std::uint64_t> expect3{1, 2, 2, 1};
    for (std::size_t k = 0; k < expect3.size(); ++k)
        CHECK(m3.counts[k] == BigUint(expect3[k]));

    const MahonianPMF m4 = mahonian_pmf(4, MahonianPMF::Mode::exact_integer);
    const std::vector<std::uint64_t> expect4{1, 3, 5, 6, 5, 3, 1};
    CHECK(m4.counts.size() == 7);
    for (std::size_t k = 0; k < expect4.size(); ++k)
        CHECK(m4.counts[k] == BigUint(expect4[k]));

    // enumeration oracle up to n = 8
    for (int n = 2; n <= 8; ++n) {
        const auto hist = testutil::enumerate_inversion_counts(n);
        const MahonianPMF m = mahonian_pmf(n, MahonianPMF::Mode::exact_integer);
        REQUIRE(m.counts.size() == hist.size());
        for (std::size_t k = 0; k < hist.size(); ++k) CHECK(m.counts[k] == BigUint(hist[k]));
    }
}

TEST_CASE("mahonian invariants") {
    for (int n : {5, 17, 60}) {
        const MahonianPMF exact = mahonian_pmf(n, MahonianPMF::Mode::exact_integer);
        BigUint total;
        for (const auto& c : exact.counts) total += c;
        CHECK(total == BigUint::factorial(static_cast<unsigned>(n)));
        // symmetry, exact
        const std::size_t size = exact.counts.size();
        for (std::size_t k = 0; k < size; ++k)
            CHECK(exact.counts[k] == exact.counts[size - 1 - k]);
    }
    for (int n : {5, 40, 300}) {
        const MahonianPMF fl = mahonian_pmf(n, MahonianPMF::Mode::floating);
        double total = 0.0;
        for (double p : fl.probs) total += p;
        CHECK(std::fabs(total - 1.0) <= 1e-12);
        double mean = 0.0;
        for (std::size_t k = 0; k < fl.probs.size(); ++k) mean += static_cast<double>(k) * fl.probs[k];
        const double expect_mean = static_cast<double>(n) * (n - 1) / 4.0;
        CHECK(mean == doctest::Approx(expect_mean).epsilon(1e-9));
        const std::size_t size = fl.probs.size();
        for (std::size_t k = 0; k < size; ++k)
            CHECK(fl.probs[k] == doctest::Approx(fl.probs[size - 1 - k]).epsilon(1e-12));
    }
    // variance for n <= 8 against brute force
    for (int n = 3; n <= 8; ++n) {
        const auto hist = testutil::enumerate_inversion_counts(n);
        double fact = 1.0;
        for (int i = 2; i <= n; ++i) fact *= i;
        double mean = 0.0, moment2 = 0.0;
        for (std::size_t k = 0; k < hist.size(); ++k) {
            mean += static_cast<double>(k) * hist[k] / fact;
            moment2 += static_cast<double>(k) * k * hist[k] / fact;
        }
        const double var_oracle = moment2 - mean * mean;
        const MahonianPMF fl = mahonian_pmf(n, MahonianPMF::Mode::floating);
        double m1 = 0.0, m2v = 0.0;
        for (std::size_t k = 0; k < fl.probs.size(); ++k) {
            m1 += static_cast<double>(k) * fl.probs[k];
            m2v += static_cast<double>(k) * k * fl.probs[k];
        }
        CHECK(m2v - m1 * m1 == doctest::Approx(var_oracle).epsilon(1e-12));
        // known closed form n(n-1)(2n+5)/72
        CHECK(var_oracle ==
              doctest::Approx(n * (n - 1.0) * (2.0 * n + 5.0) / 72.0).epsilon(1e-12));
    }
}

TEST_CASE("float mode tracks exact mode to 1e-10") {
    for (int n : {10, 60, 200}) {
        const MahonianPMF exact = mahonian_pmf(n, MahonianPMF::Mode::exact_integer);
        const MahonianPMF fl = mahonian_pmf(n, MahonianPMF::Mode::floating);
        const long double fact = BigUint::factorial(static_cast<unsigned>(n)).to_long_double();
        for (std::size_t k = 0; k < fl.probs.size(); ++k) {
            const long double ref = exact.counts[k].to_long_double() / fact;
            if (ref < 1e-290L) {
                // below double range: only require underflow-consistent output
                CHECK(fl.probs[k] <= 1e-290);
                continue;
            }
            CHECK(std::fabs(static_cast<double>(fl.probs[k] / ref - 1.0L)) <= 1e-10);
        }
    }
}

TEST_CASE("mode budgets") {
    CHECK_THROWS_AS(mahonian_pmf(201, MahonianPMF::Mode::exact_integer), DomainError);
    CHECK_THROWS_AS(mahonian_pmf(3001, MahonianPMF::Mode::floating), DomainError);
    CHECK_THROWS_AS(mahonian_pmf(0, MahonianPMF::Mode::floating), DomainError);
}

TEST_CASE("tau pmf from inversions") {
    const TauPmf t2 = tau_pmf_from_inversions(2);
    REQUIRE(t2.values.size() == 2);
    CHECK(t2.values[0] == 1.0);
    CHECK(t2.values[1] == -1.0);
    CHECK(t2.probs[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t2.probs[1] == doctest::Approx(0.5).epsilon(1e-15));

    const TauPmf t3 = tau_pmf_from_inversions(3);
    REQUIRE(t3.values.size() == 4);
    CHECK(t3.values[0] == doctest::Approx(1.0));
    CHECK(t3.values[1] == doctest::Approx(1.0 / 3.0));
    CHECK(t3.values[2] == doctest::Approx(-1.0 / 3.0));
    CHECK(t3.values[3] == doctest::Approx(-1.0));
    CHECK(t3.probs[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(t3.probs[1] == doctest::Approx(2.0 / 6.0).epsilon(1e-14));
    CHECK(t3.probs[2] == doctest::Approx(2.0 / 6.0).epsilon(1e-14));
    CHECK(t3.probs[3] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

    const TauPmf t5 = tau_pmf_from_inversions(5);
    CHECK(t5.probs.front() == doctest::Approx(1.0 / 120.0).epsilon(1e-13));

    // mean zero by symmetry
    double mean = 0.0;
    for (std::size_t k = 0; k < t5.probs.size(); ++k) mean += t5.values[k] * t5.probs[k];
    CHECK(std::fabs(mean) < 1e-15);
}

TEST_CASE("exact_tail_tau") {
    CHECK(exact_tail_tau(3, 0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(exact_tail_tau(3, 1.0) == doctest::Approx(2.0 / 6.0).epsilon(1e-14));
    CHECK(exact_tail_tau(6, 1.0) == doctest::Approx(2.0 / 720.0).epsilon(1e-12));
    CHECK(exact_tail_tau(6, 1.0001) == 0.0);
    CHECK_THROWS_AS(exact_tail_tau(6, 0.0), DomainError);

    // nonincreasing step function with jumps exactly at the support
    const int n = 7;
    const TauPmf pmf = tau_pmf_from_inversions(n);
    const double lattice = 4.0 / (n * (n - 1.0));
    double prev = 0.0; // tail grows as the threshold walks down the support
    for (double v : pmf.values) {
        if (v <= 0.0) break;
        const double at = exact_tail_tau(n, v);
        const double above = exact_tail_tau(n, v + lattice / 2.0);
        const double below = exact_tail_tau(n, std::max(v - lattice / 2.0, 1e-12));
        CHECK(at >= prev - 1e-15);
        CHECK(above < at);      // jump exactly at the support point
        CHECK(below >= at);
        prev = at;
    }
}

TEST_CASE("clark leading term") {
    const double at0 = clark_leading_term(100, 0.0);
    CHECK(at0 == doctest::Approx(12.0 / (std::sqrt(2.0 * 3.14159265358979323846) * 1000.0))
                     .epsilon(1e-15));
    CHECK(at0 == doctest::Approx(4.787e-3).epsilon(1e-3));
    CHECK(clark_leading_term(100, 1e9) == 0.0);
    const double n500 = std::pow(500.0, 1.5) / 6.0;
    CHECK(clark_leading_term(500, n500) / clark_leading_term(500, 0.0) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    // strictly positive, decreasing in |l|
    CHECK(clark_leading_term(50, 10.0) > clark_leading_term(50, 20.0));
}

TEST_CASE("gaussian_tail_approx") {
    CHECK(gaussian_tail_approx(1e-14, 1000) == doctest::Approx(1.0).epsilon(1e-10));
    // quadrature oracle for 2(1 - Phi(x)) at gamma = 1, p = 1000
    const double x = 1.5 * std::sqrt(std::log(1000.0));
    auto phi = [](double t) {
        return std::exp(-t * t / 2.0) / std::sqrt(2.0 * 3.14159265358979323846);
    };
    const double tail_oracle = 2.0 * testutil::simpson(phi, x, x + 14.0, 40000);
    CHECK(gaussian_tail_approx(1.0, 1000) == doctest::Approx(tail_oracle).epsilon(1e-6));
    CHECK(gaussian_tail_approx(1.0, 1000) == doctest::Approx(8.07e-5).epsilon(0.02));
    // doubling gamma doubles the Phi argument
    const double big = gaussian_tail_approx(2.0, 1000);
    CHECK(big == doctest::Approx(std::erfc(2.0 * x / std::sqrt(2.0))).epsilon(1e-14));
    // decreasing in gamma and p
    CHECK(gaussian_tail_approx(1.2, 1000) < gaussian_tail_approx(1.0, 1000));
    CHECK(gaussian_tail_approx(1.0, 2000) < gaussian_tail_approx(1.0, 1000));
}

TEST_CASE("tail comparison table") {
    const auto rows = tail_comparison(200, 1000, {0.6, 1.0, 1.5, 3.0});
    for (const auto& row : rows) {
        CHECK(row.exact <= row.hoeffding * (1.0 + 1e-12));
        CHECK(row.exact >= 0.0);
    }
    CHECK(rows.back().exact < 1e-10); // gamma huge -> everything tiny
    CHECK(rows.back().gaussian < 1e-10);
}

TEST_CASE("clark bulk accuracy spot check at n = 200") {
    const MahonianPMF pmf = mahonian_pmf(200, MahonianPMF::Mode::floating);
    const int n = 200;
    const double mean = pmf.mean(); // integer for n = 200
    const std::int64_t center = static_cast<std::int64_t>(mean);
    REQUIRE(mean == static_cast<double>(center));
    const double lmax = std::sqrt(std::log(static_cast<double>(n)) * n * n * n / 36.0);
    for (std::int64_t l = 0; l <= static_cast<std::int64_t>(lmax); l += 97) {
        double two_sided;
        if (l == 0) {
            two_sided = 2.0 * pmf.probs[static_cast<std::size_t>(center)];
        } else {
            two_sided = pmf.probs[static_cast<std::size_t>(center + l)] +
                        pmf.probs[static_cast<std::size_t>(center - l)];
        }
        const double ratio = two_sided / clark_leading_term(n, static_cast<double>(l));
        CHECK(std::fabs(ratio - 1.0) <= 0.1);
    }
}
