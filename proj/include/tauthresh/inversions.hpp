#pragma once

#include "tauthresh/bigint.hpp"

#include <cstdint>
#include <vector>

namespace tauthresh {

// Distribution of the inversion count of a uniform random permutation of
// {1..n}; support 0..n(n-1)/2, symmetric about its mean n(n-1)/4.
struct MahonianPMF {
    enum class Mode { exact_integer, floating };

    int n = 0;
    std::int64_t support_max = 0; // n(n-1)/2
    Mode mode = Mode::floating;
    std::vector<double> probs;    // floating mode, sums to 1
    std::vector<BigUint> counts;  // exact mode, sums to n!

    double mean() const { return static_cast<double>(support_max) / 2.0; }
};

inline constexpr int mahonian_exact_max_n = 200;
inline constexpr int mahonian_float_max_n = 3000;

MahonianPMF mahonian_pmf(int n, MahonianPMF::Mode mode);

// Incremental float-mode DP: one factor of the inversion generating
// function per step, renormalized so the coefficients stay a pmf. Lets a
// caller sweep every n up to a bound in a single O(n^3) pass.
class MahonianFloatDp {
public:
    MahonianFloatDp(); // starts at n = 1, pmf {1}
    void extend();     // n -> n+1
    int n() const { return n_; }
    const std::vector<long double>& coefficients() const { return coeff_; }
    std::vector<double> pmf() const;

private:
    int n_ = 1;
    std::vector<long double> coeff_;
};

// Exact law of tau-hat under independent continuous marginals:
// value(k) = 1 - 4k/(n(n-1)) carries the Mahonian mass of k inversions.
struct TauPmf {
    int n = 0;
    std::vector<double> values;
    std::vector<double> probs;
};

TauPmf tau_pmf_from_inversions(int n);

// P(|tau_hat| >= t) under independence, exact over the Mahonian pmf
double exact_tail_tau(int n, double t);
double exact_tail_tau(const MahonianPMF& pmf, double t);

// 12 (2 pi)^{-1/2} n^{-3/2} exp(-18 l^2 / n^3)
double clark_leading_term(int n, double l);

// 2 (1 - Phi(1.5 gamma sqrt(log p)))
double gaussian_tail_approx(double gamma, int p_dim);

struct TailComparisonRow {
    double gamma = 0.0;
    double t = 0.0;          // gamma * sqrt(log p / n)
    double exact = 0.0;      // exact_tail_tau
    double gaussian = 0.0;   // gaussian_tail_approx
    double hoeffding = 0.0;  // 2 exp(-n t^2 / 4)
    double exact_over_gaussian = 0.0;
    double exact_over_hoeffding = 0.0;
};

std::vector<TailComparisonRow> tail_comparison(int n, int p_dim,
                                               const std::vector<double>& gamma_grid);

} // namespace tauthresh
