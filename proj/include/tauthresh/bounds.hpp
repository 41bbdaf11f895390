#pragma once

#include "tauthresh/sym_matrix.hpp"

namespace tauthresh {

// Critical threshold constants for the two estimators and the spectral
// bracket, kept in closed form.
struct ThresholdConstants {
    static constexpr double alpha_star_frobenius = 0.94280904158206336587; // 2 sqrt(2) / 3
    static constexpr double alpha_star_rho_hat = 1.48096097938612208234;   // sqrt(2) pi / 3
    static constexpr double spectral_lower = alpha_star_frobenius;         // 2 sqrt(2) / 3
    static constexpr double spectral_upper = 4.0 / 3.0;
    static constexpr double elliptical_lower = alpha_star_frobenius;
    static constexpr double elliptical_upper = 2.0;
};

// 2 exp(-n t^2 / 4); vacuous (flagged) when the formula exceeds 1
struct TailBound {
    double value = 0.0;
    bool vacuous = false;
};
TailBound hoeffding_tail_bound(int n, double t);

// epsilon of the event-B probability bound: requires alpha > 2 and
// beta > (alpha+2)/(alpha-2)
double lareve_epsilon(double alpha, double beta);

// |tau_star - tau| <= beta * min(|tau|, alpha sqrt(log p / n))
bool event_B_holds(double tau_star_entry, double tau_entry, double alpha, double beta, int n,
                   int p_dim);

// |rho| >= (5 pi / 2) sqrt(log p / n)
bool strong_correlation_flag(double rho, int n, int p_dim);

// Gaussian mixture affinity int g1 g2 / g0 =
// [det(S0^{-1}(S2 + S1 - S2 S0^{-1} S1))]^{-1/2}; requires S0, S1, S2 and
// S1^{-1} + S2^{-1} - S0^{-1} positive definite
double gaussian_mixture_affinity(const SymMatrix& s0, const SymMatrix& s1, const SymMatrix& s2);

enum class RiskNorm { frobenius, spectral };

// Minimax rate expression without its unknown constant:
//   frobenius: c (c^{2/q} ^ log p / n)^{1-q/2}
//   spectral:  c^2 (c^{2/q} ^ log p / n)^{1-q}
// with c^{2/q} read as +infinity at q = 0.
double rate_benchmark(int n, int p_dim, const SparsityClassParams& params, RiskNorm norm);

} // namespace tauthresh
