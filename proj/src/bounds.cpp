#include "tauthresh/bounds.hpp"

#include "tauthresh/errors.hpp"
#include "tauthresh/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tauthresh {

TailBound hoeffding_tail_bound(int n, double t) {
    if (n < 2) throw DomainError("hoeffding_tail_bound requires n >= 2");
    if (!(t > 0.0)) throw DomainError("hoeffding_tail_bound requires t > 0");
    TailBound out;
    out.value = 2.0 * std::exp(-n * t * t / 4.0);
    out.vacuous = out.value > 1.0;
    return out;
}

double lareve_epsilon(double alpha, double beta) {
    if (!(alpha > 2.0)) throw DomainError("lareve_epsilon requires alpha > 2");
    if (!(beta > (alpha + 2.0) / (alpha - 2.0)))
        throw DomainError("lareve_epsilon requires beta > (alpha+2)/(alpha-2)");
    const double bm = (beta - 1.0) * (beta - 1.0);
    const double bp = (beta + 1.0) * (beta + 1.0);
    return (alpha * alpha - 4.0) / 4.0 - alpha * alpha * (bm - bp) / (4.0 * bp);
}

bool event_B_holds(double tau_star_entry, double tau_entry, double alpha, double beta, int n,
                   int p_dim) {
    if (n < 2 || p_dim < 2) throw DomainError("event_B_holds requires n >= 2 and p >= 2");
    const double level = alpha * std::sqrt(std::log(static_cast<double>(p_dim)) / n);
    return std::fabs(tau_star_entry - tau_entry) <=
           beta * std::min(std::fabs(tau_entry), level);
}

bool strong_correlation_flag(double rho, int n, int p_dim) {
    const double level = 5.0 * 3.14159265358979323846 / 2.0 *
                         std::sqrt(std::log(static_cast<double>(p_dim)) / n);
    return std::fabs(rho) >= level;
}

namespace {

// log det of a PD matrix via Cholesky
double log_det_pd(const SymMatrix& a) {
    const std::vector<double> l = cholesky_factor(a);
    const int p = a.dim();
    double acc = 0.0;
    for (int i = 0; i < p; ++i) acc += std::log(l[static_cast<std::size_t>(i) * p + i]);
    return 2.0 * acc;
}

// inverse of a PD matrix from its Cholesky factor
SymMatrix pd_inverse(const SymMatrix& a) {
    const int p = a.dim();
    const std::vector<double> l = cholesky_factor(a);
    // invert L by forward substitution, then A^{-1} = L^{-T} L^{-1}
    std::vector<double> linv(static_cast<std::size_t>(p) * p, 0.0);
    for (int j = 0; j < p; ++j) {
        linv[static_cast<std::size_t>(j) * p + j] = 1.0 / l[static_cast<std::size_t>(j) * p + j];
        for (int i = j + 1; i < p; ++i) {
            double s = 0.0;
            for (int k = j; k < i; ++k)
                s += l[static_cast<std::size_t>(i) * p + k] * linv[static_cast<std::size_t>(k) * p + j];
            linv[static_cast<std::size_t>(i) * p + j] = -s / l[static_cast<std::size_t>(i) * p + i];
        }
    }
    SymMatrix inv(p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (int k = i; k < p; ++k)
                s += linv[static_cast<std::size_t>(k) * p + i] * linv[static_cast<std::size_t>(k) * p + j];
            inv.set(i, j, s);
        }
    }
    return inv;
}

} // namespace

double gaussian_mixture_affinity(const SymMatrix& s0, const SymMatrix& s1, const SymMatrix& s2) {
    if (s0.dim() != s1.dim() || s0.dim() != s2.dim())
        throw DimensionError("gaussian_mixture_affinity: dimension mismatch");
    // det(S2 + S1 - S2 S0^{-1} S1) factors as det(S2) det(K) det(S1) with
    // K = S1^{-1} + S2^{-1} - S0^{-1}, keeping everything symmetric PD
    SymMatrix k(s0.dim());
    const SymMatrix inv0 = pd_inverse(s0);
    const SymMatrix inv1 = pd_inverse(s1);
    const SymMatrix inv2 = pd_inverse(s2);
    for (int i = 0; i < s0.dim(); ++i)
        for (int j = 0; j <= i; ++j) k.set(i, j, inv1(i, j) + inv2(i, j) - inv0(i, j));
    double log_det_k;
    try {
        log_det_k = log_det_pd(k);
    } catch (const NotPositiveDefiniteError&) {
        throw NotPositiveDefiniteError(
            "gaussian_mixture_affinity: S1^{-1} + S2^{-1} - S0^{-1} is not PD");
    }
    const double log_affinity =
        -0.5 * (log_det_pd(s1) + log_det_pd(s2) + log_det_k - log_det_pd(s0));
    return std::exp(log_affinity);
}

double rate_benchmark(int n, int p_dim, const SparsityClassParams& params, RiskNorm norm) {
    if (n < 2 || p_dim < 2) throw DomainError("rate_benchmark requires n >= 2 and p >= 2");
    params.validate();
    const double ratio = std::log(static_cast<double>(p_dim)) / n;
    double inner = ratio;
    if (params.q > 0.0) inner = std::min(std::pow(params.c, 2.0 / params.q), ratio);
    if (norm == RiskNorm::frobenius) return params.c * std::pow(inner, 1.0 - params.q / 2.0);
    return params.c * params.c * std::pow(inner, 1.0 - params.q);
}

} // namespace tauthresh
