#include "tauthresh/inversions.hpp"

#include "tauthresh/errors.hpp"

#include <cmath>
#include <string>

namespace tauthresh {

MahonianFloatDp::MahonianFloatDp() : coeff_{1.0L} {}

void MahonianFloatDp::extend() {
    // multiply by (1 + z + ... + z^n) / (n+1): sliding window over the
    // previous coefficients keeps the update O(support)
    const int l = n_; // incoming factor degree
    const std::size_t old_size = coeff_.size();
    std::vector<long double> next(old_size + static_cast<std::size_t>(l));
    long double window = 0.0L;
    const long double scale = 1.0L / static_cast<long double>(l + 1);
    const std::size_t half = (next.size() + 1) / 2;
    for (std::size_t k = 0; k < half; ++k) {
        if (k < old_size) window += coeff_[k];
        if (k >= static_cast<std::size_t>(l) + 1) window -= coeff_[k - l - 1];
        next[k] = window * scale;
    }
    // the coefficient sequence is palindromic at every stage; mirroring the
    // ascending half keeps symmetry exact and avoids the cancellation the
    // sliding window suffers in the decreasing tail
    for (std::size_t k = half; k < next.size(); ++k) next[k] = next[next.size() - 1 - k];
    coeff_ = std::move(next);
    ++n_;
}

std::vector<double> MahonianFloatDp::pmf() const {
    std::vector<double> out(coeff_.size());
    for (std::size_t i = 0; i < coeff_.size(); ++i) out[i] = static_cast<double>(coeff_[i]);
    return out;
}

MahonianPMF mahonian_pmf(int n, MahonianPMF::Mode mode) {
    if (n < 1) throw DomainError("mahonian_pmf requires n >= 1");
    MahonianPMF out;
    out.n = n;
    out.support_max = static_cast<std::int64_t>(n) * (n - 1) / 2;
    out.mode = mode;
    if (mode == MahonianPMF::Mode::exact_integer) {
        if (n > mahonian_exact_max_n)
            throw DomainError("exact Mahonian counts capped at n = " +
                              std::to_string(mahonian_exact_max_n));
        std::vector<BigUint> coeff{BigUint(1)};
        for (int l = 1; l < n; ++l) {
            std::vector<BigUint> next(coeff.size() + static_cast<std::size_t>(l));
            BigUint window;
            for (std::size_t k = 0; k < next.size(); ++k) {
                if (k < coeff.size()) window += coeff[k];
                if (k >= static_cast<std::size_t>(l) + 1) window -= coeff[k - l - 1];
                next[k] = window;
            }
            coeff = std::move(next);
        }
        out.counts = std::move(coeff);
    } else {
        if (n > mahonian_float_max_n)
            throw DomainError("float Mahonian pmf capped at n = " +
                              std::to_string(mahonian_float_max_n));
        MahonianFloatDp dp;
        while (dp.n() < n) dp.extend();
        out.probs = dp.pmf();
    }
    return out;
}

TauPmf tau_pmf_from_inversions(int n) {
    if (n < 2) throw DomainError("tau_pmf_from_inversions requires n >= 2");
    MahonianPMF m = mahonian_pmf(n, MahonianPMF::Mode::floating);
    TauPmf out;
    out.n = n;
    const double denom = static_cast<double>(n) * (n - 1);
    out.values.resize(m.probs.size());
    out.probs = m.probs;
    for (std::size_t k = 0; k < m.probs.size(); ++k) {
        out.values[k] = (denom - 4.0 * static_cast<double>(k)) / denom;
    }
    return out;
}

double exact_tail_tau(const MahonianPMF& pmf, double t) {
    if (!(t > 0.0)) throw DomainError("exact_tail_tau requires t > 0");
    if (pmf.mode != MahonianPMF::Mode::floating)
        throw DomainError("exact_tail_tau expects a float-mode pmf");
    const double denom = static_cast<double>(pmf.n) * (pmf.n - 1);
    // tau(k) = (denom - 4k)/denom decreases in k; sum the two tails from the
    // extreme (smallest) masses inward
    double tail = 0.0;
    const std::size_t size = pmf.probs.size();
    for (std::size_t k = 0; k < size; ++k) {
        const double tau = (denom - 4.0 * static_cast<double>(k)) / denom;
        if (tau < t) break;
        tail += pmf.probs[k];
    }
    for (std::size_t k = size; k-- > 0;) {
        const double tau = (denom - 4.0 * static_cast<double>(k)) / denom;
        if (-tau < t) break;
        tail += pmf.probs[k];
    }
    return tail;
}

double exact_tail_tau(int n, double t) {
    return exact_tail_tau(mahonian_pmf(n, MahonianPMF::Mode::floating), t);
}

double clark_leading_term(int n, double l) {
    if (n < 2) throw DomainError("clark_leading_term requires n >= 2");
    const double n3 = static_cast<double>(n) * n * n;
    return 12.0 / std::sqrt(2.0 * 3.14159265358979323846) * std::pow(static_cast<double>(n), -1.5) *
           std::exp(-18.0 * l * l / n3);
}

double gaussian_tail_approx(double gamma, int p_dim) {
    if (!(gamma > 0.0)) throw DomainError("gaussian_tail_approx requires gamma > 0");
    if (p_dim < 2) throw DomainError("gaussian_tail_approx requires p >= 2");
    const double arg = 1.5 * gamma * std::sqrt(std::log(static_cast<double>(p_dim)));
    // 1 - Phi(x) = erfc(x / sqrt 2) / 2, accurate far into the tail
    return std::erfc(arg / std::sqrt(2.0));
}

std::vector<TailComparisonRow> tail_comparison(int n, int p_dim,
                                               const std::vector<double>& gamma_grid) {
    MahonianPMF pmf = mahonian_pmf(n, MahonianPMF::Mode::floating);
    const double scale = std::sqrt(std::log(static_cast<double>(p_dim)) / n);
    std::vector<TailComparisonRow> rows;
    rows.reserve(gamma_grid.size());
    for (double gamma : gamma_grid) {
        TailComparisonRow row;
        row.gamma = gamma;
        row.t = gamma * scale;
        row.exact = exact_tail_tau(pmf, row.t);
        row.gaussian = gaussian_tail_approx(gamma, p_dim);
        row.hoeffding = 2.0 * std::exp(-n * row.t * row.t / 4.0);
        row.exact_over_gaussian = row.gaussian > 0.0 ? row.exact / row.gaussian : 0.0;
        row.exact_over_hoeffding = row.hoeffding > 0.0 ? row.exact / row.hoeffding : 0.0;
        rows.push_back(row);
    }
    return rows;
}

} // namespace tauthresh
