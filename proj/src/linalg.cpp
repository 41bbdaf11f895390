#include "tauthresh/linalg.hpp"

#include "tauthresh/errors.hpp"
#include "tauthresh/simd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tauthresh {

namespace {
constexpr double half_pi = 1.57079632679489661923;
}

double frobenius_loss(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionError("frobenius_loss: dimension mismatch");
    return simd::active().sq_diff_sum(a.data().data(), b.data().data(), a.data().size());
}

double l1_operator_norm(const SymMatrix& a) {
    const int p = a.dim();
    std::vector<double> colsum(static_cast<std::size_t>(p), 0.0);
    for (int i = 0; i < p; ++i) {
        simd::active().abs_accumulate(a.data().data() + static_cast<std::size_t>(i) * p,
                                      colsum.data(), static_cast<std::size_t>(p));
    }
    return *std::max_element(colsum.begin(), colsum.end());
}

SymMatrix sine_transform(const SymMatrix& a) {
    const int p = a.dim();
    SymMatrix out(p);
    auto& dst = out.raw();
    const auto& src = a.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::sin(half_pi * src[i]);
    return out;
}

CorrelationMatrix sine_transform(const CorrelationMatrix& a) {
    SymMatrix s = sine_transform(a.sym());
    // unit diagonal maps to sin(pi/2) which rounds to exactly 1
    for (int i = 0; i < s.dim(); ++i) s.set(i, i, 1.0);
    return CorrelationMatrix::from_sym(std::move(s));
}

CorrelationMatrix threshold_operator(const CorrelationMatrix& a, double alpha, int n, int p_dim) {
    if (n < 2 || p_dim < 2) throw DomainError("threshold_operator requires n >= 2 and p >= 2");
    if (alpha < 0.0) throw DomainError("threshold constant must be nonnegative");
    const double level = alpha * std::sqrt(std::log(static_cast<double>(p_dim)) / n);
    const int p = a.dim();
    SymMatrix out(p);
    simd::active().hard_threshold(a.sym().data().data(), out.raw().data(),
                                  out.raw().size(), level);
    for (int i = 0; i < p; ++i) out.set(i, i, 1.0);
    return CorrelationMatrix::from_sym(std::move(out));
}

double weak_lq_radius(const CorrelationMatrix& a, double q) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("weak_lq_radius requires 0 < q < 1");
    const int p = a.dim();
    double radius = 0.0;
    std::vector<double> row(static_cast<std::size_t>(p - 1));
    for (int i = 0; i < p; ++i) {
        int m = 0;
        for (int j = 0; j < p; ++j)
            if (j != i) row[m++] = std::fabs(a(i, j));
        std::stable_sort(row.begin(), row.end(), std::greater<double>());
        for (int k = 0; k < m; ++k) {
            radius = std::max(radius, (k + 1) * std::pow(row[k], q));
        }
    }
    return radius;
}

int max_row_support(const CorrelationMatrix& a) {
    const int p = a.dim();
    int support = 0;
    for (int i = 0; i < p; ++i) {
        int count = 0;
        for (int j = 0; j < p; ++j)
            if (j != i && a(i, j) != 0.0) ++count;
        support = std::max(support, count);
    }
    return support;
}

bool is_member(const CorrelationMatrix& a, const SparsityClassParams& params) {
    params.validate();
    if (params.q == 0.0) return max_row_support(a) <= params.c;
    return weak_lq_radius(a, params.q) <= params.c;
}

// --- power iteration -------------------------------------------------------

namespace {

// Rayleigh quotient limit of power iteration on the PD matrix A + shift*I.
double shifted_power_max(const SymMatrix& a, double shift, double sign, double tol,
                         int max_iter, bool& converged) {
    const int p = a.dim();
    std::vector<double> v(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) v[i] = 1.0 + 1e-3 * i;
    double norm = std::sqrt(simd::active().dot(v.data(), v.data(), v.size()));
    for (auto& x : v) x /= norm;

    std::vector<double> w(static_cast<std::size_t>(p));
    double prev = 0.0;
    int stable = 0;
    for (int it = 0; it < max_iter; ++it) {
        for (int i = 0; i < p; ++i) {
            double dot = simd::active().dot(a.data().data() + static_cast<std::size_t>(i) * p,
                                            v.data(), v.size());
            w[i] = sign * dot + shift * v[i];
        }
        double rayleigh = simd::active().dot(v.data(), w.data(), v.size());
        norm = std::sqrt(simd::active().dot(w.data(), w.data(), w.size()));
        for (int i = 0; i < p; ++i) v[i] = w[i] / norm;
        if (it > 0 && std::fabs(rayleigh - prev) <= tol * std::max(1.0, std::fabs(rayleigh))) {
            if (++stable >= 2) {
                converged = true;
                return rayleigh - shift;
            }
        } else {
            stable = 0;
        }
        prev = rayleigh;
    }
    converged = false;
    return prev - shift;
}

} // namespace

double spectral_norm(const SymMatrix& a, double tol, int max_iter) {
    if (!(tol > 0.0)) throw DomainError("spectral_norm tolerance must be positive");
    const double shift = l1_operator_norm(a) + 1.0;
    bool ok_hi = false, ok_lo = false;
    const double lam_max = shifted_power_max(a, shift, 1.0, tol, max_iter, ok_hi);
    const double lam_min_neg = shifted_power_max(a, shift, -1.0, tol, max_iter, ok_lo);
    const double est = std::max(std::fabs(lam_max), std::fabs(lam_min_neg));
    if (!ok_hi || !ok_lo)
        throw PowerIterationError("spectral_norm: power iteration did not converge", est);
    return est;
}

// --- factorizations --------------------------------------------------------

std::vector<double> cholesky_factor(const SymMatrix& a) {
    const int p = a.dim();
    std::vector<double> l(static_cast<std::size_t>(p) * p, 0.0);
    for (int j = 0; j < p; ++j) {
        double diag = a(j, j);
        diag -= simd::active().dot(l.data() + static_cast<std::size_t>(j) * p,
                                   l.data() + static_cast<std::size_t>(j) * p,
                                   static_cast<std::size_t>(j));
        if (!(diag > 0.0))
            throw NotPositiveDefiniteError("Cholesky pivot " + std::to_string(j) +
                                           " is not positive");
        const double root = std::sqrt(diag);
        l[static_cast<std::size_t>(j) * p + j] = root;
        for (int i = j + 1; i < p; ++i) {
            double s = a(i, j);
            s -= simd::active().dot(l.data() + static_cast<std::size_t>(i) * p,
                                    l.data() + static_cast<std::size_t>(j) * p,
                                    static_cast<std::size_t>(j));
            l[static_cast<std::size_t>(i) * p + j] = s / root;
        }
    }
    return l;
}

PivotedCholesky pivoted_cholesky(const SymMatrix& a, double tol) {
    const int p = a.dim();
    std::vector<double> work(a.data());
    std::vector<int> perm(static_cast<std::size_t>(p));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> l(static_cast<std::size_t>(p) * p, 0.0); // permuted rows
    double max_diag0 = 0.0;
    for (int i = 0; i < p; ++i) max_diag0 = std::max(max_diag0, std::fabs(a(i, i)));
    const double cutoff = tol * std::max(max_diag0, 1.0);

    auto w = [&](int i, int j) -> double& { return work[static_cast<std::size_t>(i) * p + j]; };
    int rank = 0;
    for (int k = 0; k < p; ++k) {
        int piv = k;
        for (int i = k + 1; i < p; ++i)
            if (w(perm[i], perm[i]) > w(perm[piv], perm[piv])) piv = i;
        std::swap(perm[k], perm[piv]);
        const double d = w(perm[k], perm[k]);
        if (d <= cutoff) {
            if (d < -cutoff)
                throw NotPositiveDefiniteError("pivoted Cholesky: matrix is not PSD");
            break;
        }
        const double root = std::sqrt(d);
        l[static_cast<std::size_t>(k) * p + k] = root;
        for (int i = k + 1; i < p; ++i)
            l[static_cast<std::size_t>(i) * p + k] = w(perm[i], perm[k]) / root;
        for (int i = k + 1; i < p; ++i) {
            for (int j = k + 1; j <= i; ++j) {
                const double upd = w(perm[i], perm[j]) -
                                   l[static_cast<std::size_t>(i) * p + k] *
                                       l[static_cast<std::size_t>(j) * p + k];
                w(perm[i], perm[j]) = upd;
                w(perm[j], perm[i]) = upd;
            }
        }
        ++rank;
    }
    // un-permute rows: B[perm[i]] = l_row_i
    PivotedCholesky out;
    out.rank = rank;
    out.factor.assign(static_cast<std::size_t>(p) * rank, 0.0);
    for (int i = 0; i < p; ++i)
        for (int k = 0; k < rank; ++k)
            out.factor[static_cast<std::size_t>(perm[i]) * rank + k] =
                l[static_cast<std::size_t>(i) * p + k];
    return out;
}

bool is_psd_within(const SymMatrix& a, double shift) {
    SymMatrix shifted = a;
    for (int i = 0; i < a.dim(); ++i) shifted.set(i, i, a(i, i) + shift);
    try {
        cholesky_factor(shifted);
        return true;
    } catch (const NotPositiveDefiniteError&) {
        return false;
    }
}

EigenDecomposition jacobi_eigen(const SymMatrix& a, int max_sweeps) {
    const int p = a.dim();
    std::vector<double> m(a.data());
    std::vector<double> v(static_cast<std::size_t>(p) * p, 0.0);
    for (int i = 0; i < p; ++i) v[static_cast<std::size_t>(i) * p + i] = 1.0;
    auto at = [&](int i, int j) -> double& { return m[static_cast<std::size_t>(i) * p + j]; };

    double total = 0.0;
    for (double x : m) total += x * x;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j) off += at(i, j) * at(i, j);
        if (off <= 1e-28 * (total + 1.0)) break;
        for (int i = 0; i < p - 1; ++i) {
            for (int j = i + 1; j < p; ++j) {
                const double apq = at(i, j);
                if (apq == 0.0) continue;
                const double theta = (at(j, j) - at(i, i)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < p; ++k) {
                    const double aki = at(k, i), akj = at(k, j);
                    at(k, i) = c * aki - s * akj;
                    at(k, j) = s * aki + c * akj;
                }
                for (int k = 0; k < p; ++k) {
                    const double aik = at(i, k), ajk = at(j, k);
                    at(i, k) = c * aik - s * ajk;
                    at(j, k) = s * aik + c * ajk;
                }
                for (int k = 0; k < p; ++k) {
                    const double vki = v[static_cast<std::size_t>(k) * p + i];
                    const double vkj = v[static_cast<std::size_t>(k) * p + j];
                    v[static_cast<std::size_t>(k) * p + i] = c * vki - s * vkj;
                    v[static_cast<std::size_t>(k) * p + j] = s * vki + c * vkj;
                }
            }
        }
    }
    EigenDecomposition out;
    out.values.resize(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) out.values[i] = at(i, i);
    std::vector<int> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return out.values[x] < out.values[y]; });
    EigenDecomposition sorted;
    sorted.values.resize(static_cast<std::size_t>(p));
    sorted.vectors.assign(static_cast<std::size_t>(p) * p, 0.0);
    for (int k = 0; k < p; ++k) {
        sorted.values[k] = out.values[order[k]];
        for (int i = 0; i < p; ++i)
            sorted.vectors[static_cast<std::size_t>(i) * p + k] =
                v[static_cast<std::size_t>(i) * p + order[k]];
    }
    return sorted;
}

double min_eigenvalue(const SymMatrix& a) {
    return jacobi_eigen(a).values.front();
}

// --- nearest correlation ---------------------------------------------------

namespace {

SymMatrix psd_project(const SymMatrix& a) {
    const int p = a.dim();
    EigenDecomposition eig = jacobi_eigen(a);
    SymMatrix out(p);
    auto& dst = out.raw();
    for (int k = 0; k < p; ++k) {
        const double lam = eig.values[k];
        if (lam <= 0.0) continue;
        for (int i = 0; i < p; ++i) {
            const double vik = eig.vectors[static_cast<std::size_t>(i) * p + k] * lam;
            for (int j = 0; j <= i; ++j) {
                dst[static_cast<std::size_t>(i) * p + j] +=
                    vik * eig.vectors[static_cast<std::size_t>(j) * p + k];
            }
        }
    }
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < i; ++j)
            dst[static_cast<std::size_t>(j) * p + i] = dst[static_cast<std::size_t>(i) * p + j];
    return out;
}

} // namespace

CorrelationMatrix nearest_correlation(const SymMatrix& a, double tol, int max_iter) {
    if (!(tol > 0.0)) throw DomainError("nearest_correlation tolerance must be positive");
    const int p = a.dim();
    SymMatrix y = a;
    SymMatrix ds(p);
    double residual = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        SymMatrix r(p);
        for (std::size_t k = 0; k < r.raw().size(); ++k)
            r.raw()[k] = y.data()[k] - ds.data()[k];
        SymMatrix x = psd_project(r);
        for (std::size_t k = 0; k < ds.raw().size(); ++k)
            ds.raw()[k] = x.data()[k] - r.data()[k];
        SymMatrix yn = x;
        for (int i = 0; i < p; ++i) yn.set(i, i, 1.0);

        residual = std::sqrt(frobenius_loss(yn, x)) / std::max(1.0, std::sqrt(frobenius_loss(x, SymMatrix(p))));
        const double step = std::sqrt(frobenius_loss(yn, y)) /
                            std::max(1.0, std::sqrt(frobenius_loss(yn, SymMatrix(p))));
        y = std::move(yn);
        if (residual <= tol && step <= tol && is_psd_within(y, tol)) {
            SymMatrix clipped = y;
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < i; ++j)
                    clipped.set(i, j, std::clamp(y(i, j), -1.0, 1.0));
            return CorrelationMatrix::from_sym(std::move(clipped));
        }
    }
    throw ProjectionError("nearest_correlation: no convergence within iteration cap", residual);
}

} // namespace tauthresh
