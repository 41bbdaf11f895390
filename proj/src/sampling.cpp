#include "tauthresh/sampling.hpp"

#include "tauthresh/errors.hpp"
#include "tauthresh/linalg.hpp"
#include "tauthresh/rng.hpp"
#include "tauthresh/simd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tauthresh {

namespace {

// smallest b such that every nonzero of the p x q factor sits in the band
// |j - i| <= b; banded models keep their band through Cholesky, which makes
// the per-row apply O(p b) instead of O(p q)
int factor_bandwidth(const std::vector<double>& f, int p, int q) {
    int bw = 0;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < q; ++j) {
            if (f[static_cast<std::size_t>(i) * q + j] != 0.0)
                bw = std::max(bw, std::abs(j - i));
        }
    }
    return bw;
}

} // namespace

EllipticalSpec::EllipticalSpec(std::vector<double> mu, SymMatrix scale, RadialSpec radial)
    : mu_(std::move(mu)), scale_(std::move(scale)), radial_(radial) {
    const int p = scale_.dim();
    if (mu_.size() != static_cast<std::size_t>(p))
        throw DimensionError("EllipticalSpec: mu length must match scale dimension");
    if (!is_psd_within(scale_, 1e-10))
        throw NotPositiveDefiniteError("EllipticalSpec: scale is not PSD within 1e-10");
    if (const auto* c = std::get_if<RadialConstant>(&radial_)) {
        if (c->r < 0.0) throw DomainError("constant radial requires r >= 0");
    }
    if (const auto* par = std::get_if<RadialPareto>(&radial_)) {
        if (!(par->tail_index > 0.0)) throw DomainError("pareto radial requires tail index > 0");
    }
    try {
        factor_ = cholesky_factor(scale_);
        rank_ = p;
    } catch (const NotPositiveDefiniteError&) {
        PivotedCholesky piv = pivoted_cholesky(scale_, 1e-10);
        if (piv.rank == 0) throw DomainError("EllipticalSpec: scale has rank 0");
        factor_ = std::move(piv.factor);
        rank_ = piv.rank;
    }
}

namespace {

double draw_radial(const RadialSpec& radial, int q, CounterRng& rng) {
    if (std::holds_alternative<RadialGaussianChi>(radial)) {
        double ss = 0.0;
        for (int j = 0; j < q; ++j) {
            const double g = rng.next_normal();
            ss += g * g;
        }
        return std::sqrt(ss);
    }
    if (const auto* c = std::get_if<RadialConstant>(&radial)) return c->r;
    const auto& par = std::get<RadialPareto>(radial);
    return std::pow(rng.next_unit(), -1.0 / par.tail_index);
}

void apply_factor(const std::vector<double>& f, int p, int q, int bw,
                  const std::vector<double>& z, double scale, const std::vector<double>& mu,
                  double* row_out) {
    for (int i = 0; i < p; ++i) {
        const int lo = std::max(0, i - bw);
        const int hi = std::min(q - 1, i + bw);
        double acc = 0.0;
        if (hi >= lo) {
            acc = simd::active().dot(f.data() + static_cast<std::size_t>(i) * q + lo,
                                     z.data() + lo, static_cast<std::size_t>(hi - lo + 1));
        }
        row_out[i] = mu[i] + scale * acc;
    }
}

bool is_identity_factor(const std::vector<double>& f, int p, int q) {
    if (p != q) return false;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < q; ++j)
            if (f[static_cast<std::size_t>(i) * q + j] != (i == j ? 1.0 : 0.0)) return false;
    return true;
}

} // namespace

SampleMatrix sample_gaussian(const EllipticalSpec& spec, int n, std::uint64_t seed) {
    if (n < 2) throw DimensionError("sample_gaussian requires n >= 2");
    if (!std::holds_alternative<RadialGaussianChi>(spec.radial()))
        throw DomainError("sample_gaussian requires the gaussian-chi radial");
    const int p = spec.dim();
    const int q = spec.factor_rank();
    const bool ident = is_identity_factor(spec.factor(), p, q);
    const int bw = ident ? 0 : factor_bandwidth(spec.factor(), p, q);
    SampleMatrix out(n, p);
    std::vector<double> z(static_cast<std::size_t>(q));
    for (int i = 0; i < n; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        for (int j = 0; j < q; ++j) z[j] = rng.next_normal();
        if (ident) {
            for (int j = 0; j < p; ++j) out.at(i, j) = spec.mu()[j] + z[j];
        } else {
            apply_factor(spec.factor(), p, q, bw, z, 1.0, spec.mu(), &out.at(i, 0));
        }
    }
    return out;
}

SampleMatrix sample_elliptical(const EllipticalSpec& spec, int n, std::uint64_t seed) {
    if (n < 2) throw DimensionError("sample_elliptical requires n >= 2");
    const int p = spec.dim();
    const int q = spec.factor_rank();
    const int bw = factor_bandwidth(spec.factor(), p, q);
    SampleMatrix out(n, p);
    std::vector<double> u(static_cast<std::size_t>(q));
    for (int i = 0; i < n; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        double norm2 = 0.0;
        for (int j = 0; j < q; ++j) {
            u[j] = rng.next_normal();
            norm2 += u[j] * u[j];
        }
        const double norm = std::sqrt(norm2);
        for (int j = 0; j < q; ++j) u[j] /= norm;
        const double xi = draw_radial(spec.radial(), q, rng);
        apply_factor(spec.factor(), p, q, bw, u, xi, spec.mu(), &out.at(i, 0));
    }
    return out;
}

std::vector<double> sample_unit_sphere(int q, std::uint64_t seed, std::uint64_t stream) {
    if (q < 1) throw DimensionError("sample_unit_sphere requires q >= 1");
    CounterRng rng(seed, stream);
    std::vector<double> u(static_cast<std::size_t>(q));
    double norm2 = 0.0;
    for (int j = 0; j < q; ++j) {
        u[j] = rng.next_normal();
        norm2 += u[j] * u[j];
    }
    const double norm = std::sqrt(norm2);
    for (auto& x : u) x /= norm;
    return u;
}

void LowerBoundTheta::validate(int p) const {
    const int r = p / 2;
    if (gamma.size() != static_cast<std::size_t>(r))
        throw DomainError("LowerBoundTheta: gamma must have length floor(p/2)");
    if (lambda.size() != gamma.size())
        throw DomainError("LowerBoundTheta: lambda must have length floor(p/2)");
    if (!(epsilon > 0.0 && epsilon * epsilon <= 1.0 / 9.0 + 1e-15))
        throw DomainError("LowerBoundTheta: epsilon must lie in (0, 1/3]");
    std::vector<char> used(static_cast<std::size_t>(p) + 1, 0);
    for (int g : gamma)
        if (g != 0 && g != 1) throw DomainError("LowerBoundTheta: gamma entries must be bits");
    for (int l : lambda) {
        if (l < p / 2 + 1 || l > p)
            throw DomainError("LowerBoundTheta: lambda index " + std::to_string(l) +
                              " outside {floor(p/2)+1..p}");
        if (used[l]) throw DomainError("LowerBoundTheta: lambda indices must be distinct");
        used[l] = 1;
    }
}

CorrelationMatrix make_lower_bound_matrix(int p, const LowerBoundTheta& theta) {
    if (p < 2) throw DimensionError("make_lower_bound_matrix requires p >= 2");
    theta.validate(p);
    SymMatrix m = SymMatrix::identity(p);
    const int r = p / 2;
    for (int j = 0; j < r; ++j) {
        if (theta.gamma[j] == 1) {
            m.set(j, theta.lambda[j] - 1, theta.epsilon); // 1-based lambda
        }
    }
    return CorrelationMatrix::from_sym(std::move(m));
}

namespace {

CorrelationMatrix finish_sparse_model(SymMatrix m, const SparsityClassParams& params) {
    // class membership survives shrinking magnitudes, so pull the
    // off-diagonal toward zero until the matrix is PSD within 1e-8
    const int p = m.dim();
    int rounds = 0;
    while (!is_psd_within(m, 1e-8)) {
        if (++rounds > 100)
            throw InfeasibleModelError("make_sparse_model: PSD repair did not converge");
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < i; ++j) m.set(i, j, 0.9 * m(i, j));
    }
    CorrelationMatrix out = CorrelationMatrix::from_sym(std::move(m));
    if (!is_member(out, params))
        throw InfeasibleModelError("make_sparse_model: pattern violates the sparsity class");
    return out;
}

} // namespace

CorrelationMatrix make_sparse_model(int p, const SparsityClassParams& params,
                                    const SparsePattern& pattern, std::uint64_t seed) {
    if (p < 1) throw DimensionError("make_sparse_model requires p >= 1");
    params.validate();
    if (std::holds_alternative<IdentityPattern>(pattern)) {
        return CorrelationMatrix::identity(p);
    }
    if (const auto* banded = std::get_if<BandedPattern>(&pattern)) {
        if (banded->bandwidth < 0 || std::fabs(banded->value) > 1.0)
            throw DomainError("banded pattern requires bandwidth >= 0 and |value| <= 1");
        SymMatrix m = SymMatrix::identity(p);
        for (int i = 0; i < p; ++i)
            for (int j = std::max(0, i - banded->bandwidth); j < i; ++j)
                m.set(i, j, banded->value);
        return finish_sparse_model(std::move(m), params);
    }
    const auto& rs = std::get<RandomSupportPattern>(pattern);
    if (rs.per_row < 0 || std::fabs(rs.value) > 1.0)
        throw DomainError("random-support pattern requires per_row >= 0 and |value| <= 1");
    // exact per-row support via a circulant graph on random offsets: each
    // offset o pairs i with i +- o (mod p) and contributes 2 per row, the
    // half-turn offset p/2 contributes 1
    const int k = rs.per_row;
    if (k >= p) throw InfeasibleModelError("random-support: per-row count must be < p");
    const bool needs_half_turn = (k % 2) == 1;
    if (needs_half_turn && (p % 2) != 0)
        throw InfeasibleModelError("random-support: odd per-row count requires even p");
    const int full_offsets = k / 2;
    const int max_offset = (p - 1) / 2;
    if (full_offsets > max_offset)
        throw InfeasibleModelError("random-support: per-row count too large for dimension");
    std::vector<int> offsets(static_cast<std::size_t>(max_offset));
    std::iota(offsets.begin(), offsets.end(), 1);
    CounterRng rng(seed, 0);
    for (std::size_t i = offsets.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
        std::swap(offsets[i - 1], offsets[j]);
    }
    SymMatrix m = SymMatrix::identity(p);
    for (int t = 0; t < full_offsets; ++t) {
        const int o = offsets[static_cast<std::size_t>(t)];
        for (int i = 0; i < p; ++i) m.set(i, (i + o) % p, rs.value);
    }
    if (needs_half_turn && k > 0) {
        for (int i = 0; i < p / 2; ++i) m.set(i, i + p / 2, rs.value);
    }
    return finish_sparse_model(std::move(m), params);
}

std::vector<AssumptionCheck> check_assumptions(int n, int p, const SparsityClassParams& params) {
    if (n < 2 || p < 2) throw DomainError("check_assumptions requires n >= 2 and p >= 2");
    std::vector<AssumptionCheck> out;
    const double logp = std::log(static_cast<double>(p));

    AssumptionCheck a1{"A1/A1*", false, false,
                       "model property, not checkable from (n, p) alone"};
    out.push_back(a1);

    AssumptionCheck a2{"A2", true, false, ""};
    try {
        params.validate();
        a2.satisfied = true;
        a2.detail = "0 <= q < 1, c > 0";
    } catch (const DomainError& e) {
        a2.detail = e.what();
    }
    out.push_back(a2);

    const double a3_bound = params.M * std::pow(static_cast<double>(n), (1.0 - params.q) / 2.0) *
                            std::pow(logp, -(3.0 - params.q) / 2.0);
    out.push_back({"A3", true, params.c <= a3_bound,
                   "c <= M n^{(1-q)/2} (log p)^{-(3-q)/2} = " + std::to_string(a3_bound)});

    const double a4_bound = params.m * std::pow(logp / n, params.q / 2.0);
    out.push_back({"A4", true, params.c >= a4_bound,
                   "c >= m (log p / n)^{q/2} = " + std::to_string(a4_bound)});

    const double a5_bound = std::pow(static_cast<double>(n), params.eta_l);
    out.push_back({"A5", true, static_cast<double>(p) > a5_bound,
                   "p > n^{eta_l} = " + std::to_string(a5_bound)});

    const double a6_bound = std::pow(static_cast<double>(n), params.eta_u);
    out.push_back({"A6", true, static_cast<double>(p) < a6_bound,
                   "p < n^{eta_u} = " + std::to_string(a6_bound)});
    return out;
}

} // namespace tauthresh
