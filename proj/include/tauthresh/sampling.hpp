#pragma once

#include "tauthresh/kendall.hpp"
#include "tauthresh/sym_matrix.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace tauthresh {

// Radial law of xi in the representation X = mu + xi A U.
struct RadialGaussianChi {};           // xi ~ chi_q: marginals exactly Gaussian
struct RadialConstant { double r; };   // xi == r
struct RadialPareto { double tail_index; }; // xi = U^{-1/tail_index}
using RadialSpec = std::variant<RadialGaussianChi, RadialConstant, RadialPareto>;

class EllipticalSpec {
public:
    // scale must be PSD within 1e-10 (checked here)
    EllipticalSpec(std::vector<double> mu, SymMatrix scale, RadialSpec radial);

    int dim() const { return scale_.dim(); }
    const std::vector<double>& mu() const { return mu_; }
    const SymMatrix& scale() const { return scale_; }
    const RadialSpec& radial() const { return radial_; }
    // full-column-rank factor A (p x q) with A A^T = scale
    const std::vector<double>& factor() const { return factor_; }
    int factor_rank() const { return rank_; }

private:
    std::vector<double> mu_;
    SymMatrix scale_;
    RadialSpec radial_;
    std::vector<double> factor_;
    int rank_ = 0;
};

// theta = (gamma, lambda) indexing the lower-bound family
// Sigma(theta) = Id + eps * sum_j gamma_j A(lambda_j); lambda entries are
// 1-based column indices in {floor(p/2)+1, ..., p}, pairwise distinct.
struct LowerBoundTheta {
    std::vector<int> gamma;  // bits, length r = floor(p/2)
    std::vector<int> lambda; // r distinct indices
    double epsilon = 0.0;    // in (0, 1/3]

    void validate(int p) const;
};

SampleMatrix sample_gaussian(const EllipticalSpec& spec, int n, std::uint64_t seed);
SampleMatrix sample_elliptical(const EllipticalSpec& spec, int n, std::uint64_t seed);

// one uniform draw on S^{q-1} (normalized Gaussian vector); exposed for tests
std::vector<double> sample_unit_sphere(int q, std::uint64_t seed, std::uint64_t stream);

struct BandedPattern {
    int bandwidth = 1;
    double value = 0.0;
};
struct RandomSupportPattern {
    int per_row = 1;     // off-diagonal entries per row, exact
    double value = 0.0;  // common magnitude
};
struct IdentityPattern {};
using SparsePattern = std::variant<BandedPattern, RandomSupportPattern, IdentityPattern>;

// Model inside G_{w,q}(c): membership is checked against params and PSD is
// enforced (shrinking off-diagonals by 0.9 up to 100 rounds) or the call
// fails with InfeasibleModelError.
CorrelationMatrix make_sparse_model(int p, const SparsityClassParams& params,
                                    const SparsePattern& pattern, std::uint64_t seed);

CorrelationMatrix make_lower_bound_matrix(int p, const LowerBoundTheta& theta);

struct AssumptionCheck {
    std::string name;
    bool checkable = true;
    bool satisfied = false;
    std::string detail;
};

// (A2)-(A6) evaluated with the stored constants; (A1)/(A1*) are reported as
// not checkable from (n, p) alone.
std::vector<AssumptionCheck> check_assumptions(int n, int p, const SparsityClassParams& params);

} // namespace tauthresh
