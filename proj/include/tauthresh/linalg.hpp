#pragma once

#include "tauthresh/sym_matrix.hpp"

#include <optional>
#include <vector>

namespace tauthresh {

// ||A - B||_F^2
double frobenius_loss(const SymMatrix& a, const SymMatrix& b);

// max_j sum_i |A_ij|
double l1_operator_norm(const SymMatrix& a);

// Largest absolute eigenvalue via shifted power iteration on A and -A,
// deterministic start vector. Throws PowerIterationError past max_iter.
double spectral_norm(const SymMatrix& a, double tol = 1e-10, int max_iter = 10000);

// Entrywise sin(pi x / 2); fixes 0 and +-1, odd entrywise.
SymMatrix sine_transform(const SymMatrix& a);
CorrelationMatrix sine_transform(const CorrelationMatrix& a);

// Hard threshold at alpha*sqrt(log(p_dim)/n); strict inequality keeps an
// entry, the diagonal stays 1.
CorrelationMatrix threshold_operator(const CorrelationMatrix& a, double alpha, int n, int p_dim);

// Smallest c with |x_[k]|^q <= c/k for every row (diagonal removed), 0 < q < 1.
double weak_lq_radius(const CorrelationMatrix& a, double q);
// q = 0 companion: largest off-diagonal row support.
int max_row_support(const CorrelationMatrix& a);

bool is_member(const CorrelationMatrix& a, const SparsityClassParams& params);

// Higham alternating projections with Dykstra correction onto the unit
// diagonal PSD set. Throws ProjectionError past max_iter.
CorrelationMatrix nearest_correlation(const SymMatrix& a, double tol = 1e-8, int max_iter = 200);

// --- supporting factorizations ---

// Lower-triangular L (row-major p x p) with A = L L^T; throws
// NotPositiveDefiniteError on a nonpositive pivot.
std::vector<double> cholesky_factor(const SymMatrix& a);

// Diagonally pivoted Cholesky for PSD matrices. Returns a p x rank factor B
// (row-major, rank columns) with ||A - B B^T||_max <= tol * max|A_ii|.
struct PivotedCholesky {
    std::vector<double> factor; // p x rank
    int rank = 0;
};
PivotedCholesky pivoted_cholesky(const SymMatrix& a, double tol = 1e-10);

// true iff A + shift*I admits a Cholesky factorization, i.e. min eig > -shift
bool is_psd_within(const SymMatrix& a, double shift);

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    std::vector<double> vectors; // row-major p x p, column k = eigenvector of values[k]
};

// Cyclic Jacobi; suitable up to a few hundred dimensions.
EigenDecomposition jacobi_eigen(const SymMatrix& a, int max_sweeps = 64);

double min_eigenvalue(const SymMatrix& a);

} // namespace tauthresh
