#pragma once

#include <cstddef>
#include <vector>

namespace tauthresh {

// Dense symmetric p x p matrix, full row-major storage. Symmetry is
// enforced on construction and preserved by set().
class SymMatrix {
public:
    explicit SymMatrix(int p);
    static SymMatrix identity(int p);
    // validates entries[i][j] == entries[j][i] exactly
    static SymMatrix from_rows(int p, std::vector<double> entries);

    int dim() const { return p_; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * p_ + j]; }
    void set(int i, int j, double v) {
        a_[static_cast<std::size_t>(i) * p_ + j] = v;
        a_[static_cast<std::size_t>(j) * p_ + i] = v;
    }

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& raw() { return a_; } // caller keeps symmetry

    bool operator==(const SymMatrix&) const = default;

private:
    int p_ = 0;
    std::vector<double> a_;
};

// Symmetric, unit diagonal, entries in [-1, 1]. Off-diagonal values in
// (1, 1+1e-12] coming out of iterative routines are clamped to +-1;
// anything further out is rejected.
class CorrelationMatrix {
public:
    static CorrelationMatrix identity(int p);
    static CorrelationMatrix from_sym(SymMatrix m);

    int dim() const { return base_.dim(); }
    double operator()(int i, int j) const { return base_(i, j); }
    const SymMatrix& sym() const { return base_; }

    bool operator==(const CorrelationMatrix&) const = default;

private:
    explicit CorrelationMatrix(SymMatrix m) : base_(std::move(m)) {}
    SymMatrix base_;
};

// Parameters (q, c) of the weak-lq sparsity class plus the assumption
// constants M, m, v and the dimension-growth exponents eta_l, eta_u.
struct SparsityClassParams {
    double q = 0.0;
    double c = 1.0;
    double M = 1.0;
    double m = 1.0;
    double v = 1.0;
    double eta_l = 1.1;
    double eta_u = 2.0;

    void validate() const; // throws DomainError on violation
};

} // namespace tauthresh
