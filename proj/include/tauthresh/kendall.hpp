#pragma once

#include "tauthresh/sym_matrix.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace tauthresh {

// n x p observation matrix, rows are i.i.d. draws.
class SampleMatrix {
public:
    SampleMatrix(int n, int p);
    SampleMatrix(int n, int p, std::vector<double> data);

    int rows() const { return n_; }
    int cols() const { return p_; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * p_ + j]; }
    double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * p_ + j]; }
    std::vector<double> column(int j) const;
    const std::vector<double>& data() const { return data_; }

private:
    int n_ = 0, p_ = 0;
    std::vector<double> data_;
};

// sum over k<l of sign(x_k-x_l)sign(y_k-y_l); the O(n^2) definition
std::int64_t concordance_sum_naive(std::span<const double> x, std::span<const double> y);
// same value via sort + merge-sort inversion counting for tie-free input,
// falling back to the naive sum when ties are present
std::int64_t concordance_sum_fast(std::span<const double> x, std::span<const double> y);

// tau = 2 S / (n(n-1)) with S the concordance sum above (tau-a style:
// tied pairs contribute zero, no denominator correction)
double kendall_tau_pair_naive(std::span<const double> x, std::span<const double> y);
double kendall_tau_pair_fast(std::span<const double> x, std::span<const double> y);

// Full tau-hat matrix; pair computations run on `threads` threads
// (0 = hardware default). Result does not depend on the thread count.
CorrelationMatrix kendall_tau_matrix(const SampleMatrix& x, int threads = 0, bool naive = false);

// Pairs i<j with perm[i] > perm[j]. Validates that perm is a permutation
// of 0..n-1.
std::uint64_t inversion_count(std::span<const int> perm);

// merge-sort inversion counting; sorts v in place
std::uint64_t count_inversions_inplace(std::vector<int>& v);

} // namespace tauthresh
