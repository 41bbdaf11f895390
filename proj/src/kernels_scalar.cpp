#include "tauthresh/simd.hpp"

#include <cmath>

namespace tauthresh::simd {
namespace {

std::int64_t concordance_sum_scalar(const double* x, const double* y, std::size_t n) {
    std::int64_t plus = 0, minus = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double xk = x[k], yk = y[k];
        for (std::size_t l = k + 1; l < n; ++l) {
            const double dx = xk - x[l];
            const double dy = yk - y[l];
            const bool px = dx > 0.0, nx = dx < 0.0;
            const bool py = dy > 0.0, ny = dy < 0.0;
            plus += static_cast<std::int64_t>((px && py) || (nx && ny));
            minus += static_cast<std::int64_t>((px && ny) || (nx && py));
        }
    }
    return plus - minus;
}

void hard_threshold_scalar(const double* src, double* dst, std::size_t n, double thresh) {
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] = std::fabs(src[i]) > thresh ? src[i] : 0.0;
    }
}

// 4 accumulators indexed by i&3, mirroring the AVX2 lane layout exactly.
double sq_diff_sum_scalar(const double* a, const double* b, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc[i & 3] += d * d;
    }
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void abs_accumulate_scalar(const double* row, double* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += std::fabs(row[i]);
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        acc[i & 3] += a[i] * b[i];
    }
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

const Kernels scalar_table = {
    &concordance_sum_scalar,
    &hard_threshold_scalar,
    &sq_diff_sum_scalar,
    &abs_accumulate_scalar,
    &dot_scalar,
    "scalar",
};

} // namespace

const Kernels& scalar_kernels() { return scalar_table; }

} // namespace tauthresh::simd
