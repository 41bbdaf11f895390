#include "tauthresh/simd.hpp"

#include <cmath>
#include <immintrin.h>

namespace tauthresh::simd {
namespace {

inline std::int64_t reduce_epi64(__m256i v) {
    alignas(32) std::int64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

std::int64_t concordance_sum_avx2(const double* x, const double* y, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    __m256i acc_plus = _mm256_setzero_si256();
    __m256i acc_minus = _mm256_setzero_si256();
    std::int64_t plus_tail = 0, minus_tail = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const __m256d xk = _mm256_set1_pd(x[k]);
        const __m256d yk = _mm256_set1_pd(y[k]);
        std::size_t l = k + 1;
        for (; l + 4 <= n; l += 4) {
            const __m256d dx = _mm256_sub_pd(xk, _mm256_loadu_pd(x + l));
            const __m256d dy = _mm256_sub_pd(yk, _mm256_loadu_pd(y + l));
            const __m256d px = _mm256_cmp_pd(dx, zero, _CMP_GT_OQ);
            const __m256d nx = _mm256_cmp_pd(dx, zero, _CMP_LT_OQ);
            const __m256d py = _mm256_cmp_pd(dy, zero, _CMP_GT_OQ);
            const __m256d ny = _mm256_cmp_pd(dy, zero, _CMP_LT_OQ);
            const __m256d pos = _mm256_or_pd(_mm256_and_pd(px, py), _mm256_and_pd(nx, ny));
            const __m256d neg = _mm256_or_pd(_mm256_and_pd(px, ny), _mm256_and_pd(nx, py));
            // mask lanes are 0 or -1; subtracting counts the true lanes
            acc_plus = _mm256_sub_epi64(acc_plus, _mm256_castpd_si256(pos));
            acc_minus = _mm256_sub_epi64(acc_minus, _mm256_castpd_si256(neg));
        }
        for (; l < n; ++l) {
            const double dx = x[k] - x[l];
            const double dy = y[k] - y[l];
            const bool px = dx > 0.0, nx = dx < 0.0;
            const bool py = dy > 0.0, ny = dy < 0.0;
            plus_tail += static_cast<std::int64_t>((px && py) || (nx && ny));
            minus_tail += static_cast<std::int64_t>((px && ny) || (nx && py));
        }
    }
    return (reduce_epi64(acc_plus) + plus_tail) - (reduce_epi64(acc_minus) + minus_tail);
}

void hard_threshold_avx2(const double* src, double* dst, std::size_t n, double thresh) {
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFll));
    const __m256d tv = _mm256_set1_pd(thresh);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(src + i);
        const __m256d keep = _mm256_cmp_pd(_mm256_and_pd(v, absmask), tv, _CMP_GT_OQ);
        _mm256_storeu_pd(dst + i, _mm256_and_pd(v, keep));
    }
    for (; i < n; ++i) dst[i] = std::fabs(src[i]) > thresh ? src[i] : 0.0;
}

double sq_diff_sum_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        lanes[i & 3] += d * d;
    }
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

void abs_accumulate_avx2(const double* row, double* acc, std::size_t n) {
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFll));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_and_pd(_mm256_loadu_pd(row + i), absmask);
        _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), v));
    }
    for (; i < n; ++i) acc[i] += std::fabs(row[i]);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    for (; i < n; ++i) lanes[i & 3] += a[i] * b[i];
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

} // namespace

extern const Kernels avx2_table;
const Kernels avx2_table = {
    &concordance_sum_avx2,
    &hard_threshold_avx2,
    &sq_diff_sum_avx2,
    &abs_accumulate_avx2,
    &dot_avx2,
    "avx2",
};

} // namespace tauthresh::simd
