#pragma once

#include <cstddef>
#include <cstdint>

namespace tauthresh::simd {

// Data-parallel inner loops behind a runtime-dispatched kernel table.
// Both backends produce bit-identical results: integer kernels are exact,
// and the floating-point reductions use the same fixed 4-lane accumulator
// order in the scalar and AVX2 paths (compiled with -ffp-contract=off).
struct Kernels {
    // sum over k<l of sign(x[k]-x[l]) * sign(y[k]-y[l]); exact integer
    std::int64_t (*concordance_sum)(const double* x, const double* y, std::size_t n);
    // dst[i] = |src[i]| > thresh ? src[i] : 0
    void (*hard_threshold)(const double* src, double* dst, std::size_t n, double thresh);
    // sum of (a[i]-b[i])^2, fixed lane order
    double (*sq_diff_sum)(const double* a, const double* b, std::size_t n);
    // acc[i] += |row[i]| elementwise
    void (*abs_accumulate)(const double* row, double* acc, std::size_t n);
    // dot product, fixed lane order
    double (*dot)(const double* a, const double* b, std::size_t n);
    const char* name;
};

const Kernels& scalar_kernels();
const Kernels* avx2_kernels_or_null(); // null when not compiled in or CPU lacks AVX2

// Active table: AVX2 when available, overridable with TAUTHRESH_SIMD=scalar|avx2.
const Kernels& active();
// Test hook; name is "scalar", "avx2" or "auto". Throws on unavailable backend.
void force_backend(const char* name);

} // namespace tauthresh::simd
