#include "tauthresh/simd.hpp"

#include "tauthresh/errors.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace tauthresh::simd {

#ifdef TAUTHRESH_HAVE_AVX2_TU
extern const Kernels avx2_table;
#endif

namespace {

bool cpu_has_avx2() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

std::atomic<const Kernels*> active_table{nullptr};

const Kernels* pick_auto() {
    const Kernels* table = &scalar_kernels();
    if (const Kernels* avx = avx2_kernels_or_null()) table = avx;
    return table;
}

const Kernels* pick_from_env() {
    if (const char* env = std::getenv("TAUTHRESH_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return &scalar_kernels();
        if (std::strcmp(env, "avx2") == 0) {
            if (const Kernels* avx = avx2_kernels_or_null()) return avx;
            throw DomainError("TAUTHRESH_SIMD=avx2 but AVX2 is unavailable");
        }
    }
    return pick_auto();
}

} // namespace

const Kernels* avx2_kernels_or_null() {
#ifdef TAUTHRESH_HAVE_AVX2_TU
    if (cpu_has_avx2()) return &avx2_table;
#endif
    return nullptr;
}

const Kernels& active() {
    const Kernels* table = active_table.load(std::memory_order_acquire);
    if (!table) {
        table = pick_from_env();
        active_table.store(table, std::memory_order_release);
    }
    return *table;
}

void force_backend(const char* name) {
    if (std::strcmp(name, "scalar") == 0) {
        active_table.store(&scalar_kernels(), std::memory_order_release);
    } else if (std::strcmp(name, "avx2") == 0) {
        const Kernels* avx = avx2_kernels_or_null();
        if (!avx) throw DomainError("AVX2 backend unavailable on this machine");
        active_table.store(avx, std::memory_order_release);
    } else if (std::strcmp(name, "auto") == 0) {
        active_table.store(pick_auto(), std::memory_order_release);
    } else {
        throw DomainError("unknown SIMD backend name");
    }
}

} // namespace tauthresh::simd
