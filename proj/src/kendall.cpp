#include "tauthresh/kendall.hpp"

#include "tauthresh/errors.hpp"
#include "tauthresh/simd.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numeric>
#include <thread>

namespace tauthresh {

SampleMatrix::SampleMatrix(int n, int p) : n_(n), p_(p) {
    if (n < 2 || p < 1) throw DimensionError("SampleMatrix requires n >= 2, p >= 1");
    data_.assign(static_cast<std::size_t>(n) * p, 0.0);
}

SampleMatrix::SampleMatrix(int n, int p, std::vector<double> data) : n_(n), p_(p) {
    if (n < 2 || p < 1) throw DimensionError("SampleMatrix requires n >= 2, p >= 1");
    if (data.size() != static_cast<std::size_t>(n) * p)
        throw DimensionError("SampleMatrix data size mismatch");
    data_ = std::move(data);
}

std::vector<double> SampleMatrix::column(int j) const {
    std::vector<double> col(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) col[i] = (*this)(i, j);
    return col;
}

std::int64_t concordance_sum_naive(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionError("pair length mismatch");
    if (x.size() < 2) throw DimensionError("need at least two observations");
    return simd::active().concordance_sum(x.data(), y.data(), x.size());
}

namespace {

// bottom-up merge sort with an insertion-sorted base; every element shift in
// the base pass and every take-from-right in a merge is a counted inversion
std::uint64_t merge_sort_count(std::vector<int>& v, std::vector<int>& buf, std::size_t lo,
                               std::size_t hi) {
    const std::size_t n = hi - lo;
    if (n < 2) return 0;
    std::uint64_t inv = 0;
    constexpr std::size_t base = 32;
    for (std::size_t blo = lo; blo < hi; blo += base) {
        const std::size_t bhi = std::min(hi, blo + base);
        for (std::size_t i = blo + 1; i < bhi; ++i) {
            const int x = v[i];
            std::size_t j = i;
            while (j > blo && v[j - 1] > x) { // strict: equal keys not inverted
                v[j] = v[j - 1];
                --j;
            }
            inv += i - j;
            v[j] = x;
        }
    }
    int* src = v.data();
    int* dst = buf.data();
    for (std::size_t width = base; width < n; width *= 2) {
        for (std::size_t start = lo; start < hi; start += 2 * width) {
            const std::size_t mid = std::min(hi, start + width);
            const std::size_t end = std::min(hi, start + 2 * width);
            std::size_t i = start, j = mid, out = start;
            while (i < mid && j < end) {
                if (src[j] < src[i]) {
                    inv += mid - i;
                    dst[out++] = src[j++];
                } else {
                    dst[out++] = src[i++];
                }
            }
            while (i < mid) dst[out++] = src[i++];
            while (j < end) dst[out++] = src[j++];
        }
        std::swap(src, dst);
    }
    if (src != v.data()) std::copy(src + lo, src + hi, v.data() + lo);
    return inv;
}

// inversion count of a permutation of 0..n-1 via a bitmap of seen values:
// each element adds the number of already-seen values above it; O(n^2/64)
// with word ops, which beats the merge sort up to a few thousand elements
std::uint64_t count_inversions_bitset(const int* seq, std::size_t n,
                                      std::vector<std::uint64_t>& bits) {
    const std::size_t nwords = (n + 63) / 64;
    bits.assign(nwords, 0);
    std::uint64_t inv = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const unsigned v = static_cast<unsigned>(seq[k]);
        const std::size_t w = v >> 6;
        inv += static_cast<std::uint64_t>(std::popcount(bits[w] >> (v & 63) >> 1));
        for (std::size_t ww = w + 1; ww < nwords; ++ww)
            inv += static_cast<std::uint64_t>(std::popcount(bits[ww]));
        bits[w] |= 1ull << (v & 63);
    }
    return inv;
}

constexpr std::size_t bitset_count_cap = 4096;

bool has_ties_sorted(std::span<const double> sorted) {
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] == sorted[i - 1]) return true;
    return false;
}

// ranks of v by ascending value assuming v is tie-free
std::vector<int> dense_ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return v[a] < v[b]; });
    std::vector<int> rank(n);
    for (std::size_t k = 0; k < n; ++k) rank[order[k]] = static_cast<int>(k);
    return rank;
}

} // namespace

std::uint64_t count_inversions_inplace(std::vector<int>& v) {
    std::vector<int> buf(v.size());
    return merge_sort_count(v, buf, 0, v.size());
}

std::int64_t concordance_sum_fast(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionError("pair length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw DimensionError("need at least two observations");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return x[a] < x[b]; });
    // tie detection on both coordinates; the merge-sort identity only covers
    // tie-free data, so ties take the definitional O(n^2) sum
    std::vector<double> sorted_x(n), sorted_y(n);
    for (std::size_t k = 0; k < n; ++k) sorted_x[k] = x[order[k]];
    if (has_ties_sorted(sorted_x)) return concordance_sum_naive(x, y);
    sorted_y.assign(y.begin(), y.end());
    std::sort(sorted_y.begin(), sorted_y.end());
    if (has_ties_sorted(sorted_y)) return concordance_sum_naive(x, y);

    const std::vector<int> yrank = dense_ranks(y);
    std::vector<int> seq(n);
    for (std::size_t k = 0; k < n; ++k) seq[k] = yrank[order[k]];
    std::uint64_t discordant;
    if (n <= bitset_count_cap) {
        std::vector<std::uint64_t> bits;
        discordant = count_inversions_bitset(seq.data(), n, bits);
    } else {
        discordant = count_inversions_inplace(seq);
    }
    const std::int64_t total = static_cast<std::int64_t>(n) * (static_cast<std::int64_t>(n) - 1) / 2;
    return total - 2 * static_cast<std::int64_t>(discordant);
}

namespace {

double tau_from_sum(std::int64_t s, std::size_t n) {
    return 2.0 * static_cast<double>(s) /
           (static_cast<double>(n) * (static_cast<double>(n) - 1.0));
}

} // namespace

double kendall_tau_pair_naive(std::span<const double> x, std::span<const double> y) {
    return tau_from_sum(concordance_sum_naive(x, y), x.size());
}

double kendall_tau_pair_fast(std::span<const double> x, std::span<const double> y) {
    return tau_from_sum(concordance_sum_fast(x, y), x.size());
}

CorrelationMatrix kendall_tau_matrix(const SampleMatrix& x, int threads, bool naive) {
    const int n = x.rows();
    const int p = x.cols();
    SymMatrix out(p);
    for (int i = 0; i < p; ++i) out.set(i, i, 1.0);
    if (p == 1) return CorrelationMatrix::from_sym(std::move(out));

    std::vector<std::vector<double>> cols(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) cols[j] = x.column(j);

    // per-column sort orders and ranks; a tied column sends its pairs to the
    // naive path
    std::vector<std::vector<int>> orders(static_cast<std::size_t>(p));
    std::vector<std::vector<int>> ranks(static_cast<std::size_t>(p));
    std::vector<char> tied(static_cast<std::size_t>(p), 0);
    for (int j = 0; j < p; ++j) {
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        const auto& col = cols[j];
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return col[a] < col[b]; });
        for (int k = 1; k < n; ++k)
            if (col[order[k]] == col[order[k - 1]]) {
                tied[j] = 1;
                break;
            }
        if (!tied[j]) {
            std::vector<int> rank(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) rank[order[k]] = k;
            ranks[j] = std::move(rank);
        }
        orders[j] = std::move(order);
    }

    const std::int64_t total_pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
    const std::int64_t npairs = static_cast<std::int64_t>(p) * (p - 1) / 2;
    std::atomic<std::int64_t> next{0};

    const bool use_bitset = static_cast<std::size_t>(n) <= bitset_count_cap;
    auto worker = [&]() {
        std::vector<int> seq(static_cast<std::size_t>(n));
        std::vector<int> buf(static_cast<std::size_t>(n));
        std::vector<std::uint64_t> bits;
        for (;;) {
            const std::int64_t t = next.fetch_add(1, std::memory_order_relaxed);
            if (t >= npairs) break;
            // unrank the pair index
            int i = static_cast<int>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(t))) / 2.0);
            while (static_cast<std::int64_t>(i) * (i + 1) / 2 > t) --i;
            while (static_cast<std::int64_t>(i + 1) * (i + 2) / 2 <= t) ++i;
            const int col_b = i + 1;
            const int col_a = static_cast<int>(t - static_cast<std::int64_t>(i) * (i + 1) / 2);

            std::int64_t s;
            if (naive || tied[col_a] || tied[col_b]) {
                s = simd::active().concordance_sum(cols[col_a].data(), cols[col_b].data(),
                                                   static_cast<std::size_t>(n));
            } else {
                const auto& order = orders[col_a];
                const auto& rank = ranks[col_b];
                for (int k = 0; k < n; ++k) seq[k] = rank[order[k]];
                const std::uint64_t disc =
                    use_bitset ? count_inversions_bitset(seq.data(), static_cast<std::size_t>(n), bits)
                               : merge_sort_count(seq, buf, 0, static_cast<std::size_t>(n));
                s = total_pairs - 2 * static_cast<std::int64_t>(disc);
            }
            out.set(col_a, col_b, tau_from_sum(s, static_cast<std::size_t>(n)));
        }
    };

    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    nthreads = static_cast<int>(std::min<std::int64_t>(nthreads, npairs));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return CorrelationMatrix::from_sym(std::move(out));
}

std::uint64_t inversion_count(std::span<const int> perm) {
    const std::size_t n = perm.size();
    std::vector<char> seen(n, 0);
    for (int v : perm) {
        if (v < 0 || static_cast<std::size_t>(v) >= n || seen[v])
            throw DomainError("inversion_count: input is not a permutation of 0..n-1");
        seen[v] = 1;
    }
    std::vector<int> work(perm.begin(), perm.end());
    return count_inversions_inplace(work);
}

} // namespace tauthresh
