#include "tauthresh/bigint.hpp"

#include "tauthresh/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tauthresh {

BigUint::BigUint(std::uint64_t v) {
    if (v != 0) limbs_.push_back(v);
}

void BigUint::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigUint& BigUint::operator+=(const BigUint& rhs) {
    if (limbs_.size() < rhs.limbs_.size()) limbs_.resize(rhs.limbs_.size(), 0);
    unsigned __int128 carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        unsigned __int128 s = carry + limbs_[i];
        if (i < rhs.limbs_.size()) s += rhs.limbs_[i];
        limbs_[i] = static_cast<std::uint64_t>(s);
        carry = s >> 64;
    }
    if (carry) limbs_.push_back(static_cast<std::uint64_t>(carry));
    return *this;
}

BigUint& BigUint::operator-=(const BigUint& rhs) {
    if (*this < rhs) throw DomainError("BigUint subtraction would be negative");
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        unsigned __int128 sub = borrow;
        if (i < rhs.limbs_.size()) sub += rhs.limbs_[i];
        if (static_cast<unsigned __int128>(limbs_[i]) >= sub) {
            limbs_[i] = static_cast<std::uint64_t>(limbs_[i] - sub);
            borrow = 0;
        } else {
            limbs_[i] = static_cast<std::uint64_t>(
                (static_cast<unsigned __int128>(1) << 64) + limbs_[i] - sub);
            borrow = 1;
        }
    }
    trim();
    return *this;
}

BigUint& BigUint::mul_u64(std::uint64_t m) {
    if (m == 0 || limbs_.empty()) {
        limbs_.clear();
        return *this;
    }
    unsigned __int128 carry = 0;
    for (auto& limb : limbs_) {
        unsigned __int128 prod = static_cast<unsigned __int128>(limb) * m + carry;
        limb = static_cast<std::uint64_t>(prod);
        carry = prod >> 64;
    }
    if (carry) limbs_.push_back(static_cast<std::uint64_t>(carry));
    return *this;
}

std::strong_ordering BigUint::operator<=>(const BigUint& rhs) const {
    if (limbs_.size() != rhs.limbs_.size())
        return limbs_.size() <=> rhs.limbs_.size();
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        if (limbs_[i] != rhs.limbs_[i]) return limbs_[i] <=> rhs.limbs_[i];
    }
    return std::strong_ordering::equal;
}

std::string BigUint::to_string() const {
    if (limbs_.empty()) return "0";
    // Repeated divmod by 10^19 (largest power of ten in a limb).
    constexpr std::uint64_t chunk = 10000000000000000000ull;
    std::vector<std::uint64_t> work(limbs_);
    std::string out;
    while (!work.empty()) {
        unsigned __int128 rem = 0;
        for (std::size_t i = work.size(); i-- > 0;) {
            unsigned __int128 cur = (rem << 64) | work[i];
            work[i] = static_cast<std::uint64_t>(cur / chunk);
            rem = cur % chunk;
        }
        while (!work.empty() && work.back() == 0) work.pop_back();
        std::string digits = std::to_string(static_cast<std::uint64_t>(rem));
        if (work.empty()) {
            out.insert(0, digits);
        } else {
            out.insert(0, std::string(19 - digits.size(), '0') + digits);
        }
    }
    return out;
}

long double BigUint::to_long_double() const {
    long double acc = 0.0L;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        acc = acc * 18446744073709551616.0L + static_cast<long double>(limbs_[i]);
    }
    return acc;
}

BigUint BigUint::factorial(unsigned n) {
    BigUint r(1);
    for (unsigned k = 2; k <= n; ++k) r.mul_u64(k);
    return r;
}

} // namespace tauthresh
