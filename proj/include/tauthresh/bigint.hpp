#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace tauthresh {

// Unsigned arbitrary-precision integer, little-endian 64-bit limbs.
// Supports exactly what the exact Mahonian DP needs: add, subtract
// (guaranteed non-negative result), multiply by a machine word,
// comparison and decimal output.
class BigUint {
public:
    BigUint() = default;
    explicit BigUint(std::uint64_t v);

    BigUint& operator+=(const BigUint& rhs);
    // pre: *this >= rhs
    BigUint& operator-=(const BigUint& rhs);
    BigUint& mul_u64(std::uint64_t m);

    bool operator==(const BigUint& rhs) const = default;
    std::strong_ordering operator<=>(const BigUint& rhs) const;

    bool is_zero() const { return limbs_.empty(); }
    std::string to_string() const;
    long double to_long_double() const;

    static BigUint factorial(unsigned n);

private:
    void trim();
    std::vector<std::uint64_t> limbs_; // empty means zero
};

} // namespace tauthresh
