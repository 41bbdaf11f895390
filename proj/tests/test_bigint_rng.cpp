#include "tauthresh/bigint.hpp"
#include "tauthresh/errors.hpp"
#include "tauthresh/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace tauthresh;

TEST_CASE("BigUint arithmetic basics") {
    BigUint a(123456789);
    BigUint b(987654321);
    BigUint c = a;
    c += b;
    CHECK(c.to_string() == "1111111110");
    c -= b;
    CHECK(c == a);
    CHECK(BigUint(0).to_string() == "0");
    CHECK(BigUint(0).is_zero());

    BigUint big(18446744073709551615ull); // 2^64 - 1
    big += BigUint(1);
    CHECK(big.to_string() == "18446744073709551616");

    CHECK(a < b);
    CHECK(b > a);
    CHECK_THROWS_AS(a -= b, DomainError);
}

TEST_CASE("BigUint factorial and conversions") {
    CHECK(BigUint::factorial(20).to_string() == "2432902008176640000");
    CHECK(BigUint::factorial(25).to_string() == "15511210043330985984000000");
    // 30! against lgamma
    const long double ld = BigUint::factorial(30).to_long_double();
    const long double ref = expl(lgammal(31.0L));
    CHECK(std::fabs(static_cast<double>(ld / ref - 1.0L)) < 1e-12);
}

TEST_CASE("BigUint mul_u64 carries") {
    BigUint x(1);
    for (int i = 0; i < 2; ++i) x.mul_u64(18446744073709551615ull);
    CHECK(x.to_string() == "340282366920938463426481119284349108225");
}

TEST_CASE("CounterRng determinism and stream separation") {
    CounterRng a(42, 7);
    CounterRng b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    CounterRng c(42, 8);
    int diff = 0;
    CounterRng a2(42, 7);
    for (int i = 0; i < 64; ++i)
        if (a2.next_u64() != c.next_u64()) ++diff;
    CHECK(diff > 60);
}

TEST_CASE("CounterRng uniform range and normal moments") {
    CounterRng rng(1, 0);
    double lo = 1.0, hi = 0.0;
    bool in_range = true;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.next_unit();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        if (!(u > 0.0 && u <= 1.0)) in_range = false;
    }
    CHECK(in_range);
    CHECK(lo < 1e-3);
    CHECK(hi > 1.0 - 1e-3);

    CounterRng rng2(2, 0);
    double sum = 0.0, ss = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng2.next_normal();
        sum += z;
        ss += z * z;
    }
    const double mean = sum / n;
    const double var = ss / n - mean * mean;
    CHECK(std::fabs(mean) < 0.01);
    CHECK(std::fabs(var - 1.0) < 0.02);
}
