#include <doctest.h>

#include "relparse/bignat.hpp"

using relparse::BigNat;

TEST_CASE("bignat basics") {
    CHECK(BigNat(0).is_zero());
    CHECK(BigNat(0).to_decimal() == "0");
    CHECK((BigNat(2) + BigNat(3)).to_decimal() == "5");
    CHECK((BigNat(2) * BigNat(3)).to_decimal() == "6");
    CHECK(BigNat(123456789012345ull).to_decimal() == "123456789012345");
    CHECK(BigNat::from_decimal("123456789012345") == BigNat(123456789012345ull));
}

TEST_CASE("bignat grows past 64 bits") {
    BigNat x(1);
    for (int i = 0; i < 30; ++i) x = x * BigNat(1000000007ull);
    BigNat y = x + x;
    CHECK(y.to_decimal() != x.to_decimal());
    CHECK(x < y);
    uint64_t small = 0;
    CHECK(!x.fits_u64(&small));
    CHECK(BigNat(58786).fits_u64(&small));
    CHECK(small == 58786);
}

TEST_CASE("catalan recurrence sanity") {
    // C_0 = 1, C_k = sum C_i C_{k-1-i}
    std::vector<BigNat> c{BigNat(1)};
    for (int k = 1; k <= 12; ++k) {
        BigNat s(0);
        for (int i = 0; i < k; ++i) s += c[i] * c[k - 1 - i];
        c.push_back(s);
    }
    CHECK(c[2].to_decimal() == "2");
    CHECK(c[4].to_decimal() == "14");
    CHECK(c[11].to_decimal() == "58786");
}
