// bignat.hpp - arbitrary-precision unsigned integers (add/mul/compare only)
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace relparse {

// Base-1e9 little-endian digit vector. Enough arithmetic for tree counting;
// no division, no subtraction.
class BigNat {
public:
    BigNat() = default;
    BigNat(uint64_t v);

    static BigNat from_decimal(const std::string& s);

    bool is_zero() const { return digits_.empty(); }
    std::string to_decimal() const;

    BigNat operator+(const BigNat& o) const;
    BigNat operator*(const BigNat& o) const;
    BigNat& operator+=(const BigNat& o) { *this = *this + o; return *this; }

    bool operator==(const BigNat& o) const { return digits_ == o.digits_; }
    bool operator!=(const BigNat& o) const { return !(*this == o); }
    bool operator<(const BigNat& o) const;
    bool operator<=(const BigNat& o) const { return *this < o || *this == o; }

    // Value as uint64 if it fits, for tests and small comparisons.
    bool fits_u64(uint64_t* out) const;

    size_t hash() const;

private:
    std::vector<uint32_t> digits_; // base 1e9, empty == 0
    void trim();
};

} // namespace relparse
