#include "relparse/bignat.hpp"

#include <algorithm>
#include <stdexcept>

namespace relparse {

static constexpr uint32_t kBase = 1000000000u;

BigNat::BigNat(uint64_t v) {
    while (v) {
        digits_.push_back(static_cast<uint32_t>(v % kBase));
        v /= kBase;
    }
}

void BigNat::trim() {
    while (!digits_.empty() && digits_.back() == 0) digits_.pop_back();
}

BigNat BigNat::from_decimal(const std::string& s) {
    BigNat r;
    if (s.empty()) throw std::invalid_argument("empty decimal");
    for (size_t i = s.size(); i > 0;) {
        size_t lo = i >= 9 ? i - 9 : 0;
        r.digits_.push_back(static_cast<uint32_t>(std::stoul(s.substr(lo, i - lo))));
        i = lo;
    }
    r.trim();
    return r;
}

std::string BigNat::to_decimal() const {
    if (digits_.empty()) return "0";
    std::string out = std::to_string(digits_.back());
    for (size_t i = digits_.size() - 1; i > 0;) {
        --i;
        std::string part = std::to_string(digits_[i]);
        out += std::string(9 - part.size(), '0') + part;
    }
    return out;
}

BigNat BigNat::operator+(const BigNat& o) const {
    BigNat r;
    const size_t n = std::max(digits_.size(), o.digits_.size());
    r.digits_.reserve(n + 1);
    uint64_t carry = 0;
    for (size_t i = 0; i < n; ++i) {
        uint64_t s = carry;
        if (i < digits_.size()) s += digits_[i];
        if (i < o.digits_.size()) s += o.digits_[i];
        r.digits_.push_back(static_cast<uint32_t>(s % kBase));
        carry = s / kBase;
    }
    if (carry) r.digits_.push_back(static_cast<uint32_t>(carry));
    return r;
}

BigNat BigNat::operator*(const BigNat& o) const {
    if (is_zero() || o.is_zero()) return BigNat();
    BigNat r;
    r.digits_.assign(digits_.size() + o.digits_.size(), 0);
    for (size_t i = 0; i < digits_.size(); ++i) {
        uint64_t carry = 0;
        for (size_t j = 0; j < o.digits_.size(); ++j) {
            uint64_t cur = r.digits_[i + j] +
                           static_cast<uint64_t>(digits_[i]) * o.digits_[j] + carry;
            r.digits_[i + j] = static_cast<uint32_t>(cur % kBase);
            carry = cur / kBase;
        }
        size_t k = i + o.digits_.size();
        while (carry) {
            uint64_t cur = r.digits_[k] + carry;
            r.digits_[k] = static_cast<uint32_t>(cur % kBase);
            carry = cur / kBase;
            ++k;
        }
    }
    r.trim();
    return r;
}

bool BigNat::operator<(const BigNat& o) const {
    if (digits_.size() != o.digits_.size()) return digits_.size() < o.digits_.size();
    for (size_t i = digits_.size(); i > 0;) {
        --i;
        if (digits_[i] != o.digits_[i]) return digits_[i] < o.digits_[i];
    }
    return false;
}

bool BigNat::fits_u64(uint64_t* out) const {
    uint64_t v = 0;
    if (digits_.size() > 3) return false;
    for (size_t i = digits_.size(); i > 0;) {
        --i;
        if (v > (UINT64_MAX - digits_[i]) / kBase) return false;
        v = v * kBase + digits_[i];
    }
    if (out) *out = v;
    return true;
}

size_t BigNat::hash() const {
    size_t h = 0x9e3779b97f4a7c15ull;
    for (uint32_t d : digits_) h = h * 1099511628211ull ^ d;
    return h;
}

} // namespace relparse
