// semiring.hpp - built-in semirings over transition languages
#pragma once

#include <algorithm>
#include <cassert>
#include <memory>
#include <string>
#include <vector>

#include "relparse/bignat.hpp"
#include "relparse/forest.hpp"
#include "relparse/ids.hpp"
#include "relparse/rtn.hpp"

namespace relparse {

enum class SemiringKind { Boolean, Count, Forest, First, Priority };

inline const char* to_string(SemiringKind k) {
    switch (k) {
    case SemiringKind::Boolean: return "bool";
    case SemiringKind::Count: return "count";
    case SemiringKind::Forest: return "forest";
    case SemiringKind::First: return "first";
    case SemiringKind::Priority: return "priority";
    }
    return "?";
}

// Values represent sets of *reversed* accepting transition sequences; mul is
// concatenation of the reversed fragments in argument order.

struct BoolSemiring {
    using Value = char;
    static constexpr SemiringKind kKind = SemiringKind::Boolean;
    static constexpr bool kCommutative = true;
    static constexpr bool kIdempotent = true;
    static constexpr bool kHasStar = true;

    Value zero() const { return 0; }
    Value one() const { return 1; }
    Value add(Value a, Value b) const { return a | b; }
    Value mul(Value a, Value b) const { return a & b; }
    bool is_zero(Value a) const { return a == 0; }
    Value star(Value) const { return 1; }
    bool equal(Value a, Value b) const { return a == b; }
    size_t hash(Value a) const { return a; }
    Value valuation(TransId) const { return 1; }
};

struct CountSemiring {
    using Value = BigNat;
    static constexpr SemiringKind kKind = SemiringKind::Count;
    static constexpr bool kCommutative = true;
    static constexpr bool kIdempotent = false;
    static constexpr bool kHasStar = false;

    Value zero() const { return BigNat(0); }
    Value one() const { return BigNat(1); }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    bool is_zero(const Value& a) const { return a.is_zero(); }
    Value star(const Value&) const { throw StarRequiredError("count semiring has no star"); }
    bool equal(const Value& a, const Value& b) const { return a == b; }
    size_t hash(const Value& a) const { return a.hash(); }
    Value valuation(TransId) const { return BigNat(1); }
};

struct ForestSemiring {
    using Value = ForestArena::NodeId;
    static constexpr SemiringKind kKind = SemiringKind::Forest;
    static constexpr bool kCommutative = false;
    static constexpr bool kIdempotent = false;
    static constexpr bool kHasStar = false;

    std::shared_ptr<ForestArena> arena = std::make_shared<ForestArena>();

    Value zero() const { return arena->empty(); }
    Value one() const { return arena->eps(); }
    Value add(Value a, Value b) const { return arena->alt(a, b); }
    Value mul(Value a, Value b) const { return arena->cat(a, b); }
    bool is_zero(Value a) const { return a == arena->empty(); }
    Value star(Value) const { throw StarRequiredError("forest semiring has no star"); }
    bool equal(Value a, Value b) const { return a == b; } // hash-consed identity
    size_t hash(Value a) const { return a; }
    Value valuation(TransId d) const { return arena->leaf(d); }
};

// {zero, a single sequence, AMBIG}: add of two distinct nonzero values is the
// ambiguity marker; mul concatenates until a marker appears.
struct FirstSemiring {
    struct Value {
        uint8_t tag = 0; // 0 zero, 1 seq, 2 ambig
        std::vector<TransId> seq;
        bool operator==(const Value& o) const { return tag == o.tag && seq == o.seq; }
    };
    static constexpr SemiringKind kKind = SemiringKind::First;
    static constexpr bool kCommutative = false;
    static constexpr bool kIdempotent = true;
    static constexpr bool kHasStar = false;

    Value zero() const { return {}; }
    Value one() const { return {1, {}}; }
    static Value ambig() { return {2, {}}; }

    Value add(const Value& a, const Value& b) const {
        if (a.tag == 0) return b;
        if (b.tag == 0) return a;
        if (a == b) return a;
        return ambig();
    }
    Value mul(const Value& a, const Value& b) const {
        if (a.tag == 0 || b.tag == 0) return zero();
        if (a.tag == 2 || b.tag == 2) return ambig();
        Value r{1, a.seq};
        r.seq.insert(r.seq.end(), b.seq.begin(), b.seq.end());
        return r;
    }
    bool is_zero(const Value& a) const { return a.tag == 0; }
    Value star(const Value&) const { throw StarRequiredError("first semiring has no star"); }
    bool equal(const Value& a, const Value& b) const { return a == b; }
    size_t hash(const Value& a) const {
        size_t h = a.tag;
        for (TransId d : a.seq) h = h * 1315423911u ^ static_cast<size_t>(d);
        return h;
    }
    Value valuation(TransId d) const { return {1, {d}}; }
};

// Max-semiring over sequences under a total order that concatenation on
// either side preserves: shorter sequence wins, ties by per-transition rank
// (smaller rank = higher priority), then nothing is left to compare.
struct PrioritySemiring {
    struct Value {
        bool some = false;
        std::vector<TransId> seq;
        bool operator==(const Value& o) const { return some == o.some && seq == o.seq; }
    };
    static constexpr SemiringKind kKind = SemiringKind::Priority;
    static constexpr bool kCommutative = false;
    static constexpr bool kIdempotent = true;
    static constexpr bool kHasStar = false;

    std::vector<int> rank; // per transition id

    Value zero() const { return {}; }
    Value one() const { return {true, {}}; }

    // true when a is strictly preferred over b (both nonzero)
    bool preferred(const Value& a, const Value& b) const {
        if (a.seq.size() != b.seq.size()) return a.seq.size() < b.seq.size();
        for (size_t i = 0; i < a.seq.size(); ++i)
            if (rank[a.seq[i]] != rank[b.seq[i]]) return rank[a.seq[i]] < rank[b.seq[i]];
        return false;
    }
    Value add(const Value& a, const Value& b) const {
        if (!a.some) return b;
        if (!b.some) return a;
        return preferred(b, a) ? b : a;
    }
    Value mul(const Value& a, const Value& b) const {
        if (!a.some || !b.some) return zero();
        Value r{true, a.seq};
        r.seq.insert(r.seq.end(), b.seq.begin(), b.seq.end());
        return r;
    }
    bool is_zero(const Value& a) const { return !a.some; }
    Value star(const Value&) const { throw StarRequiredError("priority semiring has no star"); }
    bool equal(const Value& a, const Value& b) const { return a == b; }
    size_t hash(const Value& a) const {
        size_t h = a.some ? 2 : 1;
        for (TransId d : a.seq) h = h * 1315423911u ^ static_cast<size_t>(d);
        return h;
    }
    Value valuation(TransId d) const { return {true, {d}}; }
};

// Ranks for the priority semiring: listed production labels get the highest
// ranks in file order; everything else follows in transition enumeration
// order.
inline std::vector<int> priority_ranks(const Rtn& rtn,
                                       const std::vector<std::string>& ordered_labels) {
    std::vector<int> labelRank(rtn.labels.size(), -1);
    for (size_t i = 0; i < ordered_labels.size(); ++i) {
        for (size_t l = 0; l < rtn.labels.size(); ++l)
            if (rtn.labels[l] == ordered_labels[i]) labelRank[l] = static_cast<int>(i);
    }
    std::vector<int> rank(rtn.transitions.size());
    int base = static_cast<int>(ordered_labels.size());
    for (size_t d = 0; d < rtn.transitions.size(); ++d) {
        const Transition& t = rtn.transitions[d];
        if (t.kind == TransKind::Reduce && labelRank[t.label] >= 0)
            rank[d] = labelRank[t.label];
        else
            rank[d] = base + static_cast<int>(d);
    }
    return rank;
}

} // namespace relparse
