#include <doctest.h>

#include "relparse/analysis.hpp"
#include "relparse/oracle.hpp"

using namespace relparse;

namespace {
Rtn make(const char* text) { return compute_productivity(grammar_to_rtn(parse_grammar(text))); }

StateId state_by_name(const Rtn& r, const std::string& name) {
    for (size_t s = 0; s < r.state_count(); ++s)
        if (r.state_names[s] == name) return static_cast<StateId>(s);
    return kNoState;
}
} // namespace

TEST_CASE("nullability on fixtures") {
    SUBCASE("G_AS: start of the empty alternative is nullable") {
        Rtn r = make(fixtures::kGAS);
        auto nul = compute_nullability(r);
        CHECK(nul[state_by_name(r, "S.2@0")]);
        CHECK(!nul[state_by_name(r, "S.1@0")]); // before the shift
        CHECK(!nul[r.stop]);
    }
    SUBCASE("G_DYCK: start of the empty alternative nullable") {
        Rtn r = make(fixtures::kGDYCK);
        auto nul = compute_nullability(r);
        CHECK(nul[state_by_name(r, "S.2@0")]);
    }
    SUBCASE("end-of-production states are nullable (bare reduce)") {
        Rtn r = make(fixtures::kGSA);
        auto nul = compute_nullability(r);
        CHECK(nul[state_by_name(r, "S.1@2")]);
        CHECK(nul[state_by_name(r, "S.2@1")]);
        CHECK(!nul[state_by_name(r, "S.1@0")]);
        CHECK(!nul[r.start]);
    }
}

TEST_CASE("nullability equals bounded oracle nulling simulation") {
    for (const char* f : {fixtures::kGA, fixtures::kGAS, fixtures::kGSA, fixtures::kGCAT,
                          fixtures::kGDYCK, fixtures::kGPAL}) {
        Rtn r = make(f);
        auto nul = compute_nullability(r);
        size_t bound = r.state_count() * r.transitions.size();
        for (size_t s = 0; s < r.state_count(); ++s) {
            auto runs = oracle::enumerate_nulling(r, static_cast<StateId>(s), 1, bound);
            CHECK(static_cast<bool>(nul[s]) == !runs.sequences.empty());
        }
    }
}

TEST_CASE("productivity pruning") {
    SUBCASE("nonterminating branch removed") {
        Rtn r = make("start S; S:'a'|T; T: T 'b';");
        // T's states are gone; S keeps the 'a' alternative
        CHECK(state_by_name(r, "T.1@0") == kNoState);
        CHECK(state_by_name(r, "S.1@0") != kNoState);
        for (const auto& t : r.transitions) {
            CHECK(t.source < static_cast<StateId>(r.state_count()));
        }
    }
    SUBCASE("fully productive grammar unchanged") {
        Rtn raw = grammar_to_rtn(parse_grammar(fixtures::kGCAT));
        Rtn r = compute_productivity(raw);
        CHECK(r.state_count() == raw.state_count());
    }
    SUBCASE("empty language rejected") {
        CHECK_THROWS_AS(make("start S; S: S;"), EmptyLanguageError);
    }
}

TEST_CASE("ambiguity classification of fixtures") {
    auto classify = [](const char* f) {
        Rtn r = make(f);
        return classify_ambiguity(r, compute_nullability(r)).ambiguity_class;
    };
    CHECK(classify(fixtures::kGA) == AmbiguityClass::Finite);
    CHECK(classify(fixtures::kGAS) == AmbiguityClass::Finite);
    CHECK(classify(fixtures::kGSA) == AmbiguityClass::Finite);
    CHECK(classify(fixtures::kGCAT) == AmbiguityClass::Finite);
    CHECK(classify(fixtures::kGDYCK) == AmbiguityClass::Finite);
    CHECK(classify(fixtures::kGPAL) == AmbiguityClass::Finite);
    CHECK(classify(fixtures::kGINF) == AmbiguityClass::NonregularInfinite);
    CHECK(classify(fixtures::kGRINF) == AmbiguityClass::RegularInfinite);
}

TEST_CASE("classification backed by the tree-count oracle") {
    // G_INF: "a" has unboundedly many trees
    Grammar gi = parse_grammar(fixtures::kGINF);
    auto ci = oracle::count_trees(gi, {0});
    CHECK(ci.infinite);
    // G_RINF: same, and the classifier must keep it out of the Finite class
    Grammar gr = parse_grammar(fixtures::kGRINF);
    auto cr = oracle::count_trees(gr, {0});
    CHECK(cr.infinite);
    // finite-class fixtures have finite counts on short inputs
    Grammar gc = parse_grammar(fixtures::kGCAT);
    auto cc = oracle::count_trees(gc, {0, 0, 0});
    CHECK(!cc.infinite);
    CHECK(cc.count == BigNat(2));
}

TEST_CASE("nonregular witness names a cycle") {
    Rtn r = make(fixtures::kGINF);
    auto a = classify_ambiguity(r, compute_nullability(r));
    CHECK(!a.cycle_witness.empty());
}
