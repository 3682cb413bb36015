#include <doctest.h>

#include "relparse/analysis.hpp"
#include "relparse/oracle.hpp"

using namespace relparse;
using namespace relparse::oracle;

namespace {
std::vector<TokenId> toks(const Grammar& g, const std::string& spaced) {
    std::vector<TokenId> out;
    std::string cur;
    auto flush = [&]() {
        if (cur.empty()) return;
        int t = g.terminal_index(cur);
        REQUIRE(t >= 0);
        out.push_back(t);
        cur.clear();
    };
    for (char c : spaced) {
        if (c == ' ') flush();
        else cur += c;
    }
    flush();
    return out;
}
} // namespace

TEST_CASE("earley on fixtures") {
    Grammar pal = parse_grammar(fixtures::kGPAL);
    CHECK(earley_recognize(pal, toks(pal, "a b a")));
    CHECK(!earley_recognize(pal, toks(pal, "a b")));
    Grammar gas = parse_grammar(fixtures::kGAS);
    CHECK(earley_recognize(gas, {}));
    Grammar gsa = parse_grammar(fixtures::kGSA);
    CHECK(!earley_recognize(gsa, {}));
    CHECK(earley_recognize(gsa, toks(gsa, "a a a")));
    Grammar dyck = parse_grammar(fixtures::kGDYCK);
    CHECK(earley_recognize(dyck, toks(dyck, "( ( ) ) ( )")));
    CHECK(!earley_recognize(dyck, toks(dyck, "( ( )")));
}

TEST_CASE("count_trees: catalan numbers on G_CAT") {
    Grammar g = parse_grammar(fixtures::kGCAT);
    auto catalan = [](int k) {
        std::vector<BigNat> c{BigNat(1)};
        for (int i = 1; i <= k; ++i) {
            BigNat s(0);
            for (int j = 0; j < i; ++j) s += c[j] * c[i - 1 - j];
            c.push_back(s);
        }
        return c[k];
    };
    for (int n : {1, 3, 5, 12}) {
        std::vector<TokenId> w(n, 0);
        auto r = count_trees(g, w);
        REQUIRE(!r.infinite);
        CHECK(r.count == catalan(n - 1));
    }
    CHECK(count_trees(g, std::vector<TokenId>(12, 0)).count.to_decimal() == "58786");
}

TEST_CASE("count_trees: infinite detection and unambiguous grammars") {
    Grammar gi = parse_grammar(fixtures::kGINF);
    CHECK(count_trees(gi, {0}).infinite);
    Grammar gr = parse_grammar(fixtures::kGRINF);
    CHECK(count_trees(gr, {0}).infinite);
    Grammar gsa = parse_grammar(fixtures::kGSA);
    for (int n = 1; n <= 6; ++n) {
        auto r = count_trees(gsa, std::vector<TokenId>(n, 0));
        REQUIRE(!r.infinite);
        CHECK(r.count == BigNat(1));
    }
    // rejected input counts zero
    Grammar pal = parse_grammar(fixtures::kGPAL);
    auto r = count_trees(pal, toks(pal, "a b"));
    CHECK(!r.infinite);
    CHECK(r.count.is_zero());
}

TEST_CASE("earley agrees with count_trees across fixtures") {
    for (const char* f : {fixtures::kGA, fixtures::kGAS, fixtures::kGSA, fixtures::kGCAT,
                          fixtures::kGDYCK, fixtures::kGPAL}) {
        Grammar g = parse_grammar(f);
        std::vector<std::vector<TokenId>> inputs{{}};
        for (size_t i = 0; i < inputs.size() && inputs[i].size() < 5; ++i)
            for (TokenId t = 0; t < static_cast<TokenId>(g.terminals.size()); ++t) {
                auto w = inputs[i];
                w.push_back(t);
                inputs.push_back(w);
            }
        for (const auto& w : inputs) {
            auto c = count_trees(g, w);
            bool accepted = c.infinite || !c.count.is_zero();
            CHECK(earley_recognize(g, w) == accepted);
        }
    }
}

TEST_CASE("enumerate_derivations") {
    Grammar ga = parse_grammar(fixtures::kGA);
    Rtn r = compute_productivity(grammar_to_rtn(ga));
    auto d = enumerate_derivations(r, {0}, 10, 64);
    REQUIRE(d.sequences.size() == 1);
    CHECK(!d.truncated);
    CHECK(d.sequences[0].size() == 4); // call, shift, reduce S, reduce root
    // sequences are reversed: the root reduce comes first
    CHECK(r.transitions[d.sequences[0][0]].kind == TransKind::Reduce);
    CHECK(r.transitions[d.sequences[0][3]].kind == TransKind::Call);

    Grammar gc = parse_grammar(fixtures::kGCAT);
    Rtn rc = compute_productivity(grammar_to_rtn(gc));
    auto dc = enumerate_derivations(rc, {0, 0, 0}, 10, 64);
    CHECK(dc.sequences.size() == 2);
    // rejected input: no sequences
    Grammar pal = parse_grammar(fixtures::kGPAL);
    Rtn rp = compute_productivity(grammar_to_rtn(pal));
    CHECK(enumerate_derivations(rp, toks(pal, "a b"), 10, 128).sequences.empty());
}

TEST_CASE("enumeration size equals count when finite") {
    for (const char* f : {fixtures::kGCAT, fixtures::kGPAL, fixtures::kGDYCK}) {
        Grammar g = parse_grammar(f);
        Rtn r = compute_productivity(grammar_to_rtn(g));
        std::vector<std::vector<TokenId>> inputs{{}};
        for (size_t i = 0; i < inputs.size() && inputs[i].size() < 4; ++i)
            for (TokenId t = 0; t < static_cast<TokenId>(g.terminals.size()); ++t) {
                auto w = inputs[i];
                w.push_back(t);
                inputs.push_back(w);
            }
        for (const auto& w : inputs) {
            auto c = count_trees(g, w);
            REQUIRE(!c.infinite);
            auto d = enumerate_derivations(r, w, 100000,
                                           4 * (w.size() + 1) * r.state_count());
            REQUIRE(!d.truncated);
            uint64_t cnt = 0;
            REQUIRE(c.count.fits_u64(&cnt));
            CHECK(d.sequences.size() == cnt);
            // pairwise distinct
            for (size_t i = 1; i < d.sequences.size(); ++i)
                CHECK(d.sequences[i - 1] != d.sequences[i]);
        }
    }
}

TEST_CASE("config_language on G_A") {
    Grammar g = parse_grammar(fixtures::kGA);
    Rtn r = compute_productivity(grammar_to_rtn(g));
    StateId s0 = kNoState, s1 = kNoState;
    for (size_t s = 0; s < r.state_count(); ++s) {
        if (r.state_names[s] == "S.1@0") s0 = static_cast<StateId>(s);
        if (r.state_names[s] == "S.1@1") s1 = static_cast<StateId>(s);
    }
    StateId acc = kNoState;
    for (size_t s = 0; s < r.state_count(); ++s)
        if (r.state_names[s] == "s_acc") acc = static_cast<StateId>(s);

    auto after_empty = config_language(r, {}, 8, 16, 100000);
    REQUIRE(!after_empty.budget_exceeded);
    CHECK(after_empty.configs.count({r.start, r.stop}));
    CHECK(after_empty.configs.count({s0, acc, r.stop}));

    auto after_a = config_language(r, {0}, 8, 16, 100000);
    REQUIRE(!after_a.budget_exceeded);
    CHECK(after_a.configs.count({s1, acc, r.stop}));
    CHECK(after_a.configs.count({acc, r.stop}));
    CHECK(after_a.configs.count({r.stop}));

    // dead prefix
    Grammar gsa = parse_grammar(fixtures::kGSA);
    Rtn rsa = compute_productivity(grammar_to_rtn(gsa));
    // only terminal is 'a' (id 0); feed a nonexistent-by-construction prefix by
    // shifting twice past the language's reach: "a" then check sets shrink sanely
    auto cfg = config_language(rsa, {0, 0, 0}, 10, 20, 200000);
    CHECK(!cfg.configs.empty());
}
