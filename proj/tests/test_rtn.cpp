#include <doctest.h>

#include <random>

#include "relparse/analysis.hpp"
#include "relparse/gen.hpp"
#include "relparse/oracle.hpp"
#include "relparse/rtn.hpp"

using namespace relparse;

namespace {
size_t count_kind(const Rtn& r, TransKind k) {
    size_t n = 0;
    for (const auto& t : r.transitions)
        if (t.kind == k) ++n;
    return n;
}
} // namespace

TEST_CASE("G_A translation shape") {
    Rtn r = grammar_to_rtn(parse_grammar(fixtures::kGA));
    // states: S.1@0, S.1@1, s_start, s_acc, s_stop
    CHECK(r.state_count() == 5);
    CHECK(count_kind(r, TransKind::Call) == 1);
    CHECK(count_kind(r, TransKind::Shift) == 1);
    CHECK(count_kind(r, TransKind::Reduce) == 2);
    const Transition& call = r.transitions[r.out_by_state[r.start][0]];
    CHECK(call.kind == TransKind::Call);
    CHECK(r.state_names[call.callee] == "S.1@0");
    // stop has no outgoing transitions
    CHECK(r.out_by_state[r.stop].empty());
}

TEST_CASE("epsilon alternative contributes a single state with one reduce") {
    Rtn r = grammar_to_rtn(parse_grammar(fixtures::kGAS));
    // alternative "" is one dot state carrying only a reduce
    int found = -1;
    for (size_t s = 0; s < r.state_count(); ++s)
        if (r.state_names[s] == "S.2@0") found = static_cast<int>(s);
    REQUIRE(found >= 0);
    REQUIRE(r.out_by_state[found].size() == 1);
    CHECK(r.transitions[r.out_by_state[found][0]].kind == TransKind::Reduce);
}

TEST_CASE("state count m + n + 3 on random grammars") {
    std::mt19937_64 rng(20260810);
    RandomGrammarParams p;
    int done = 0;
    while (done < 10) {
        Grammar g;
        try {
            g = parse_grammar(random_grammar_text(rng, p));
        } catch (const GrammarError&) {
            continue;
        }
        Rtn r = grammar_to_rtn(g);
        CHECK(r.state_count() == g.symbol_count() + g.alternative_count() + 3);
        ++done;
    }
}

TEST_CASE("optimize merges identical states in recognition mode") {
    Rtn r = grammar_to_rtn(parse_grammar("start S; S : 'a' | 'a';"));
    Rtn o = optimize_rtn(r, OptimizeMode::Recognition);
    CHECK(o.state_count() < r.state_count());
    CHECK(o.transitions.size() < r.transitions.size()); // duplicates collapsed
    // counting mode keeps the parallel structure: two reduces survive
    Rtn oc = optimize_rtn(r, OptimizeMode::Counting);
    CHECK(oc.state_count() < r.state_count());
    size_t reduces = 0;
    for (const auto& t : oc.transitions)
        if (t.kind == TransKind::Reduce) ++reduces;
    size_t origReduces = 0;
    for (const auto& t : r.transitions)
        if (t.kind == TransKind::Reduce) ++origReduces;
    CHECK(reduces == origReduces);
}

TEST_CASE("optimize leaves G_A unchanged") {
    Rtn r = grammar_to_rtn(parse_grammar(fixtures::kGA));
    Rtn o = optimize_rtn(r, OptimizeMode::Recognition);
    CHECK(o.state_count() == r.state_count());
    CHECK(o.transitions.size() == r.transitions.size());
}

TEST_CASE("optimize preserves recognition on random grammars") {
    std::mt19937_64 rng(7);
    RandomGrammarParams p;
    int done = 0;
    size_t pairs = 0;
    while (done < 25) {
        Grammar g;
        try {
            g = parse_grammar(random_grammar_text(rng, p));
        } catch (const GrammarError&) {
            continue;
        }
        Rtn r;
        try {
            r = compute_productivity(grammar_to_rtn(g));
        } catch (const EmptyLanguageError&) {
            continue;
        }
        Rtn o = optimize_rtn(r, OptimizeMode::Recognition);
        std::vector<std::vector<TokenId>> inputs{{}};
        for (size_t i = 0; i < inputs.size() && inputs[i].size() < 4; ++i)
            for (TokenId t = 0; t < static_cast<TokenId>(g.terminals.size()); ++t) {
                auto w = inputs[i];
                w.push_back(t);
                inputs.push_back(w);
            }
        for (const auto& w : inputs) {
            size_t cap = w.size() + r.state_count() + 4;
            auto before = oracle::rtn_recognize(r, w, cap, 2000000);
            auto after = oracle::rtn_recognize(o, w, cap, 2000000);
            if (before.budget_exceeded || after.budget_exceeded) continue;
            CHECK(before.accepted == after.accepted);
            ++pairs;
        }
        ++done;
    }
    CHECK(pairs >= 100);
}
