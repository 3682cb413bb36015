#include <doctest.h>

#include "relparse/grammar.hpp"

using namespace relparse;

TEST_CASE("parse_grammar basic") {
    Grammar g = parse_grammar("start S; S : 'a' S | ;");
    CHECK(g.nonterminals.size() == 1);
    CHECK(g.nonterminals[g.start] == "S");
    CHECK(g.rules[0].alternatives.size() == 2);
    CHECK(g.rules[0].alternatives[0].symbols.size() == 2);
    CHECK(g.rules[0].alternatives[1].symbols.empty());
    CHECK(g.terminals.size() == 1);
    CHECK(g.terminals[0] == "a");
}

TEST_CASE("left recursion accepted unchanged") {
    Grammar g = parse_grammar("start S; S : S 'a' | 'a';");
    REQUIRE(g.rules[0].alternatives.size() == 2);
    const auto& alt = g.rules[0].alternatives[0];
    REQUIRE(alt.symbols.size() == 2);
    CHECK(!alt.symbols[0].is_terminal);
    CHECK(alt.symbols[0].index == g.start);
    CHECK(alt.symbols[1].is_terminal);
}

TEST_CASE("undeclared symbol is an error") {
    CHECK_THROWS_AS(parse_grammar("start S; S : T;"), GrammarError);
}

TEST_CASE("duplicate nonterminal definition is an error") {
    CHECK_THROWS_AS(parse_grammar("start S; S : 'a'; S : 'b';"), GrammarError);
}

TEST_CASE("missing or undeclared start is an error") {
    CHECK_THROWS_AS(parse_grammar("S : 'a';"), GrammarError);
    CHECK_THROWS_AS(parse_grammar("start T; S : 'a';"), GrammarError);
}

TEST_CASE("syntax errors carry position") {
    try {
        parse_grammar("start S;\nS : 'a\n");
        FAIL("expected throw");
    } catch (const GrammarError& e) {
        CHECK(e.line == 2);
        CHECK(e.column > 0);
    }
}

TEST_CASE("comments and unique labels") {
    Grammar g = parse_grammar("start S; # comment\nS : 'a' | 'b'; # more\n");
    CHECK(g.rules[0].alternatives[0].label != g.rules[0].alternatives[1].label);
}

TEST_CASE("all fixture grammars parse") {
    for (const char* f : {fixtures::kGA, fixtures::kGAS, fixtures::kGSA, fixtures::kGCAT,
                          fixtures::kGDYCK, fixtures::kGPAL, fixtures::kGINF,
                          fixtures::kGRINF})
        CHECK_NOTHROW(parse_grammar(f));
}
