// grammar.hpp - grammar text format and the Grammar structure
#pragma once

#include <string>
#include <vector>

#include "relparse/ids.hpp"

namespace relparse {

// One alternative of a rule: a sequence of symbol references.
struct GrammarSymbol {
    bool is_terminal = false;
    int index = 0; // into Grammar::terminals or Grammar::nonterminals
};

struct Alternative {
    std::vector<GrammarSymbol> symbols;
    std::string label; // unique production label, e.g. "S.1"
};

struct Rule {
    std::vector<Alternative> alternatives; // in source order
};

struct Grammar {
    std::vector<std::string> nonterminals;
    std::vector<std::string> terminals;
    std::vector<Rule> rules; // parallel to nonterminals
    int start = 0;           // index into nonterminals

    int terminal_index(const std::string& name) const; // -1 if absent
    int nonterminal_index(const std::string& name) const;
    size_t alternative_count() const;
    size_t symbol_count() const;
};

// Parses the grammar file format:
//   start <Name>;
//   <Name> : alt | alt | ... ;
// where an alt is a whitespace-separated list of <Name> (nonterminal) or
// 'token' (terminal); an empty alt is the empty sequence; '#' starts a line
// comment. Throws GrammarError with line/column on malformed input,
// undeclared symbols, duplicate definitions or a missing start declaration.
Grammar parse_grammar(const std::string& text);

// Fixture grammars used across the test-suite.
namespace fixtures {
inline const char* kGA    = "start S; S:'a';";
inline const char* kGAS   = "start S; S:'a' S|;";
inline const char* kGSA   = "start S; S:S 'a'|'a';";
inline const char* kGCAT  = "start S; S:S S|'a';";
inline const char* kGDYCK = "start S; S:'(' S ')' S|;";
inline const char* kGPAL  = "start S; S:'a' S 'a'|'b' S 'b'|'a'|'b'|;";
inline const char* kGINF  = "start S; S:A S A|'a'; A:;";
inline const char* kGRINF = "start S; S:S A|'a'; A:;";
} // namespace fixtures

} // namespace relparse
