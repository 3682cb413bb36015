// gen.hpp - corpus generation and random grammars for checking
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "relparse/grammar.hpp"

namespace relparse {

// Stochastic derivation from the start symbol, biased to keep expanding while
// under the token target and to finish minimally afterwards; nesting depth is
// bounded. The result is a single valid sentence of roughly target_tokens.
std::vector<TokenId> gen_corpus(const Grammar& g, size_t target_tokens, uint64_t seed,
                                size_t depth_bound = 400);

struct RandomGrammarParams {
    int max_nonterminals = 6;
    int max_terminals = 3;
    int max_alternatives = 3;
    int max_symbols = 4;
};

// Seeded random grammar in the text format (may be unproductive or infinitely
// ambiguous; callers filter).
std::string random_grammar_text(std::mt19937_64& rng, const RandomGrammarParams& p);

} // namespace relparse
