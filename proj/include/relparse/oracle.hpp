// oracle.hpp - brute-force reference implementations used by tests and checks
#pragma once

#include <optional>
#include <set>
#include <vector>

#include "relparse/bignat.hpp"
#include "relparse/grammar.hpp"
#include "relparse/rtn.hpp"

namespace relparse {
namespace oracle {

// Standard Earley recognition with the nullable-advance fix; handles left
// recursion and epsilon rules.
bool earley_recognize(const Grammar& g, const std::vector<TokenId>& tokens);

struct TreeCount {
    bool infinite = false;
    BigNat count; // valid when !infinite
};

// Counts distinct parse trees by memoized span counting; detects unbounded
// counts via a cycle among useful items and reports Infinite instead.
TreeCount count_trees(const Grammar& g, const std::vector<TokenId>& tokens);

struct DerivationList {
    std::vector<std::vector<TransId>> sequences; // reversed transition sequences
    bool truncated = false;
};

// Depth-bounded exhaustive RTN simulation. Sequences come out reversed so
// they line up with the parser's output orientation. Exact when the number
// of accepting runs is finite, each run fits in step_bound transitions, and
// at most `limit` of them exist.
DerivationList enumerate_derivations(const Rtn& rtn, const std::vector<TokenId>& tokens,
                                     size_t limit, size_t step_bound);

using Config = std::vector<StateId>; // top first, stop guard at the bottom

struct ConfigLanguage {
    std::set<Config> configs;
    bool budget_exceeded = false;
};

// Breadth-first simulation of D_eps* . D_a1 ... D_eps* from the initial
// configuration. Collects configurations of length <= max_len; exploration
// itself is capped at explore_len and max_steps expansions (the flag reports
// when the cap was hit, making the result a lower approximation).
ConfigLanguage config_language(const Rtn& rtn, const std::vector<TokenId>& prefix,
                               size_t max_len, size_t explore_len, size_t max_steps);

// Deletion-closure of a configuration set under nullable states, restricted
// to length <= max_len. This is the null-closed language N(Sigma).
std::set<Config> null_close(const std::set<Config>& configs,
                            const std::vector<char>& nullable, size_t max_len);

// Nulling runs of a single state: all reversed transition sequences eta with
// s =>[eta] eps, up to the step bound. Used to cross-check primitive values.
DerivationList enumerate_nulling(const Rtn& rtn, StateId s, size_t limit, size_t step_bound);

struct BoundedRecognition {
    bool accepted = false;
    bool budget_exceeded = false;
};

// Direct RTN recognition through bounded configuration-set simulation; exact
// whenever the exploration bounds suffice (the flag reports otherwise).
BoundedRecognition rtn_recognize(const Rtn& rtn, const std::vector<TokenId>& tokens,
                                 size_t explore_len, size_t max_steps);

} // namespace oracle
} // namespace relparse
