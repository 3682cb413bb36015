// analysis.hpp - generation-time analyses over the RTN
#pragma once

#include <string>
#include <vector>

#include "relparse/rtn.hpp"

namespace relparse {

enum class AmbiguityClass { Finite, RegularInfinite, NonregularInfinite };

inline const char* to_string(AmbiguityClass c) {
    switch (c) {
    case AmbiguityClass::Finite: return "Finite";
    case AmbiguityClass::RegularInfinite: return "RegularInfinite";
    case AmbiguityClass::NonregularInfinite: return "NonregularInfinite";
    }
    return "?";
}

struct StateAnalysis {
    std::vector<char> nullable;   // s =>* eps via non-shift transitions
    std::vector<char> productive; // s can complete its own level
    std::vector<char> reachable;  // s can appear on top of a reachable configuration
    AmbiguityClass ambiguity_class = AmbiguityClass::Finite;
    std::string cycle_witness;    // printable, when infinite

    bool is_nullable(StateId s) const { return nullable[s] != 0; }
};

// Structural boolean tables shared by the classifier and the closure builder.
struct StructureTables {
    size_t n = 0;
    // reach[s][t]: s =>[D_eps*] exactly the configuration t
    std::vector<char> reach;
    // top[s][t]: some configuration with top t is reachable from s via D_eps*
    std::vector<char> top;
    // call_split[u][t][t'] nonempty: exists call(t',t'',u) with reach[t''][t]
    std::vector<char> call_split;

    bool reach_at(StateId s, StateId t) const { return reach[s * n + t] != 0; }
    bool top_at(StateId s, StateId t) const { return top[s * n + t] != 0; }
    bool call_at(StateId u, StateId t, StateId tp) const {
        return call_split[(u * n + t) * n + tp] != 0;
    }
};

// {s : s =>[D_eps*] eps}. Fixed point over reduces and calls with nullable parts.
std::vector<char> compute_nullability(const Rtn& rtn);

// Removes states that can never complete (yield no terminal word, not even
// the empty one) and every transition touching them. The stop guard is kept.
// Throws EmptyLanguageError if the start state is unproductive.
Rtn compute_productivity(const Rtn& rtn);

StructureTables compute_structure(const Rtn& rtn, const std::vector<char>& nullable);

// Dependency-graph classification per the generation-time equations:
//  - right edge s->t        for call(s,u,t) with u nullable
//  - left-right edge s->u   for call(s,u,t) with t nullable
// NonregularInfinite when some SCC (over reachable states) mixes both edge
// kinds; RegularInfinite when any other cycle remains in either that graph or
// the pair graph of the closure-label equations; Finite otherwise.
StateAnalysis classify_ambiguity(const Rtn& rtn, std::vector<char> nullable);

} // namespace relparse
