// rtn.hpp - recursive transition network built from a Grammar
#pragma once

#include <string>
#include <vector>

#include "relparse/grammar.hpp"
#include "relparse/ids.hpp"

namespace relparse {

enum class TransKind : uint8_t { Shift, Call, Reduce };

struct Transition {
    TransKind kind;
    StateId source;
    // Shift: terminal consumed and target state.
    // Call:  callee (top of stack after the call) and continuation (below).
    // Reduce: label only.
    TokenId terminal = -1; // Shift
    StateId callee = kNoState;       // Call
    StateId continuation = kNoState; // Shift target / Call continuation
    int label = -1;                  // Reduce: index into Rtn::labels
};

struct Rtn {
    std::vector<std::string> state_names;
    std::vector<Transition> transitions;
    std::vector<std::string> labels;    // production labels (reduce payloads)
    std::vector<std::string> terminals; // copied from the grammar
    StateId start = kNoState; // s_start
    StateId stop = kNoState;  // s_stop: guard, no outgoing transitions

    size_t state_count() const { return state_names.size(); }

    // Indexes, built once by freeze().
    std::vector<std::vector<TransId>> shifts_by_terminal; // D_a
    std::vector<std::vector<TransId>> out_by_state;       // all outgoing
    std::vector<std::vector<TransId>> nonshift_by_state;  // D_eps restricted to source

    void freeze(); // builds the indexes; call after the transition list is final
    std::string describe_transition(TransId d) const;
};

// One state per dot position of every alternative, plus fresh s_start, s_acc
// and the s_stop guard. A nonterminal occurrence becomes one Call per
// alternative of the callee (the RTN chooses the alternative at call time).
Rtn grammar_to_rtn(const Grammar& g);

// What the active semiring can observe about transitions; decides how far
// partition refinement may merge.
enum class OptimizeMode {
    Recognition, // values ignore labels and multiplicity: dedup transitions
    Counting,    // multiplicity matters, label identity does not
    Labeled      // full transition identity matters
};

// Moore-style partition refinement: merges states with identical outgoing
// behavior up to the current partition, as far as the mode allows. In
// Counting/Labeled modes parallel transitions are kept, so derivation counts
// are preserved. start/stop survive as their classes' representatives.
// Requires a frozen RTN; returns a frozen RTN.
Rtn optimize_rtn(const Rtn& rtn, OptimizeMode mode = OptimizeMode::Recognition);

} // namespace relparse
