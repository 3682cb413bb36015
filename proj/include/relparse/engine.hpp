// engine.hpp - parser tables and the per-terminal phase loop
#pragma once

#include <memory>
#include <set>

#include "relparse/relation.hpp"

namespace relparse {

struct EngineStats {
    size_t tokens = 0;
    size_t phases = 0;
    size_t hits = 0;
    size_t misses = 0;
};

template <class S>
struct ParserTables {
    Rtn rtn;
    StateAnalysis analysis;
    PrimitiveTable<S> prims;
    ClosureTable<S> closures;

    struct ShiftInfo {
        TransId trans;
        StateId source, target;
        bool target_nullable;
    };
    std::vector<std::vector<ShiftInfo>> shifts; // per terminal

    ParserTables() = default;
    ParserTables(const ParserTables&) = delete;
    ParserTables& operator=(const ParserTables&) = delete;

    void build_shift_index() {
        shifts.assign(rtn.terminals.size(), {});
        for (size_t d = 0; d < rtn.transitions.size(); ++d) {
            const Transition& t = rtn.transitions[d];
            if (t.kind != TransKind::Shift) continue;
            shifts[t.terminal].push_back({static_cast<TransId>(d), t.source, t.continuation,
                                          analysis.nullable[t.continuation] != 0});
        }
    }

    TokenId token_of(const std::string& name) const {
        for (size_t i = 0; i < rtn.terminals.size(); ++i)
            if (rtn.terminals[i] == name) return static_cast<TokenId>(i);
        return -1;
    }

    // Full generation pipeline from a pruned-at-parse-time grammar.
    static std::unique_ptr<ParserTables<S>> build(const Grammar& g, const S& sr,
                                                  bool optimize = false) {
        auto T = std::make_unique<ParserTables<S>>();
        Rtn raw = grammar_to_rtn(g);
        T->rtn = compute_productivity(raw);
        if (optimize) {
            OptimizeMode mode = S::kKind == SemiringKind::Boolean ? OptimizeMode::Recognition
                                : S::kKind == SemiringKind::Count ? OptimizeMode::Counting
                                                                  : OptimizeMode::Labeled;
            T->rtn = optimize_rtn(T->rtn, mode);
        }
        T->analysis = classify_ambiguity(T->rtn, compute_nullability(T->rtn));
        T->prims = solve_primitives(T->rtn, T->analysis, sr);
        T->prims.rtn = &T->rtn;
        T->closures = build_closure_table(T->rtn, T->analysis, T->prims);
        T->build_shift_index();
        return T;
    }
};

// One phase on an explicit relation node; shared by all memoization modes.
template <class S>
NodeRef phase_on_node(RelationDag<S>& dag, const ParserTables<S>& T, NodeRef cur,
                      TokenId a) {
    const S& sr = dag.semiring();
    if (dag.is_dead(cur)) return cur;
    std::vector<NodeRef> outParts, auxParts;
    std::map<StateId, std::optional<NodeRef>> dmemo;
    for (const auto& sh : T.shifts[a]) {
        auto it = dmemo.find(sh.source);
        if (it == dmemo.end())
            it = dmemo.emplace(sh.source, dag.derivative(cur, sh.source)).first;
        if (!it->second) continue;
        NodeRef comp = *it->second;
        outParts.push_back(dag.prepend_atomic(T.closures.init_id(sh.target),
                                              dag.prepend_delta(T.prims.trans_val[sh.trans],
                                                                comp)));
        if (sh.target_nullable) {
            auxParts.push_back(dag.prepend_delta(
                sr.mul(T.prims.vnull[sh.target], T.prims.trans_val[sh.trans]), comp));
        }
    }
    if (!auxParts.empty()) {
        NodeRef aux = dag.union_nodes(auxParts);
        std::set<StateId> cands;
        for (const auto& e : dag.node(aux).edges)
            for (StateId u : dag.closures().derive_keys(e.atomic)) cands.insert(u);
        for (StateId sp : cands) {
            auto comp1 = dag.derivative(aux, sp);
            if (!comp1) continue;
            AtomicId head = T.closures.init_id(sp);
            if (head == kNoAtomic) continue;
            outParts.push_back(dag.prepend_atomic(head, *comp1));
        }
    }
    if (outParts.empty()) return dag.make_dead();
    return dag.union_nodes(outParts);
}

// Extraction at end of input: flat derivative by the stop guard, then the
// pure-guide value of the component.
template <class S>
typename S::Value finish_on_node(RelationDag<S>& dag, const ParserTables<S>& T,
                                 NodeRef cur) {
    auto comp = dag.derivative(cur, T.rtn.stop);
    if (!comp) return dag.semiring().zero();
    return dag.epsilon(*comp);
}

// The initial relation: N(C(s_start)) . N(C(s_stop)) . {(eps,eps)}, plus the
// fully-nulling route of s_start so empty input carries its exact value.
template <class S>
NodeRef initial_node(RelationDag<S>& dag, const ParserTables<S>& T) {
    NodeRef x = dag.prepend_atomic(T.closures.init_id(T.rtn.stop), dag.root());
    NodeRef init = dag.prepend_atomic(T.closures.init_id(T.rtn.start), x);
    if (T.analysis.nullable[T.rtn.start])
        init = dag.union_nodes({init, dag.prepend_delta(T.prims.vnull[T.rtn.start], x)});
    return init;
}

// Plain (unmemoized) parse session.
template <class S>
class ParseSession {
public:
    explicit ParseSession(const ParserTables<S>& T, bool cons_nodes = false)
        : T_(T), dag_(T.closures, cons_nodes) {
        cur_ = initial_node(dag_, T_);
    }

    void phase(TokenId a) {
        cur_ = phase_on_node(dag_, T_, cur_, a);
        ++stats_.phases;
        ++stats_.misses;
    }

    typename S::Value finish() { return finish_on_node(dag_, T_, cur_); }

    NodeRef current() const { return cur_; }
    RelationDag<S>& graph() { return dag_; }
    const EngineStats& stats() const { return stats_; }

private:
    const ParserTables<S>& T_;
    RelationDag<S> dag_;
    NodeRef cur_;
    EngineStats stats_;
};

} // namespace relparse
