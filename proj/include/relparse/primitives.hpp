// primitives.hpp - pre-solved transition-language primitives for a semiring
#pragma once

#include <unordered_map>
#include <vector>

#include "relparse/analysis.hpp"
#include "relparse/rtn.hpp"
#include "relparse/semiring.hpp"

namespace relparse {

// Values of the generation-time primitives over the pruned RTN:
//   vnull[s]      value of the nulling runs of s          (zero unless nullable)
//   vreach[s][t]  value of the runs s => exactly t        (one on the diagonal)
//   call coefficients are derived on demand from vreach and the call list.
// All values are in reversed-sequence orientation.
template <class S>
struct PrimitiveTable {
    using Value = typename S::Value;

    S sr;
    size_t n = 0;
    std::vector<Value> trans_val; // per transition
    std::vector<Value> vnull;     // per state
    std::vector<Value> vreach;    // s*n + t

    std::vector<std::vector<StateId>> reach_list;          // per s: {t : vreach[s][t] != 0}
    std::vector<StateId> skip_candidates;                  // nullable and reachable states
    std::vector<std::vector<TransId>> calls_by_continuation; // u -> calls with continuation u

    const Value& null_of(StateId s) const { return vnull[s]; }
    const Value& reach_of(StateId s, StateId t) const { return vreach[s * n + t]; }

    // <Delta_{u,t,t'}>: sum over call(t',x,u) of vreach[x][t] * <d>.
    Value call_value(StateId u, StateId t, StateId tp) const {
        Value acc = sr.zero();
        for (TransId d : calls_by_continuation[u]) {
            const Transition& tr = rtn->transitions[d];
            if (tr.source != tp) continue;
            const Value& r = reach_of(tr.callee, t);
            if (sr.is_zero(r)) continue;
            acc = sr.add(acc, sr.mul(r, trans_val[d]));
        }
        return acc;
    }

    const Rtn* rtn = nullptr;
};

// Solves the primitive equations. Requires the ambiguity class to allow the
// semiring: NonregularInfinite grammars are rejected outright, any remaining
// dependency cycle needs a semiring with star (the cyclic systems are then
// solved by monotone fixpoint iteration, which is exact for the idempotent
// star semirings this library ships).
template <class S>
PrimitiveTable<S> solve_primitives(const Rtn& rtn, const StateAnalysis& analysis,
                                   const S& sr) {
    if (analysis.ambiguity_class == AmbiguityClass::NonregularInfinite)
        throw UnsupportedGrammarError(
            "grammar is nonregularly infinitely ambiguous; " + analysis.cycle_witness,
            analysis.cycle_witness);
    const bool cyclic = analysis.ambiguity_class == AmbiguityClass::RegularInfinite;
    if (cyclic && !S::kHasStar)
        throw StarRequiredError(
            std::string("grammar is infinitely ambiguous (RegularInfinite); semiring '") +
            to_string(S::kKind) + "' provides no star");

    PrimitiveTable<S> pt;
    pt.sr = sr;
    pt.rtn = &rtn;
    const size_t n = rtn.state_count();
    pt.n = n;

    pt.trans_val.reserve(rtn.transitions.size());
    for (size_t d = 0; d < rtn.transitions.size(); ++d)
        pt.trans_val.push_back(sr.valuation(static_cast<TransId>(d)));

    pt.calls_by_continuation.assign(n, {});
    for (size_t d = 0; d < rtn.transitions.size(); ++d) {
        const Transition& t = rtn.transitions[d];
        if (t.kind == TransKind::Call)
            pt.calls_by_continuation[t.continuation].push_back(static_cast<TransId>(d));
    }

    std::vector<char> relevant = analysis.reachable;
    relevant[rtn.start] = 1;
    relevant[rtn.stop] = 1;

    // --- vnull ---------------------------------------------------------
    pt.vnull.assign(n, sr.zero());
    auto null_rhs = [&](StateId s) {
        typename S::Value acc = sr.zero();
        for (TransId d : rtn.nonshift_by_state[s]) {
            const Transition& t = rtn.transitions[d];
            if (t.kind == TransKind::Reduce) {
                acc = sr.add(acc, pt.trans_val[d]);
            } else if (analysis.nullable[t.callee] && analysis.nullable[t.continuation]) {
                acc = sr.add(acc, sr.mul(pt.vnull[t.continuation],
                                         sr.mul(pt.vnull[t.callee], pt.trans_val[d])));
            }
        }
        return acc;
    };
    if (!cyclic) {
        // dependency-ordered evaluation (the classifier guarantees acyclicity)
        std::vector<int> state_mark(n, 0); // 0 new, 1 in progress, 2 done
        std::vector<StateId> work;
        for (size_t s0 = 0; s0 < n; ++s0) {
            if (!relevant[s0] || !analysis.nullable[s0]) continue;
            work.push_back(static_cast<StateId>(s0));
            while (!work.empty()) {
                StateId s = work.back();
                if (state_mark[s] == 2) {
                    work.pop_back();
                    continue;
                }
                bool ready = true;
                for (TransId d : rtn.nonshift_by_state[s]) {
                    const Transition& t = rtn.transitions[d];
                    if (t.kind != TransKind::Call) continue;
                    if (!analysis.nullable[t.callee] || !analysis.nullable[t.continuation])
                        continue;
                    for (StateId dep : {t.callee, t.continuation}) {
                        if (dep == s)
                            throw Error("internal: nulling-value cycle in Finite grammar");
                        if (state_mark[dep] == 0) {
                            work.push_back(dep);
                            ready = false;
                        } else if (state_mark[dep] == 1) {
                            throw Error("internal: nulling-value cycle in Finite grammar");
                        }
                    }
                }
                if (!ready) {
                    state_mark[s] = 1;
                    continue;
                }
                pt.vnull[s] = null_rhs(s);
                state_mark[s] = 2;
                work.pop_back();
            }
        }
    } else {
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t s = 0; s < n; ++s) {
                if (!relevant[s] || !analysis.nullable[s]) continue;
                typename S::Value v = null_rhs(static_cast<StateId>(s));
                if (!sr.equal(v, pt.vnull[s])) {
                    pt.vnull[s] = v;
                    changed = true;
                }
            }
        }
    }

    // --- vreach ---------------------------------------------------------
    pt.vreach.assign(n * n, sr.zero());
    auto reach_rhs = [&](StateId s, StateId t) {
        typename S::Value acc = (s == t) ? sr.one() : sr.zero();
        for (TransId d : rtn.nonshift_by_state[s]) {
            const Transition& tr = rtn.transitions[d];
            if (tr.kind != TransKind::Call || !analysis.nullable[tr.callee]) continue;
            const typename S::Value& inner = pt.vreach[tr.continuation * n + t];
            if (sr.is_zero(inner)) continue;
            acc = sr.add(acc, sr.mul(inner, sr.mul(pt.vnull[tr.callee], pt.trans_val[d])));
        }
        return acc;
    };
    if (!cyclic) {
        for (size_t t = 0; t < n; ++t) {
            std::vector<int> mark(n, 0);
            std::vector<StateId> work;
            for (size_t s0 = 0; s0 < n; ++s0) {
                if (!relevant[s0]) continue;
                work.push_back(static_cast<StateId>(s0));
                while (!work.empty()) {
                    StateId s = work.back();
                    if (mark[s] == 2) {
                        work.pop_back();
                        continue;
                    }
                    bool ready = true;
                    for (TransId d : rtn.nonshift_by_state[s]) {
                        const Transition& tr = rtn.transitions[d];
                        if (tr.kind != TransKind::Call || !analysis.nullable[tr.callee])
                            continue;
                        if (tr.continuation == s)
                            throw Error("internal: reach-value cycle in Finite grammar");
                        if (mark[tr.continuation] == 0) {
                            work.push_back(tr.continuation);
                            ready = false;
                        } else if (mark[tr.continuation] == 1) {
                            throw Error("internal: reach-value cycle in Finite grammar");
                        }
                    }
                    if (!ready) {
                        mark[s] = 1;
                        continue;
                    }
                    pt.vreach[s * n + t] = reach_rhs(s, static_cast<StateId>(t));
                    mark[s] = 2;
                    work.pop_back();
                }
            }
        }
    } else {
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t s = 0; s < n; ++s) {
                if (!relevant[s]) continue;
                for (size_t t = 0; t < n; ++t) {
                    typename S::Value v =
                        reach_rhs(static_cast<StateId>(s), static_cast<StateId>(t));
                    if (!sr.equal(v, pt.vreach[s * n + t])) {
                        pt.vreach[s * n + t] = v;
                        changed = true;
                    }
                }
            }
        }
    }

    pt.reach_list.assign(n, {});
    for (size_t s = 0; s < n; ++s)
        for (size_t t = 0; t < n; ++t)
            if (!sr.is_zero(pt.vreach[s * n + t]))
                pt.reach_list[s].push_back(static_cast<StateId>(t));

    for (size_t s = 0; s < n; ++s)
        if (relevant[s] && analysis.nullable[s])
            pt.skip_candidates.push_back(static_cast<StateId>(s));

    return pt;
}

} // namespace relparse
