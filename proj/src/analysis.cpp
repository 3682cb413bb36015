#include "relparse/analysis.hpp"

#include <algorithm>
#include <functional>

namespace relparse {

std::vector<char> compute_nullability(const Rtn& rtn) {
    std::vector<char> nullable(rtn.state_count(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Transition& t : rtn.transitions) {
            if (nullable[t.source]) continue;
            bool now = false;
            if (t.kind == TransKind::Reduce) now = true;
            else if (t.kind == TransKind::Call)
                now = nullable[t.callee] && nullable[t.continuation];
            if (now) {
                nullable[t.source] = 1;
                changed = true;
            }
        }
    }
    return nullable;
}

Rtn compute_productivity(const Rtn& rtn) {
    std::vector<char> prod(rtn.state_count(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Transition& t : rtn.transitions) {
            if (prod[t.source]) continue;
            bool now = false;
            switch (t.kind) {
            case TransKind::Reduce: now = true; break;
            case TransKind::Shift: now = prod[t.continuation]; break;
            case TransKind::Call: now = prod[t.callee] && prod[t.continuation]; break;
            }
            if (now) {
                prod[t.source] = 1;
                changed = true;
            }
        }
    }
    if (!prod[rtn.start])
        throw EmptyLanguageError("start state derives no terminal word");

    prod[rtn.stop] = 1; // guard survives by fiat

    bool allProd = std::all_of(prod.begin(), prod.end(), [](char c) { return c != 0; });
    if (allProd) {
        Rtn copy = rtn;
        copy.freeze();
        return copy;
    }

    Rtn out;
    out.terminals = rtn.terminals;
    out.labels = rtn.labels;
    std::vector<StateId> newId(rtn.state_count(), kNoState);
    for (size_t s = 0; s < rtn.state_count(); ++s) {
        if (!prod[s]) continue;
        newId[s] = static_cast<StateId>(out.state_names.size());
        out.state_names.push_back(rtn.state_names[s]);
    }
    out.start = newId[rtn.start];
    out.stop = newId[rtn.stop];
    for (const Transition& t : rtn.transitions) {
        if (!prod[t.source]) continue;
        if (t.kind == TransKind::Shift && !prod[t.continuation]) continue;
        if (t.kind == TransKind::Call && (!prod[t.callee] || !prod[t.continuation])) continue;
        Transition nt = t;
        nt.source = newId[t.source];
        if (t.kind != TransKind::Reduce) {
            nt.continuation = newId[t.continuation];
            if (t.kind == TransKind::Call) nt.callee = newId[t.callee];
        }
        out.transitions.push_back(nt);
    }
    out.freeze();
    return out;
}

StructureTables compute_structure(const Rtn& rtn, const std::vector<char>& nullable) {
    StructureTables st;
    const size_t n = rtn.state_count();
    st.n = n;
    st.reach.assign(n * n, 0);
    st.top.assign(n * n, 0);
    st.call_split.assign(n * n * n, 0);

    for (size_t s = 0; s < n; ++s) {
        st.reach[s * n + s] = 1;
        st.top[s * n + s] = 1;
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Transition& t : rtn.transitions) {
            if (t.kind != TransKind::Call) continue;
            // reach: s =>* t via call(s,u,s') with u nulling and s' =>* t
            if (nullable[t.callee]) {
                for (size_t x = 0; x < n; ++x) {
                    if (st.reach[t.continuation * n + x] && !st.reach[t.source * n + x]) {
                        st.reach[t.source * n + x] = 1;
                        changed = true;
                    }
                }
            }
            // top: tops of callee always; tops of continuation when callee nulls
            for (size_t x = 0; x < n; ++x) {
                if (st.top[t.callee * n + x] && !st.top[t.source * n + x]) {
                    st.top[t.source * n + x] = 1;
                    changed = true;
                }
                if (nullable[t.callee] && st.top[t.continuation * n + x] &&
                    !st.top[t.source * n + x]) {
                    st.top[t.source * n + x] = 1;
                    changed = true;
                }
            }
        }
    }
    for (const Transition& t : rtn.transitions) {
        if (t.kind != TransKind::Call) continue;
        // call_split[u][t][t'] for call(t',t'',u): any t with reach[t''][t]
        for (size_t x = 0; x < n; ++x)
            if (st.reach[t.callee * n + x])
                st.call_split[(t.continuation * n + x) * n + t.source] = 1;
    }
    return st;
}

namespace {

// Tops reachable from the start configuration through full runs (shifts
// included): where a state can actually sit on top of a live stack.
std::vector<char> reachable_tops(const Rtn& rtn) {
    std::vector<char> reach(rtn.state_count(), 0);
    std::vector<StateId> work = {rtn.start};
    reach[rtn.start] = 1;
    auto push = [&](StateId s) {
        if (!reach[s]) {
            reach[s] = 1;
            work.push_back(s);
        }
    };
    while (!work.empty()) {
        StateId s = work.back();
        work.pop_back();
        for (TransId d : rtn.out_by_state[s]) {
            const Transition& t = rtn.transitions[d];
            if (t.kind == TransKind::Shift) {
                push(t.continuation);
            } else if (t.kind == TransKind::Call) {
                push(t.callee);
                push(t.continuation); // callee is productive after pruning
            }
        }
    }
    return reach;
}

struct SccResult {
    std::vector<int> comp; // node -> component id
    int count = 0;
};

// Iterative Tarjan over an adjacency-list graph.
SccResult tarjan(size_t n, const std::vector<std::vector<int>>& adj) {
    SccResult r;
    r.comp.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<char> onstack(n, 0);
    std::vector<int> stack;
    int next = 0;

    struct Frame { int v; size_t i; };
    for (size_t s0 = 0; s0 < n; ++s0) {
        if (index[s0] != -1) continue;
        std::vector<Frame> frames{{static_cast<int>(s0), 0}};
        index[s0] = low[s0] = next++;
        stack.push_back(static_cast<int>(s0));
        onstack[s0] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.i < adj[f.v].size()) {
                int w = adj[f.v][f.i++];
                if (index[w] == -1) {
                    index[w] = low[w] = next++;
                    stack.push_back(w);
                    onstack[w] = 1;
                    frames.push_back({w, 0});
                } else if (onstack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    for (;;) {
                        int w = stack.back();
                        stack.pop_back();
                        onstack[w] = 0;
                        r.comp[w] = r.count;
                        if (w == f.v) break;
                    }
                    ++r.count;
                }
                int v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            }
        }
    }
    return r;
}

} // namespace

StateAnalysis classify_ambiguity(const Rtn& rtn, std::vector<char> nullable) {
    StateAnalysis a;
    a.nullable = std::move(nullable);
    a.productive.assign(rtn.state_count(), 1); // caller pruned already
    a.reachable = reachable_tops(rtn);

    const size_t n = rtn.state_count();

    // State-level dependency graph: right edges s->t, left-right edges s->u.
    std::vector<std::vector<int>> adj(n);
    struct DepEdge { StateId from, to; bool leftright; TransId via; };
    std::vector<DepEdge> edges;
    for (size_t d = 0; d < rtn.transitions.size(); ++d) {
        const Transition& t = rtn.transitions[d];
        if (t.kind != TransKind::Call) continue;
        if (!a.reachable[t.source]) continue;
        if (a.nullable[t.callee]) {
            adj[t.source].push_back(t.continuation);
            edges.push_back({t.source, t.continuation, false, static_cast<TransId>(d)});
        }
        if (a.nullable[t.continuation]) {
            adj[t.source].push_back(t.callee);
            edges.push_back({t.source, t.callee, true, static_cast<TransId>(d)});
        }
    }
    SccResult scc = tarjan(n, adj);

    std::vector<char> sccHasRight(scc.count, 0), sccHasLeftright(scc.count, 0);
    std::vector<char> sccCyclic(scc.count, 0);
    std::vector<int> sccSize(scc.count, 0);
    for (size_t s = 0; s < n; ++s) ++sccSize[scc.comp[s]];
    for (const DepEdge& e : edges) {
        if (scc.comp[e.from] != scc.comp[e.to]) continue;
        int c = scc.comp[e.from];
        sccCyclic[c] = 1; // internal edge; self-loops count
        (e.leftright ? sccHasLeftright : sccHasRight)[c] = 1;
    }

    auto witness_for = [&](int comp) {
        std::string w = "dependency cycle through";
        for (const DepEdge& e : edges) {
            if (scc.comp[e.from] != comp || scc.comp[e.to] != comp) continue;
            w += "\n  " + rtn.describe_transition(e.via) +
                 (e.leftright ? "  [left-right]" : "  [right]");
        }
        return w;
    };

    bool anyDepCycle = false;
    for (int c = 0; c < scc.count; ++c) {
        if (!sccCyclic[c]) continue;
        anyDepCycle = true;
        if (sccHasRight[c] && sccHasLeftright[c]) {
            a.ambiguity_class = AmbiguityClass::NonregularInfinite;
            a.cycle_witness = witness_for(c);
            return a;
        }
    }

    // Pair graph of the rewritten closure-label equations: node (u,t'),
    // edge (u,t') -> (u',t'') iff u' nullable and call_split[u][t''][t'].
    StructureTables st = compute_structure(rtn, a.nullable);
    std::vector<char> nodeLive(n * n, 0);
    for (size_t u = 0; u < n; ++u)
        for (size_t tp = 0; tp < n; ++tp)
            nodeLive[u * n + tp] = a.reachable[tp];
    std::vector<std::vector<int>> padj(n * n);
    bool anyPairEdge = false;
    for (size_t u = 0; u < n; ++u) {
        for (size_t tp = 0; tp < n; ++tp) {
            if (!nodeLive[u * n + tp]) continue;
            for (size_t up = 0; up < n; ++up) {
                if (!a.nullable[up]) continue;
                for (size_t tpp = 0; tpp < n; ++tpp) {
                    if (!nodeLive[up * n + tpp]) continue;
                    if (st.call_at(static_cast<StateId>(u), static_cast<StateId>(tpp),
                                   static_cast<StateId>(tp))) {
                        padj[u * n + tp].push_back(static_cast<int>(up * n + tpp));
                        anyPairEdge = true;
                    }
                }
            }
        }
    }
    bool pairCycle = false;
    if (anyPairEdge) {
        SccResult ps = tarjan(n * n, padj);
        std::vector<int> psize(ps.count, 0);
        for (int c : ps.comp) ++psize[c];
        for (size_t v = 0; v < n * n && !pairCycle; ++v) {
            for (int w : padj[v]) {
                if (ps.comp[v] == ps.comp[w] &&
                    (psize[ps.comp[v]] > 1 || v == static_cast<size_t>(w))) {
                    pairCycle = true;
                    if (a.cycle_witness.empty())
                        a.cycle_witness = "closure-label cycle at (" +
                                          rtn.state_names[v / n] + "," +
                                          rtn.state_names[v % n] + ")";
                    break;
                }
            }
        }
    }

    if (anyDepCycle || pairCycle)
        a.ambiguity_class = AmbiguityClass::RegularInfinite;
    else
        a.ambiguity_class = AmbiguityClass::Finite;
    if (a.ambiguity_class == AmbiguityClass::RegularInfinite && a.cycle_witness.empty()) {
        for (int c = 0; c < scc.count; ++c)
            if (sccCyclic[c]) { a.cycle_witness = witness_for(c); break; }
    }
    return a;
}

} // namespace relparse
