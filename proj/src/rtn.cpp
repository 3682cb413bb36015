#include "relparse/rtn.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace relparse {

void Rtn::freeze() {
    shifts_by_terminal.assign(terminals.size(), {});
    out_by_state.assign(state_count(), {});
    nonshift_by_state.assign(state_count(), {});
    for (size_t d = 0; d < transitions.size(); ++d) {
        const Transition& t = transitions[d];
        out_by_state[t.source].push_back(static_cast<TransId>(d));
        if (t.kind == TransKind::Shift)
            shifts_by_terminal[t.terminal].push_back(static_cast<TransId>(d));
        else
            nonshift_by_state[t.source].push_back(static_cast<TransId>(d));
    }
}

std::string Rtn::describe_transition(TransId d) const {
    const Transition& t = transitions[d];
    switch (t.kind) {
    case TransKind::Shift:
        return "shift(" + state_names[t.source] + "," + terminals[t.terminal] + "," +
               state_names[t.continuation] + ")";
    case TransKind::Call:
        return "call(" + state_names[t.source] + "," + state_names[t.callee] + "," +
               state_names[t.continuation] + ")";
    case TransKind::Reduce:
        return "reduce(" + state_names[t.source] + "," + labels[t.label] + ")";
    }
    return "?";
}

Rtn grammar_to_rtn(const Grammar& g) {
    Rtn r;
    r.terminals = g.terminals;

    // Dot states per alternative; entry(nt) = list of dot-0 states.
    std::vector<std::vector<StateId>> entries(g.nonterminals.size());
    // (nt, alt) -> first dot state
    std::vector<std::vector<StateId>> altStart(g.nonterminals.size());

    auto add_state = [&](const std::string& name) {
        r.state_names.push_back(name);
        return static_cast<StateId>(r.state_names.size() - 1);
    };

    for (size_t nt = 0; nt < g.nonterminals.size(); ++nt) {
        for (size_t a = 0; a < g.rules[nt].alternatives.size(); ++a) {
            const Alternative& alt = g.rules[nt].alternatives[a];
            StateId first = kNoState;
            for (size_t dot = 0; dot <= alt.symbols.size(); ++dot) {
                StateId s = add_state(g.nonterminals[nt] + "." + std::to_string(a + 1) +
                                      "@" + std::to_string(dot));
                if (dot == 0) first = s;
            }
            altStart[nt].push_back(first);
            entries[nt].push_back(first);
        }
    }
    StateId sStart = add_state("s_start");
    StateId sAcc = add_state("s_acc");
    StateId sStop = add_state("s_stop");
    r.start = sStart;
    r.stop = sStop;

    auto label_id = [&](const std::string& lab) {
        for (size_t i = 0; i < r.labels.size(); ++i)
            if (r.labels[i] == lab) return static_cast<int>(i);
        r.labels.push_back(lab);
        return static_cast<int>(r.labels.size() - 1);
    };

    for (size_t nt = 0; nt < g.nonterminals.size(); ++nt) {
        for (size_t a = 0; a < g.rules[nt].alternatives.size(); ++a) {
            const Alternative& alt = g.rules[nt].alternatives[a];
            StateId s = altStart[nt][a];
            for (size_t dot = 0; dot < alt.symbols.size(); ++dot, ++s) {
                const GrammarSymbol& sym = alt.symbols[dot];
                if (sym.is_terminal) {
                    Transition t;
                    t.kind = TransKind::Shift;
                    t.source = s;
                    t.terminal = sym.index;
                    t.continuation = s + 1;
                    r.transitions.push_back(t);
                } else {
                    for (StateId callee : entries[sym.index]) {
                        Transition t;
                        t.kind = TransKind::Call;
                        t.source = s;
                        t.callee = callee;
                        t.continuation = s + 1;
                        r.transitions.push_back(t);
                    }
                }
            }
            Transition red;
            red.kind = TransKind::Reduce;
            red.source = s;
            red.label = label_id(alt.label);
            r.transitions.push_back(red);
        }
    }

    for (StateId callee : entries[g.start]) {
        Transition t;
        t.kind = TransKind::Call;
        t.source = sStart;
        t.callee = callee;
        t.continuation = sAcc;
        r.transitions.push_back(t);
    }
    Transition rootRed;
    rootRed.kind = TransKind::Reduce;
    rootRed.source = sAcc;
    rootRed.label = label_id("@root");
    r.transitions.push_back(rootRed);

    r.freeze();
    return r;
}

Rtn optimize_rtn(const Rtn& rtn, OptimizeMode mode) {
    const size_t n = rtn.state_count();
    std::vector<int> cls(n, 0);
    // stop must stay alone: it is the guard with no outgoing transitions, but
    // other no-outgoing states would otherwise join it.
    cls[rtn.stop] = 1;

    const bool dedup = mode == OptimizeMode::Recognition;
    int classes = 2;
    for (;;) {
        // signature: class + multiset of outgoing (kind, terminal/label, target classes)
        std::map<std::pair<int, std::vector<std::tuple<int, int, int>>>, int> sig2cls;
        std::vector<int> next(n);
        for (size_t s = 0; s < n; ++s) {
            std::vector<std::tuple<int, int, int>> sig;
            for (TransId d : rtn.out_by_state[s]) {
                const Transition& t = rtn.transitions[d];
                switch (t.kind) {
                case TransKind::Shift:
                    sig.emplace_back(0, t.terminal, cls[t.continuation]);
                    break;
                case TransKind::Call:
                    sig.emplace_back(1, cls[t.callee], cls[t.continuation]);
                    break;
                case TransKind::Reduce:
                    sig.emplace_back(2, mode == OptimizeMode::Labeled ? t.label : 0, 0);
                    break;
                }
            }
            std::sort(sig.begin(), sig.end());
            if (dedup) sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
            auto key = std::make_pair(cls[s], sig);
            auto it = sig2cls.find(key);
            if (it == sig2cls.end())
                it = sig2cls.emplace(key, static_cast<int>(sig2cls.size())).first;
            next[s] = it->second;
        }
        int newClasses = static_cast<int>(sig2cls.size());
        bool stable = (newClasses == classes);
        cls = next;
        classes = newClasses;
        if (stable) break;
    }

    // Representative per class: the lowest state id, except start/stop which
    // represent their own classes.
    std::vector<StateId> rep(classes, kNoState);
    for (size_t s = 0; s < n; ++s)
        if (rep[cls[s]] == kNoState) rep[cls[s]] = static_cast<StateId>(s);
    rep[cls[rtn.start]] = rtn.start;
    rep[cls[rtn.stop]] = rtn.stop;

    std::vector<StateId> newId(n, kNoState);
    Rtn out;
    out.terminals = rtn.terminals;
    out.labels = rtn.labels;
    auto map_state = [&](StateId s) {
        StateId r = rep[cls[s]];
        if (newId[r] == kNoState) {
            newId[r] = static_cast<StateId>(out.state_names.size());
            out.state_names.push_back(rtn.state_names[r]);
        }
        return newId[r];
    };
    out.start = map_state(rtn.start);
    out.stop = map_state(rtn.stop);
    for (size_t s = 0; s < n; ++s) map_state(static_cast<StateId>(s));

    // Emit transitions of the representatives only; in Recognition mode the
    // semiring cannot observe parallel duplicates, so they collapse.
    std::set<std::tuple<int, int, int, int, int>> seen;
    for (const Transition& t : rtn.transitions) {
        if (rep[cls[t.source]] != t.source) continue;
        Transition nt = t;
        nt.source = newId[t.source];
        if (t.kind == TransKind::Shift) {
            nt.continuation = newId[rep[cls[t.continuation]]];
        } else if (t.kind == TransKind::Call) {
            nt.callee = newId[rep[cls[t.callee]]];
            nt.continuation = newId[rep[cls[t.continuation]]];
        }
        if (dedup) {
            auto key = std::make_tuple(static_cast<int>(nt.kind), nt.source,
                                       nt.kind == TransKind::Reduce ? 0 : nt.terminal,
                                       nt.callee, nt.continuation);
            if (!seen.insert(key).second) continue;
        }
        out.transitions.push_back(nt);
    }
    out.freeze();
    return out;
}

} // namespace relparse
