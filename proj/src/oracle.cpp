#include "relparse/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

namespace relparse {
namespace oracle {

namespace {

struct Prod {
    int lhs;
    std::vector<GrammarSymbol> rhs;
};

std::vector<Prod> productions(const Grammar& g) {
    std::vector<Prod> ps;
    for (size_t nt = 0; nt < g.rules.size(); ++nt)
        for (const auto& alt : g.rules[nt].alternatives)
            ps.push_back({static_cast<int>(nt), alt.symbols});
    return ps;
}

std::vector<char> nullable_nonterminals(const Grammar& g) {
    std::vector<char> nul(g.nonterminals.size(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t nt = 0; nt < g.rules.size(); ++nt) {
            if (nul[nt]) continue;
            for (const auto& alt : g.rules[nt].alternatives) {
                bool all = true;
                for (const auto& s : alt.symbols)
                    if (s.is_terminal || !nul[s.index]) { all = false; break; }
                if (all) { nul[nt] = 1; changed = true; break; }
            }
        }
    }
    return nul;
}

} // namespace

bool earley_recognize(const Grammar& g, const std::vector<TokenId>& tokens) {
    const std::vector<Prod> prods = productions(g);
    const std::vector<char> nul = nullable_nonterminals(g);
    const size_t n = tokens.size();

    struct Item {
        int prod, dot, origin;
        bool operator<(const Item& o) const {
            return std::tie(prod, dot, origin) < std::tie(o.prod, o.dot, o.origin);
        }
    };
    std::vector<std::set<Item>> sets(n + 1);
    std::vector<std::vector<Item>> queue(n + 1);

    auto add = [&](size_t pos, Item it) {
        if (sets[pos].insert(it).second) queue[pos].push_back(it);
    };

    for (size_t p = 0; p < prods.size(); ++p)
        if (prods[p].lhs == g.start) add(0, {static_cast<int>(p), 0, 0});

    for (size_t pos = 0; pos <= n; ++pos) {
        for (size_t qi = 0; qi < queue[pos].size(); ++qi) {
            Item it = queue[pos][qi];
            const Prod& pr = prods[it.prod];
            if (it.dot < static_cast<int>(pr.rhs.size())) {
                const GrammarSymbol& sym = pr.rhs[it.dot];
                if (sym.is_terminal) {
                    if (pos < n && tokens[pos] == sym.index)
                        add(pos + 1, {it.prod, it.dot + 1, it.origin});
                } else {
                    for (size_t p = 0; p < prods.size(); ++p)
                        if (prods[p].lhs == sym.index)
                            add(pos, {static_cast<int>(p), 0, static_cast<int>(pos)});
                    if (nul[sym.index]) // nullable-advance fix
                        add(pos, {it.prod, it.dot + 1, it.origin});
                }
            } else {
                // complete: scan the origin set for items waiting on this lhs
                for (const Item& waiting : sets[it.origin]) {
                    const Prod& wp = prods[waiting.prod];
                    if (waiting.dot < static_cast<int>(wp.rhs.size()) &&
                        !wp.rhs[waiting.dot].is_terminal &&
                        wp.rhs[waiting.dot].index == pr.lhs)
                        add(pos, {waiting.prod, waiting.dot + 1, waiting.origin});
                }
            }
        }
    }
    for (const Item& it : sets[n]) {
        const Prod& pr = prods[it.prod];
        if (pr.lhs == g.start && it.origin == 0 &&
            it.dot == static_cast<int>(pr.rhs.size()))
            return true;
    }
    return false;
}

namespace {

// Span analysis for count_trees. derivNt is solved by a monotone fixpoint,
// so left recursion and nullable cycles are handled; the useful-edge graph
// (edges only where the whole surrounding split derives) is what decides
// finiteness, and counting recurses over exactly those edges.
class TreeCounter {
public:
    TreeCounter(const Grammar& g, const std::vector<TokenId>& toks)
        : g_(g), toks_(toks), prods_(productions(g)),
          nNt_(static_cast<int>(g.nonterminals.size())),
          n_(static_cast<int>(toks.size())) {}

    TreeCount run() {
        solve_derivability();
        if (!deriv_nt(g_.start, 0, n_)) return {false, BigNat(0)};
        color_.clear();
        if (has_cycle(g_.start, 0, n_)) return {true, BigNat(0)};
        TreeCount r;
        r.count = count_nt(g_.start, 0, n_);
        return r;
    }

private:
    int idx(int nt, int i, int j) const { return (nt * (n_ + 1) + i) * (n_ + 1) + j; }

    bool deriv_nt(int nt, int i, int j) const { return derivNt_[idx(nt, i, j)] != 0; }

    // rhs[k..] of production p derives tokens[i..j), under current derivNt.
    bool deriv_seq(int p, int k, int i, int j) const {
        const auto& rhs = prods_[p].rhs;
        if (k == static_cast<int>(rhs.size())) return i == j;
        const GrammarSymbol& sym = rhs[k];
        if (sym.is_terminal)
            return i < j && toks_[i] == sym.index && deriv_seq(p, k + 1, i + 1, j);
        for (int mid = i; mid <= j; ++mid)
            if (deriv_nt(sym.index, i, mid) && deriv_seq(p, k + 1, mid, j)) return true;
        return false;
    }

    void solve_derivability() {
        derivNt_.assign(nNt_ * (n_ + 1) * (n_ + 1), 0);
        bool changed = true;
        while (changed) {
            changed = false;
            for (int nt = 0; nt < nNt_; ++nt)
                for (int i = 0; i <= n_; ++i)
                    for (int j = i; j <= n_; ++j) {
                        if (derivNt_[idx(nt, i, j)]) continue;
                        for (size_t p = 0; p < prods_.size(); ++p) {
                            if (prods_[p].lhs != nt) continue;
                            if (deriv_seq(static_cast<int>(p), 0, i, j)) {
                                derivNt_[idx(nt, i, j)] = 1;
                                changed = true;
                                break;
                            }
                        }
                    }
        }
    }

    bool has_cycle(int nt, int i, int j) {
        int k = idx(nt, i, j);
        auto it = color_.find(k);
        if (it != color_.end()) return it->second == 1;
        color_[k] = 1;
        for (size_t p = 0; p < prods_.size(); ++p)
            if (prods_[p].lhs == nt && cycle_seq(static_cast<int>(p), 0, i, j)) {
                color_[k] = 2;
                return true;
            }
        color_[k] = 2;
        return false;
    }

    bool cycle_seq(int p, int k, int i, int j) {
        const auto& rhs = prods_[p].rhs;
        if (k == static_cast<int>(rhs.size())) return false;
        const GrammarSymbol& sym = rhs[k];
        if (sym.is_terminal) {
            if (i < j && toks_[i] == sym.index && deriv_seq(p, k + 1, i + 1, j))
                return cycle_seq(p, k + 1, i + 1, j);
            return false;
        }
        for (int mid = i; mid <= j; ++mid) {
            if (!deriv_nt(sym.index, i, mid)) continue;
            if (!deriv_seq(p, k + 1, mid, j)) continue;
            if (has_cycle(sym.index, i, mid)) return true;
            if (cycle_seq(p, k + 1, mid, j)) return true;
        }
        return false;
    }

    BigNat count_nt(int nt, int i, int j) {
        int k = idx(nt, i, j);
        auto it = countNt_.find(k);
        if (it != countNt_.end()) return it->second;
        BigNat total(0);
        for (size_t p = 0; p < prods_.size(); ++p)
            if (prods_[p].lhs == nt) total += count_seq(static_cast<int>(p), 0, i, j);
        countNt_[k] = total;
        return total;
    }

    BigNat count_seq(int p, int k, int i, int j) {
        const auto& rhs = prods_[p].rhs;
        if (k == static_cast<int>(rhs.size())) return BigNat(i == j ? 1 : 0);
        std::tuple<int, int, int, int> key{p, k, i, j};
        auto it = countSeq_.find(key);
        if (it != countSeq_.end()) return it->second;
        BigNat total(0);
        const GrammarSymbol& sym = rhs[k];
        if (sym.is_terminal) {
            if (i < j && toks_[i] == sym.index) total = count_seq(p, k + 1, i + 1, j);
        } else {
            for (int mid = i; mid <= j; ++mid) {
                if (!deriv_nt(sym.index, i, mid)) continue;
                if (!deriv_seq(p, k + 1, mid, j)) continue;
                total += count_nt(sym.index, i, mid) * count_seq(p, k + 1, mid, j);
            }
        }
        countSeq_[key] = total;
        return total;
    }

    const Grammar& g_;
    const std::vector<TokenId>& toks_;
    std::vector<Prod> prods_;
    int nNt_, n_;
    std::vector<char> derivNt_;
    std::map<int, int> color_; // 1 on stack, 2 done
    std::map<int, BigNat> countNt_;
    std::map<std::tuple<int, int, int, int>, BigNat> countSeq_;
};

} // namespace

TreeCount count_trees(const Grammar& g, const std::vector<TokenId>& tokens) {
    TreeCounter c(g, tokens);
    return c.run();
}

namespace {

// Minimal tokens a state still needs before its level can complete; prunes
// hopeless call nests in the exhaustive simulations.
std::vector<size_t> min_tokens_per_state(const Rtn& rtn) {
    const size_t kInf = 1u << 20;
    std::vector<size_t> m(rtn.state_count(), kInf);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Transition& t : rtn.transitions) {
            size_t c = kInf;
            switch (t.kind) {
            case TransKind::Reduce: c = 0; break;
            case TransKind::Shift:
                c = m[t.continuation] >= kInf ? kInf : 1 + m[t.continuation];
                break;
            case TransKind::Call:
                c = (m[t.callee] >= kInf || m[t.continuation] >= kInf)
                        ? kInf
                        : m[t.callee] + m[t.continuation];
                break;
            }
            if (c < m[t.source]) {
                m[t.source] = c;
                changed = true;
            }
        }
    }
    return m;
}

} // namespace

DerivationList enumerate_derivations(const Rtn& rtn, const std::vector<TokenId>& tokens,
                                     size_t limit, size_t step_bound) {
    DerivationList out;
    const std::vector<size_t> mintok = min_tokens_per_state(rtn);
    struct Frame {
        Config cfg;
        size_t pos;
        size_t need; // sum of mintok over cfg states above the stop guard
        std::vector<TransId> seq;
    };
    std::vector<Frame> stack;
    stack.push_back({{rtn.start, rtn.stop}, 0, mintok[rtn.start], {}});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (f.cfg.size() == 1 && f.cfg[0] == rtn.stop) {
            if (f.pos == tokens.size()) {
                if (out.sequences.size() >= limit) {
                    out.truncated = true;
                    break;
                }
                std::vector<TransId> rev(f.seq.rbegin(), f.seq.rend());
                out.sequences.push_back(std::move(rev));
            }
            continue;
        }
        if (f.seq.size() >= step_bound) {
            out.truncated = true;
            continue;
        }
        if (f.need > tokens.size() - f.pos) continue; // cannot complete any more
        StateId top = f.cfg.front();
        for (TransId d : rtn.out_by_state[top]) {
            const Transition& t = rtn.transitions[d];
            Frame next = f;
            next.seq.push_back(d);
            switch (t.kind) {
            case TransKind::Shift:
                if (f.pos >= tokens.size() || tokens[f.pos] != t.terminal) continue;
                next.pos = f.pos + 1;
                next.cfg[0] = t.continuation;
                next.need = f.need - mintok[top] + mintok[t.continuation];
                break;
            case TransKind::Call:
                next.cfg[0] = t.continuation;
                next.cfg.insert(next.cfg.begin(), t.callee);
                next.need =
                    f.need - mintok[top] + mintok[t.callee] + mintok[t.continuation];
                break;
            case TransKind::Reduce:
                next.cfg.erase(next.cfg.begin());
                next.need = f.need - mintok[top];
                break;
            }
            stack.push_back(std::move(next));
        }
    }
    std::sort(out.sequences.begin(), out.sequences.end());
    return out;
}

ConfigLanguage config_language(const Rtn& rtn, const std::vector<TokenId>& prefix,
                               size_t max_len, size_t explore_len, size_t max_steps) {
    ConfigLanguage out;
    size_t steps = 0;

    auto closure = [&](std::set<Config>& set) {
        std::deque<Config> work(set.begin(), set.end());
        while (!work.empty()) {
            if (++steps > max_steps) {
                out.budget_exceeded = true;
                return;
            }
            Config c = std::move(work.front());
            work.pop_front();
            if (c.empty()) continue;
            StateId top = c.front();
            for (TransId d : rtn.nonshift_by_state[top]) {
                const Transition& t = rtn.transitions[d];
                Config nc = c;
                if (t.kind == TransKind::Call) {
                    nc[0] = t.continuation;
                    nc.insert(nc.begin(), t.callee);
                } else { // Reduce
                    nc.erase(nc.begin());
                }
                if (nc.size() > explore_len) continue;
                if (set.insert(nc).second) work.push_back(nc);
            }
        }
    };

    std::set<Config> cur;
    cur.insert({rtn.start, rtn.stop});
    closure(cur);
    for (TokenId a : prefix) {
        std::set<Config> next;
        for (const Config& c : cur) {
            if (c.empty()) continue;
            StateId top = c.front();
            for (TransId d : rtn.out_by_state[top]) {
                const Transition& t = rtn.transitions[d];
                if (t.kind != TransKind::Shift || t.terminal != a) continue;
                Config nc = c;
                nc[0] = t.continuation;
                next.insert(nc);
            }
        }
        cur = std::move(next);
        closure(cur);
        if (out.budget_exceeded) break;
    }
    for (const Config& c : cur)
        if (c.size() <= max_len) out.configs.insert(c);
    return out;
}

std::set<Config> null_close(const std::set<Config>& configs,
                            const std::vector<char>& nullable, size_t max_len) {
    std::set<Config> out;
    std::deque<Config> work;
    std::set<Config> seen;
    for (const Config& c : configs) {
        if (c.size() <= max_len) out.insert(c);
        if (seen.insert(c).second) work.push_back(c);
    }
    while (!work.empty()) {
        Config c = std::move(work.front());
        work.pop_front();
        for (size_t i = 0; i < c.size(); ++i) {
            if (!nullable[c[i]]) continue;
            Config nc = c;
            nc.erase(nc.begin() + i);
            if (seen.insert(nc).second) {
                if (nc.size() <= max_len) out.insert(nc);
                work.push_back(nc);
            }
        }
    }
    return out;
}

BoundedRecognition rtn_recognize(const Rtn& rtn, const std::vector<TokenId>& tokens,
                                 size_t explore_len, size_t max_steps) {
    ConfigLanguage cl = config_language(rtn, tokens, 1, explore_len, max_steps);
    BoundedRecognition out;
    out.budget_exceeded = cl.budget_exceeded;
    out.accepted = cl.configs.count({rtn.stop}) > 0;
    return out;
}

DerivationList enumerate_nulling(const Rtn& rtn, StateId s, size_t limit, size_t step_bound) {
    DerivationList out;
    struct Frame {
        Config cfg;
        std::vector<TransId> seq;
    };
    std::vector<Frame> stack;
    stack.push_back({{s}, {}});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (f.cfg.empty()) {
            if (out.sequences.size() >= limit) {
                out.truncated = true;
                break;
            }
            std::vector<TransId> rev(f.seq.rbegin(), f.seq.rend());
            out.sequences.push_back(std::move(rev));
            continue;
        }
        if (f.seq.size() >= step_bound) {
            out.truncated = true;
            continue;
        }
        StateId top = f.cfg.front();
        for (TransId d : rtn.nonshift_by_state[top]) {
            const Transition& t = rtn.transitions[d];
            Frame next = f;
            next.seq.push_back(d);
            if (t.kind == TransKind::Call) {
                next.cfg[0] = t.continuation;
                next.cfg.insert(next.cfg.begin(), t.callee);
            } else {
                next.cfg.erase(next.cfg.begin());
            }
            stack.push_back(std::move(next));
        }
    }
    std::sort(out.sequences.begin(), out.sequences.end());
    return out;
}

} // namespace oracle
} // namespace relparse
