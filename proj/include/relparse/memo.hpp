// memo.hpp - phase-result caching: whole-relation and dominator-based
#pragma once

#include <algorithm>
#include <array>
#include <functional>

#include "relparse/engine.hpp"

namespace relparse {

// Whole-language memoization: (relation node, terminal) -> result node.
// Runs with node hash-consing on, so structurally equal relations share ids
// and the pair below is exactly the structural key.
template <class S>
class TrivialSession {
public:
    explicit TrivialSession(const ParserTables<S>& T) : T_(T), dag_(T.closures, true) {
        cur_ = initial_node(dag_, T_);
    }

    void phase(TokenId a) {
        ++stats_.phases;
        uint64_t key = (static_cast<uint64_t>(cur_) << 16) ^ static_cast<uint32_t>(a);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            cur_ = it->second;
            ++stats_.hits;
            return;
        }
        NodeRef out = phase_on_node(dag_, T_, cur_, a);
        cache_.emplace(key, out);
        cur_ = out;
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
    std::unordered_map<uint64_t, NodeRef> cache_;
};

// Splits a phase result at the common dominators of its final vertices.
// Factors come back top-first; every factor except possibly the last is
// eps-free, and a trailing root factor is dropped (it is the identity).
template <class S>
std::vector<NodeRef> factorize(RelationDag<S>& dag, NodeRef v) {
    if (v == dag.root()) return {};
    // Sub-DAG reachable from v, in decreasing id order (a topological order).
    std::vector<NodeRef> order;
    {
        std::set<NodeRef, std::greater<NodeRef>> seen;
        std::vector<NodeRef> work{v};
        seen.insert(v);
        while (!work.empty()) {
            NodeRef u = work.back();
            work.pop_back();
            for (const auto& e : dag.node(u).edges)
                if (seen.insert(e.target).second) work.push_back(e.target);
        }
        order.assign(seen.begin(), seen.end());
    }
    std::unordered_map<NodeRef, size_t> pos;
    for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    const size_t n = order.size();

    // dom sets as bitsets over `order`; single pass works because every edge
    // goes from an earlier to a later position.
    const size_t words = (n + 63) / 64;
    std::vector<uint64_t> dom(n * words, ~0ull);
    auto bit_set = [&](size_t node, size_t b) { dom[node * words + b / 64] |= 1ull << (b % 64); };
    auto only_self = [&](size_t i) {
        for (size_t w = 0; w < words; ++w) dom[i * words + w] = 0;
        bit_set(i, i);
    };
    only_self(0); // v itself
    std::vector<char> touched(n, 0);
    touched[0] = 1;
    for (size_t i = 0; i < n; ++i) {
        if (!touched[i]) { only_self(i); continue; } // unreachable: defensive
        NodeRef u = order[i];
        for (const auto& e : dag.node(u).edges) {
            size_t j = pos[e.target];
            if (!touched[j]) {
                for (size_t w = 0; w < words; ++w) dom[j * words + w] = dom[i * words + w];
                bit_set(j, j);
                touched[j] = 1;
            } else {
                for (size_t w = 0; w < words; ++w) dom[j * words + w] &= dom[i * words + w];
                bit_set(j, j);
            }
        }
    }

    // Final vertices and their common dominators.
    std::vector<uint64_t> common(words, ~0ull);
    bool anyFinal = false;
    for (size_t i = 0; i < n; ++i) {
        if (dag.node(order[i]).final == kNoLabel) continue;
        anyFinal = true;
        for (size_t w = 0; w < words; ++w) common[w] &= dom[i * words + w];
    }
    if (!anyFinal || dag.node(v).final != kNoLabel) return {v};

    std::vector<NodeRef> cuts; // order positions, increasing = nearer v first
    for (size_t i = 1; i < n; ++i)
        if (common[i / 64] >> (i % 64) & 1) cuts.push_back(order[i]);
    if (cuts.empty()) return {v};

    // Rebuild factors: v over cuts[0], cuts[k] over cuts[k+1], last cut as is.
    std::vector<NodeRef> factors;
    NodeRef top = v;
    for (NodeRef cut : cuts) {
        factors.push_back(rebase(dag, top, cut));
        top = cut;
    }
    if (top != dag.root()) factors.push_back(top);
    return factors;
}

// Copy of `v`'s fragment with `cut` replaced by the root sink.
template <class S>
NodeRef rebase(RelationDag<S>& dag, NodeRef v, NodeRef cut) {
    std::map<NodeRef, NodeRef> phi;
    phi[cut] = dag.root();
    // rebuild in increasing id order over the fragment between v and cut
    std::vector<NodeRef> frag;
    {
        std::set<NodeRef> seen{v};
        std::vector<NodeRef> work{v};
        while (!work.empty()) {
            NodeRef u = work.back();
            work.pop_back();
            if (u == cut) continue;
            frag.push_back(u);
            for (const auto& e : dag.node(u).edges)
                if (e.target != cut && !seen.count(e.target) && e.target > cut)
                    if (seen.insert(e.target).second) work.push_back(e.target);
        }
    }
    std::sort(frag.begin(), frag.end());
    for (NodeRef u : frag) {
        std::vector<typename RelationDag<S>::Edge> edges;
        for (const auto& e : dag.node(u).edges) {
            auto it = phi.find(e.target);
            NodeRef t = it != phi.end() ? it->second : e.target;
            edges.push_back({e.label, e.atomic, t});
        }
        phi[u] = dag.remake_node(std::move(edges), dag.node(u).final);
    }
    return phi[v];
}

struct TrieEntry {
    bool deeper = false;       // marker: retry with a longer prefix
    bool bottom_only = false;  // recorded while reading the true stack bottom
    uint8_t consumed = 0;
    std::vector<NodeRef> factors; // top-first
};

// Dominator-based memoization: the relation is a stack of eps-free fragments
// over the shared root sink; a phase touches at most the three top entries.
template <class S>
class DominatorSession {
public:
    explicit DominatorSession(const ParserTables<S>& T) : T_(T), dag_(T.closures, true) {
        push_factors(factorize(dag_, initial_node(dag_, T_)));
    }

    void phase(TokenId a) {
        ++stats_.phases;
        const size_t sz = stack_.size();
        for (size_t k = 1; k <= std::min<size_t>(3, sz); ++k) {
            auto it = trie_.find(make_key(a, k, false));
            if (it != trie_.end() && !it->second.deeper) {
                replay(it->second);
                return;
            }
            if (k == sz) {
                auto bt = trie_.find(make_key(a, k, true));
                if (bt != trie_.end()) {
                    replay(bt->second);
                    return;
                }
            }
            if (it == trie_.end()) break; // nothing recorded at this depth
            // deeper marker: extend the prefix
        }
        miss(a);
        ++stats_.misses;
    }

    typename S::Value finish() {
        NodeRef whole = materialize(stack_.size());
        return finish_on_node(dag_, T_, whole);
    }

    RelationDag<S>& graph() { return dag_; }
    const EngineStats& stats() const { return stats_; }
    size_t stack_depth() const { return stack_.size(); }
    size_t trie_size() const { return trie_.size(); }
    size_t max_consumed() const { return max_consumed_; }
    NodeRef materialize_all() { return materialize(stack_.size()); }

private:
    using Key = std::array<int64_t, 4>;

    Key make_key(TokenId a, size_t k, bool bottom) const {
        Key key{(static_cast<int64_t>(a) << 1) | (bottom ? 1 : 0), -1, -1, -1};
        for (size_t i = 0; i < k; ++i) key[1 + i] = stack_[stack_.size() - 1 - i];
        return key;
    }

    void replay(const TrieEntry& e) {
        for (uint8_t i = 0; i < e.consumed; ++i) stack_.pop_back();
        push_factors(e.factors);
        ++stats_.hits;
    }

    NodeRef materialize(size_t k) {
        NodeRef m = dag_.root();
        for (size_t i = 0; i < k; ++i) m = dag_.concat(stack_[stack_.size() - k + i], m);
        return m;
    }

    void miss(TokenId a) {
        const size_t sz = stack_.size();
        size_t k = 1;
        for (;; ++k) {
            NodeRef m = materialize(k);
            dag_.watch_boundary(dag_.root());
            NodeRef out = phase_on_node(dag_, T_, m, a);
            bool crossed = dag_.boundary_read();
            dag_.unwatch_boundary();
            if (crossed && k < std::min<size_t>(3, sz)) {
                trie_[make_key(a, k, false)] = TrieEntry{true, false, 0, {}};
                continue;
            }
            if (crossed && k == 3 && sz > 3)
                throw Error("internal: phase examined more than three stack entries");
            TrieEntry e;
            e.deeper = false;
            e.bottom_only = crossed; // only legitimate at the true bottom
            e.consumed = static_cast<uint8_t>(k);
            e.factors = factorize(dag_, out);
            trie_[make_key(a, k, e.bottom_only)] = e;
            max_consumed_ = std::max(max_consumed_, k);
            for (size_t i = 0; i < k; ++i) stack_.pop_back();
            push_factors(e.factors);
            return;
        }
    }

    void push_factors(const std::vector<NodeRef>& factors) {
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
            NodeRef f = *it;
            if (f == dag_.root()) continue;
            if (dag_.node(f).final != kNoLabel && !stack_.empty()) {
                NodeRef below = stack_.back();
                stack_.pop_back();
                stack_.push_back(dag_.concat(f, below));
            } else {
                stack_.push_back(f);
            }
        }
        if (stack_.empty())
            throw Error("internal: dominator stack emptied by a phase");
    }

    struct KeyHash {
        size_t operator()(const Key& k) const {
            size_t h = 0x9e3779b97f4a7c15ull;
            for (int64_t v : k) h = h * 1099511628211ull ^ static_cast<size_t>(v);
            return h;
        }
    };

    const ParserTables<S>& T_;
    RelationDag<S> dag_;
    std::vector<NodeRef> stack_; // bottom first, top at the back
    std::unordered_map<Key, TrieEntry, KeyHash> trie_;
    EngineStats stats_;
    size_t max_consumed_ = 0;
};

} // namespace relparse
