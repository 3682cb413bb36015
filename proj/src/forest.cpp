#include "relparse/forest.hpp"

namespace relparse {

ForestArena::ForestArena() {
    nodes_.push_back({Kind::Empty, -1, 0, 0});
    nodes_.push_back({Kind::Eps, -1, 0, 0});
}

ForestArena::NodeId ForestArena::intern(const Node& n) {
    uint64_t key = (static_cast<uint64_t>(n.kind) << 56) ^
                   (static_cast<uint64_t>(static_cast<uint32_t>(n.trans)) << 32) ^
                   (static_cast<uint64_t>(n.a) << 16) ^ n.b;
    auto& bucket = index_[key];
    for (NodeId id : bucket) {
        const Node& m = nodes_[id];
        if (m.kind == n.kind && m.trans == n.trans && m.a == n.a && m.b == n.b)
            return id;
    }
    nodes_.push_back(n);
    NodeId id = static_cast<NodeId>(nodes_.size() - 1);
    bucket.push_back(id);
    return id;
}

ForestArena::NodeId ForestArena::leaf(TransId d) {
    return intern({Kind::Leaf, d, 0, 0});
}

ForestArena::NodeId ForestArena::cat(NodeId x, NodeId y) {
    if (x == empty() || y == empty()) return empty();
    if (x == eps()) return y;
    if (y == eps()) return x;
    return intern({Kind::Cat, -1, x, y});
}

ForestArena::NodeId ForestArena::alt(NodeId x, NodeId y) {
    if (x == empty()) return y;
    if (y == empty()) return x;
    return intern({Kind::Alt, -1, x, y});
}

ForestArena::Enumeration ForestArena::enumerate(NodeId id, size_t limit) const {
    Enumeration out;
    std::vector<TransId> prefix;
    // DFS with an explicit continuation stack of pending right parts.
    struct Walker {
        const ForestArena& arena;
        Enumeration& out;
        size_t limit;
        bool walk(NodeId v, std::vector<TransId>& acc,
                  const std::vector<NodeId>& conts, size_t ci) {
            if (out.sequences.size() >= limit) {
                out.truncated = true;
                return false;
            }
            const Node& n = arena.nodes_[v];
            switch (n.kind) {
            case Kind::Empty:
                return true;
            case Kind::Eps: {
                if (ci == conts.size()) {
                    out.sequences.push_back(acc);
                    return true;
                }
                return walk(conts[ci], acc, conts, ci + 1);
            }
            case Kind::Leaf: {
                acc.push_back(n.trans);
                bool ok;
                if (ci == conts.size()) {
                    out.sequences.push_back(acc);
                    ok = true;
                } else {
                    ok = walk(conts[ci], acc, conts, ci + 1);
                }
                acc.pop_back();
                return ok;
            }
            case Kind::Cat: {
                std::vector<NodeId> nc = conts;
                nc.insert(nc.begin() + ci, n.b);
                return walk(n.a, acc, nc, ci);
            }
            case Kind::Alt: {
                if (!walk(n.a, acc, conts, ci)) return false;
                return walk(n.b, acc, conts, ci);
            }
            }
            return true;
        }
    } w{*this, out, limit};
    std::vector<NodeId> conts;
    w.walk(id, prefix, conts, 0);
    return out;
}

uint64_t ForestArena::count_capped(NodeId id, uint64_t cap) const {
    std::unordered_map<NodeId, uint64_t> memo;
    // iterative post-order
    std::vector<std::pair<NodeId, bool>> stack{{id, false}};
    while (!stack.empty()) {
        auto [v, done] = stack.back();
        stack.pop_back();
        if (memo.count(v)) continue;
        const Node& n = nodes_[v];
        if (n.kind == Kind::Empty) { memo[v] = 0; continue; }
        if (n.kind == Kind::Eps || n.kind == Kind::Leaf) { memo[v] = 1; continue; }
        if (!done) {
            stack.push_back({v, true});
            stack.push_back({n.a, false});
            stack.push_back({n.b, false});
        } else {
            uint64_t a = memo[n.a], b = memo[n.b];
            uint64_t r;
            if (n.kind == Kind::Cat)
                r = (a == 0 || b == 0) ? 0 : (a > cap / b ? cap : a * b);
            else
                r = (a > cap - b) ? cap : a + b;
            memo[v] = r > cap ? cap : r;
        }
    }
    return memo[id];
}

} // namespace relparse
