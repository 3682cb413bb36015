// relation.hpp - immutable DAG of parsing relations with deferred labels
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "relparse/closures.hpp"

namespace relparse {

using NodeRef = int32_t;
using LabelRef = int32_t;

constexpr LabelRef kNoLabel = -1;
constexpr LabelRef kLabelEps = 0;

struct DagStats {
    size_t nodes = 0;   // stored vertices (root included)
    size_t edges = 0;   // stored edges
    size_t labels = 0;  // stored label nodes
    size_t derivative_calls = 0;
    size_t flatten_ops = 0; // semiring operations spent inside flatten
};

// Vertices represent parsing relations: edges (label, atomic, earlier node)
// decompose the eps-free part, the final label holds the pure-guide part.
// Nodes and labels are immutable once created; labels are hash-consed, nodes
// optionally so (memoized sessions turn it on, plain runs keep creation-order
// growth observable).
template <class S>
class RelationDag {
public:
    using Value = typename S::Value;

    struct Edge {
        LabelRef label;
        AtomicId atomic;
        NodeRef target;
        bool operator==(const Edge& o) const {
            return label == o.label && atomic == o.atomic && target == o.target;
        }
    };
    struct Node {
        std::vector<Edge> edges;
        LabelRef final = kNoLabel;
    };

    explicit RelationDag(const ClosureTable<S>& ct, bool cons_nodes = false)
        : ct_(ct), sr_(ct.semiring()), cons_(cons_nodes) {
        labels_.push_back({LabelKind::Eps, sr_.zero(), kLamEmpty, -1, -1, {}});
        fl_has_.push_back(1);
        fl_val_.push_back(sr_.one());
        Node rootNode;
        rootNode.final = kLabelEps;
        nodes_.push_back(std::move(rootNode));
        stats_.nodes = 1;
        stats_.labels = 1;
    }

    const ClosureTable<S>& closures() const { return ct_; }
    const S& semiring() const { return sr_; }
    const DagStats& stats() const { return stats_; }
    size_t node_count() const { return nodes_.size(); }

    NodeRef root() const { return 0; }
    const Node& node(NodeRef v) const { return nodes_[v]; }
    bool is_dead(NodeRef v) const {
        return nodes_[v].edges.empty() && nodes_[v].final == kNoLabel;
    }

    NodeRef make_dead() { return make_node({}, kNoLabel); }

    // N(C(s)) . tail; head must be the Init atomic of a closure family.
    NodeRef prepend_atomic(AtomicId head, NodeRef tail) {
        return make_node({{kLabelEps, head, tail}}, kNoLabel);
    }

    // delta . tail: rewrites every label; the tail node is untouched.
    NodeRef prepend_delta(const Value& delta, NodeRef tail) {
        if (sr_.is_zero(delta)) throw ZeroPrependError("prepend_delta with zero value");
        const Node& t = nodes_[tail];
        std::vector<Edge> edges;
        edges.reserve(t.edges.size());
        for (const Edge& e : t.edges)
            edges.push_back({mk_prepend(delta, kLamUnit, e.label), e.atomic, e.target});
        LabelRef fin = t.final == kNoLabel
                           ? kNoLabel
                           : mk_prepend(delta, kLamUnit, t.final);
        return make_node(std::move(edges), fin);
    }

    // Union with merging of edges that share (atomic, target).
    NodeRef union_nodes(const std::vector<NodeRef>& parts) {
        if (parts.empty()) return make_dead();
        if (parts.size() == 1) return parts[0];
        std::vector<Edge> edges;
        std::vector<std::vector<LabelRef>> labelSets;
        std::map<std::pair<AtomicId, NodeRef>, size_t> where;
        std::vector<LabelRef> finals;
        for (NodeRef p : parts) {
            const Node& nd = nodes_[p];
            for (const Edge& e : nd.edges) {
                auto key = std::make_pair(e.atomic, e.target);
                auto it = where.find(key);
                if (it == where.end()) {
                    where.emplace(key, edges.size());
                    edges.push_back(e);
                    labelSets.push_back({e.label});
                } else {
                    labelSets[it->second].push_back(e.label);
                }
            }
            if (nd.final != kNoLabel) finals.push_back(nd.final);
        }
        for (size_t i = 0; i < edges.size(); ++i)
            if (labelSets[i].size() > 1) edges[i].label = mk_union(labelSets[i]);
        LabelRef fin = finals.empty() ? kNoLabel : mk_union(finals);
        return make_node(std::move(edges), fin);
    }

    // Flat derivative by s; at most one component, absent when empty.
    std::optional<NodeRef> derivative(NodeRef v, StateId s) {
        ++stats_.derivative_calls;
        const Node& nd = nodes_[v];
        std::vector<Edge> newEdges;
        std::vector<LabelRef> finalParts;
        std::map<std::pair<AtomicId, NodeRef>, size_t> where;
        std::vector<std::vector<LabelRef>> labelSets;
        auto push_edge = [&](LabelRef l, AtomicId a, NodeRef t) {
            auto key = std::make_pair(a, t);
            auto it = where.find(key);
            if (it == where.end()) {
                where.emplace(key, newEdges.size());
                newEdges.push_back({l, a, t});
                labelSets.push_back({l});
            } else {
                labelSets[it->second].push_back(l);
            }
        };
        for (const Edge& e : nd.edges) {
            const auto* pairs = ct_.derive(e.atomic, s);
            if (!pairs) continue;
            Value fl = flatten(e.label);
            if (sr_.is_zero(fl)) continue;
            for (const auto& [lam, xi2] : *pairs) {
                Value dj = ct_.wrap(fl, lam);
                if (sr_.is_zero(dj)) continue;
                push_edge(mk_prepend(dj, kLamUnit, kLabelEps), xi2, e.target);
                LamId acc = ct_.atomic_epsilon(xi2);
                if (acc != kLamEmpty) {
                    if (e.target == boundary_) boundary_read_ = true;
                    const Node& tgt = nodes_[e.target];
                    for (const Edge& te : tgt.edges)
                        push_edge(mk_prepend(dj, acc, te.label), te.atomic, te.target);
                    if (tgt.final != kNoLabel)
                        finalParts.push_back(mk_prepend(dj, acc, tgt.final));
                }
            }
        }
        if (newEdges.empty() && finalParts.empty()) return std::nullopt;
        for (size_t i = 0; i < newEdges.size(); ++i)
            if (labelSets[i].size() > 1) newEdges[i].label = mk_union(labelSets[i]);
        LabelRef fin = finalParts.empty() ? kNoLabel : mk_union(finalParts);
        return make_node(std::move(newEdges), fin);
    }

    Value epsilon(NodeRef v) {
        const Node& nd = nodes_[v];
        if (nd.final == kNoLabel) return sr_.zero();
        return flatten(nd.final);
    }

    // Node creation from explicit parts; used by the factorizer's rebuilds.
    NodeRef remake_node(std::vector<Edge> edges, LabelRef fin) {
        return make_node(std::move(edges), fin);
    }

    // Relation concatenation by substitution at the root sink. Memoized so
    // repeated materializations return identical nodes.
    NodeRef concat(NodeRef a, NodeRef b) {
        if (a == root()) return b;
        if (b == root()) return a;
        uint64_t key = (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
        auto hit = concat_cache_.find(key);
        if (hit != concat_cache_.end()) return hit->second;
        std::map<NodeRef, NodeRef> phi;
        NodeRef r = concat_map(a, b, phi);
        concat_cache_.emplace(key, r);
        return r;
    }

    // Flatten of a label: the value of its relation with pending guides
    // discharged. Commutative semirings get a fully memoized bottom-up pass;
    // the rest thread the accumulated prefix through wrap per call.
    Value flatten(LabelRef l) {
        if (fl_has_[l]) return fl_val_[l];
        Value v;
        if constexpr (S::kCommutative) {
            v = flatten_commutative(l);
        } else {
            v = flatten_prefix(sr_.one(), l);
        }
        fl_has_[l] = 1;
        fl_val_[l] = v;
        return v;
    }

    // --- instrumentation ---------------------------------------------------
    void watch_boundary(NodeRef v) {
        boundary_ = v;
        boundary_read_ = false;
    }
    void unwatch_boundary() { boundary_ = -1; }
    bool boundary_read() const { return boundary_read_; }

    // --- debug / test support ----------------------------------------------

    std::string dump(NodeRef v) const {
        const Node& nd = nodes_[v];
        std::string out = "node#" + std::to_string(v) + ": final=";
        out += nd.final == kNoLabel ? "-" : std::to_string(nd.final);
        out += " edges=[";
        for (size_t i = 0; i < nd.edges.size(); ++i) {
            if (i) out += ", ";
            out += "(" + std::to_string(nd.edges[i].label) + ", " +
                   ct_.atomic_tag(nd.edges[i].atomic) + ", " +
                   std::to_string(nd.edges[i].target) + ")";
        }
        return out + "]";
    }

    // DAG well-formedness: edges reference strictly smaller node ids and all
    // refs stay in range.
    bool audit() const {
        for (size_t v = 0; v < nodes_.size(); ++v) {
            const Node& nd = nodes_[v];
            if (nd.final != kNoLabel &&
                (nd.final < 0 || nd.final >= static_cast<LabelRef>(labels_.size())))
                return false;
            for (const Edge& e : nd.edges) {
                if (e.target < 0 || e.target >= static_cast<NodeRef>(v)) return false;
                if (e.label < 0 || e.label >= static_cast<LabelRef>(labels_.size()))
                    return false;
                if (e.atomic < 0 || e.atomic >= static_cast<AtomicId>(ct_.atomic_count()))
                    return false;
            }
        }
        return true;
    }

    // State skeletons of the represented relation up to a length bound: the
    // null-closed configuration language, used by the semantics test-suite.
    std::set<std::vector<StateId>> skeletons(NodeRef v, size_t max_len) {
        std::set<std::vector<StateId>> out;
        skel_node(v, max_len, out, {});
        return out;
    }

private:
    enum class LabelKind : uint8_t { Eps, Prepend, Union, Concat };
    struct Label {
        LabelKind kind;
        Value delta;    // Prepend
        LamId lam;      // Prepend
        LabelRef a, b;  // Prepend: tail in a; Concat: a then b
        std::vector<LabelRef> kids; // Union
    };

    NodeRef make_node(std::vector<Edge> edges, LabelRef fin) {
        if (cons_) {
            size_t h = 0x811c9dc5u ^ static_cast<size_t>(fin);
            for (const Edge& e : edges) {
                h = h * 1099511628211ull ^ static_cast<size_t>(e.label);
                h = h * 1099511628211ull ^ static_cast<size_t>(e.atomic) << 1;
                h = h * 1099511628211ull ^ static_cast<size_t>(e.target) << 2;
            }
            auto& bucket = node_index_[h];
            for (NodeRef id : bucket) {
                const Node& nd = nodes_[id];
                if (nd.final == fin && nd.edges == edges) return id;
            }
            nodes_.push_back({std::move(edges), fin});
            NodeRef id = static_cast<NodeRef>(nodes_.size() - 1);
            bucket.push_back(id);
            ++stats_.nodes;
            stats_.edges += nodes_.back().edges.size();
            return id;
        }
        nodes_.push_back({std::move(edges), fin});
        ++stats_.nodes;
        stats_.edges += nodes_.back().edges.size();
        return static_cast<NodeRef>(nodes_.size() - 1);
    }

    LabelRef store_label(Label l, size_t h) {
        auto& bucket = label_index_[h];
        for (LabelRef id : bucket) {
            const Label& m = labels_[id];
            if (m.kind != l.kind) continue;
            switch (l.kind) {
            case LabelKind::Prepend:
                if (m.lam == l.lam && m.a == l.a && sr_.equal(m.delta, l.delta)) return id;
                break;
            case LabelKind::Union:
                if (m.kids == l.kids) return id;
                break;
            case LabelKind::Concat:
                if (m.a == l.a && m.b == l.b) return id;
                break;
            case LabelKind::Eps:
                return id;
            }
        }
        labels_.push_back(std::move(l));
        fl_has_.push_back(0);
        fl_val_.push_back(sr_.zero());
        LabelRef id = static_cast<LabelRef>(labels_.size() - 1);
        bucket.push_back(id);
        ++stats_.labels;
        return id;
    }

    LabelRef mk_prepend(const Value& delta, LamId lam, LabelRef tail) {
        if (lam == kLamUnit && tail == kLabelEps && sr_.equal(delta, sr_.one()))
            return kLabelEps;
        size_t h = 0x9e3779b9u;
        h = h * 131 ^ 1;
        h = h * 1099511628211ull ^ sr_.hash(delta);
        h = h * 1099511628211ull ^ static_cast<size_t>(lam);
        h = h * 1099511628211ull ^ static_cast<size_t>(tail);
        return store_label({LabelKind::Prepend, delta, lam, tail, -1, {}}, h);
    }

    LabelRef mk_union(std::vector<LabelRef> kids) {
        if (kids.size() == 1) return kids[0];
        size_t h = 0x85ebca6bu;
        for (LabelRef k : kids) h = h * 1099511628211ull ^ static_cast<size_t>(k);
        return store_label({LabelKind::Union, sr_.zero(), kLamEmpty, -1, -1, std::move(kids)},
                           h);
    }

    LabelRef mk_concat(LabelRef a, LabelRef b) {
        if (a == kLabelEps) return b;
        if (b == kLabelEps) return a;
        size_t h = 0xc2b2ae35u;
        h = h * 1099511628211ull ^ static_cast<size_t>(a);
        h = h * 1099511628211ull ^ static_cast<size_t>(b);
        return store_label({LabelKind::Concat, sr_.zero(), kLamEmpty, a, b, {}}, h);
    }

    NodeRef concat_map(NodeRef u, NodeRef b, std::map<NodeRef, NodeRef>& phi) {
        if (u == root()) return b;
        auto it = phi.find(u);
        if (it != phi.end()) return it->second;
        const Node nd = nodes_[u]; // copy: nodes_ may reallocate below
        std::vector<Edge> edges;
        edges.reserve(nd.edges.size());
        for (const Edge& e : nd.edges)
            edges.push_back({e.label, e.atomic, concat_map(e.target, b, phi)});
        LabelRef fin = kNoLabel;
        if (nd.final != kNoLabel) {
            const Node& bn = nodes_[b];
            for (const Edge& be : bn.edges)
                edges.push_back({mk_concat(nd.final, be.label), be.atomic, be.target});
            if (bn.final != kNoLabel) fin = mk_concat(nd.final, bn.final);
        }
        NodeRef r = make_node(std::move(edges), fin);
        phi.emplace(u, r);
        return r;
    }

    // Bottom-up flatten, valid when mul commutes: the pending parts factor out
    // as the lam scalar. Iterative so long chains cannot overflow the stack.
    Value flatten_commutative(LabelRef l0) {
        std::vector<LabelRef> stack{l0};
        while (!stack.empty()) {
            LabelRef l = stack.back();
            if (fl_has_[l]) {
                stack.pop_back();
                continue;
            }
            const Label& lb = labels_[l];
            bool ready = true;
            auto need = [&](LabelRef d) {
                if (!fl_has_[d]) {
                    stack.push_back(d);
                    ready = false;
                }
            };
            switch (lb.kind) {
            case LabelKind::Eps:
                break;
            case LabelKind::Prepend:
                need(lb.a);
                break;
            case LabelKind::Concat:
                need(lb.a);
                need(lb.b);
                break;
            case LabelKind::Union:
                for (LabelRef k : lb.kids) need(k);
                break;
            }
            if (!ready) continue;
            Value v = sr_.zero();
            switch (lb.kind) {
            case LabelKind::Eps:
                v = sr_.one();
                break;
            case LabelKind::Prepend:
                v = sr_.mul(lb.delta, sr_.mul(ct_.lam_scalar(lb.lam), fl_val_[lb.a]));
                stats_.flatten_ops += 2;
                break;
            case LabelKind::Concat:
                v = sr_.mul(fl_val_[lb.a], fl_val_[lb.b]);
                ++stats_.flatten_ops;
                break;
            case LabelKind::Union:
                for (LabelRef k : lb.kids) {
                    v = sr_.add(v, fl_val_[k]);
                    ++stats_.flatten_ops;
                }
                break;
            }
            fl_has_[l] = 1;
            fl_val_[l] = v;
            stack.pop_back();
        }
        return fl_val_[l0];
    }

    // Exact flatten for noncommutative semirings: thread the accumulated
    // prefix through the wrap of every primitive on the way down.
    Value flatten_prefix(Value x, LabelRef l) {
        for (;;) {
            const Label& lb = labels_[l];
            switch (lb.kind) {
            case LabelKind::Eps:
                return x;
            case LabelKind::Prepend:
                x = ct_.wrap(sr_.mul(x, lb.delta), lb.lam);
                stats_.flatten_ops += 1 + ct_.lam_pairs(lb.lam).size() * 2;
                l = lb.a;
                break;
            case LabelKind::Concat:
                x = flatten_prefix(std::move(x), lb.a);
                l = lb.b;
                break;
            case LabelKind::Union: {
                Value acc = sr_.zero();
                for (LabelRef k : lb.kids) {
                    acc = sr_.add(acc, flatten_prefix(x, k));
                    ++stats_.flatten_ops;
                }
                return acc;
            }
            }
        }
    }

    // Skeleton enumeration for the semantics suite.
    void skel_node(NodeRef v, size_t max_len, std::set<std::vector<StateId>>& out,
                   const std::vector<StateId>& prefix) {
        if (prefix.size() > max_len) return;
        const Node& nd = nodes_[v];
        if (nd.final != kNoLabel) out.insert(prefix);
        if (prefix.size() == max_len) return;
        for (const Edge& e : nd.edges) {
            for (auto& p : atomic_skeletons(e.atomic, max_len - prefix.size())) {
                std::vector<StateId> np = prefix;
                np.insert(np.end(), p.begin(), p.end());
                skel_node(e.target, max_len, out, np);
            }
        }
    }

    // Nonempty state strings of efree(atomic) up to len: derivative chains
    // that end at an accepting atomic state.
    std::vector<std::vector<StateId>> atomic_skeletons(AtomicId a, size_t len) {
        std::vector<std::vector<StateId>> out;
        if (len == 0) return out;
        for (StateId u : ct_.derive_keys(a)) {
            const auto* pairs = ct_.derive(a, u);
            for (const auto& [lam, a2] : *pairs) {
                (void)lam;
                if (ct_.atomic_epsilon(a2) != kLamEmpty) out.push_back({u});
                for (auto& rest : atomic_skeletons(a2, len - 1)) {
                    std::vector<StateId> s{u};
                    s.insert(s.end(), rest.begin(), rest.end());
                    out.push_back(std::move(s));
                }
            }
        }
        return out;
    }

    const ClosureTable<S>& ct_;
    S sr_;
    bool cons_;
    std::vector<Node> nodes_;
    std::vector<Label> labels_;
    std::vector<char> fl_has_;
    std::vector<Value> fl_val_;
    std::unordered_map<size_t, std::vector<LabelRef>> label_index_;
    std::unordered_map<size_t, std::vector<NodeRef>> node_index_;
    std::unordered_map<uint64_t, NodeRef> concat_cache_;
    DagStats stats_;
    NodeRef boundary_ = -1;
    bool boundary_read_ = false;
};

} // namespace relparse
