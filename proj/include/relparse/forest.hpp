// forest.hpp - hash-consed expression DAG over transition sequences
#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "relparse/ids.hpp"

namespace relparse {

// Free semiring carrier: {empty, eps, leaf(d), cat, alt} with shared
// substructure stored once. Node 0 is empty (zero), node 1 is eps (one).
class ForestArena {
public:
    using NodeId = uint32_t;
    enum class Kind : uint8_t { Empty, Eps, Leaf, Cat, Alt };

    struct Node {
        Kind kind;
        TransId trans = -1; // Leaf
        NodeId a = 0, b = 0; // Cat/Alt
    };

    ForestArena();

    NodeId empty() const { return 0; }
    NodeId eps() const { return 1; }
    NodeId leaf(TransId d);
    NodeId cat(NodeId x, NodeId y);
    NodeId alt(NodeId x, NodeId y);

    const Node& node(NodeId id) const { return nodes_[id]; }
    size_t size() const { return nodes_.size(); }

    struct Enumeration {
        std::vector<std::vector<TransId>> sequences; // multiset, duplicates kept
        bool truncated = false;
    };
    // Up to `limit` sequences denoted by the expression; duplicates are
    // reported when the DAG encodes them.
    Enumeration enumerate(NodeId id, size_t limit) const;

    // Number of denoted sequences (as a multiset), capped at `cap`.
    uint64_t count_capped(NodeId id, uint64_t cap) const;

private:
    NodeId intern(const Node& n);
    std::vector<Node> nodes_;
    std::unordered_map<uint64_t, std::vector<NodeId>> index_;
};

} // namespace relparse
