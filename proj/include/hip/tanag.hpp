#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hip/attribute.hpp"

namespace hip {

// Undirected alias edge. Confidence counts the distinct mappings asserting
// the relationship; the mapping ids themselves are kept for provenance.
struct AliasEdge {
    AttributedName a;
    AttributedName b;
    int confidence = 0;
    std::set<std::string> mapping_ids;
};

// Connected component of the TANAG. Ids are assigned by descending size,
// ties broken by the lexicographically smallest member, so id 0 is always
// the largest cluster.
struct AliasCluster {
    int id = 0;
    std::vector<AttributedName> members;  // sorted by display

    int size() const { return static_cast<int>(members.size()); }
};

// Removal analysis for a single edge: the components the edge's cluster
// falls apart into, and the change in transitive-closure alias pairs.
struct WhatIfReport {
    AliasEdge edge;
    int cluster_id = 0;
    std::vector<AliasCluster> resulting;  // ids local to the report
    long long pairs_before = 0;
    long long pairs_after = 0;
    double reduction = 0.0;  // 1 - after/before
};

// All unordered alias pairs implied by transitive closure over a cluster.
long long alias_pair_count(int cluster_size);
long long alias_pair_count(const AliasCluster& cluster);

// The Threat Actor Name Alias Graph. Immutable once built; queries never
// mutate shared state, so concurrent readers are safe.
class Tanag {
public:
    struct EdgeSpec {
        AttributedName a;
        AttributedName b;
        std::set<std::string> mapping_ids;
    };

    Tanag() = default;

    // Vertices are every attributed name seen in any record or assertion;
    // one edge per unordered pair asserted by at least one mapping.
    static Tanag build(const AttributedCorpus& corpus);

    // Assembles a graph from explicit vertex and edge lists (artifact load,
    // JSON import). Extra vertices named only by edges are added.
    static Tanag from_graph(std::vector<AttributedName> vertices,
                            const std::vector<EdgeSpec>& edges);

    const std::vector<AttributedName>& vertices() const { return vertices_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    std::vector<AliasEdge> edges() const;

    const std::vector<AliasCluster>& components() const { return clusters_; }

    // Looks the name up by display form; nullopt when not a vertex.
    std::optional<int> cluster_id_of(const AttributedName& name) const;
    const AliasCluster& cluster(int id) const;  // throws UnknownClusterId

    // Symmetric: find_edge(a, b) == find_edge(b, a).
    std::optional<AliasEdge> find_edge(const AttributedName& a,
                                       const AttributedName& b) const;

    std::vector<AliasEdge> edges_in_cluster(int cluster_id) const;

    // Cut edges, in deterministic order (sorted by endpoint displays).
    std::vector<AliasEdge> bridges() const;

    // Recomputes components of the affected cluster only; the graph itself
    // is left untouched. Throws UnknownEdge when (a, b) is not an edge.
    WhatIfReport what_if_remove(const AttributedName& a, const AttributedName& b) const;

private:
    struct InternalEdge {
        int u = 0;
        int v = 0;
        std::set<std::string> mapping_ids;
    };

    AliasEdge materialize(const InternalEdge& e) const;
    int vertex_index(const AttributedName& name) const;  // -1 when absent

    std::vector<AttributedName> vertices_;        // sorted by display
    std::vector<InternalEdge> edges_;             // sorted by (u, v), u < v
    std::vector<std::vector<std::pair<int, int>>> adjacency_;  // (neighbor, edge idx)
    std::vector<int> cluster_of_;                 // vertex idx -> cluster id
    std::vector<AliasCluster> clusters_;
    std::map<std::string, int> index_by_display_;
};

}  // namespace hip
