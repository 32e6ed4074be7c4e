#include "hip/tanag.hpp"

#include <algorithm>
#include <numeric>

#include "hip/errors.hpp"

namespace hip {

namespace {

// Disjoint set with path compression; union by size.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
};

std::vector<AliasCluster> group_into_clusters(const std::vector<AttributedName>& vertices,
                                              const std::vector<int>& root_of,
                                              std::vector<int>& cluster_of) {
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        groups[root_of[i]].push_back(static_cast<int>(i));
    }

    std::vector<AliasCluster> clusters;
    clusters.reserve(groups.size());
    for (auto& [root, members] : groups) {
        AliasCluster c;
        for (int idx : members) c.members.push_back(vertices[static_cast<std::size_t>(idx)]);
        // members are already display-sorted because vertex indices are.
        clusters.push_back(std::move(c));
    }
    std::sort(clusters.begin(), clusters.end(), [](const AliasCluster& a, const AliasCluster& b) {
        if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
        return a.members.front().display() < b.members.front().display();
    });

    cluster_of.assign(vertices.size(), -1);
    for (std::size_t cid = 0; cid < clusters.size(); ++cid) {
        auto& c = clusters[cid];
        c.id = static_cast<int>(cid);
        for (const auto& m : c.members) {
            auto it = std::lower_bound(vertices.begin(), vertices.end(), m);
            cluster_of[static_cast<std::size_t>(it - vertices.begin())] = c.id;
        }
    }
    return clusters;
}

}  // namespace

long long alias_pair_count(int cluster_size) {
    auto n = static_cast<long long>(cluster_size);
    return n * (n - 1) / 2;
}

long long alias_pair_count(const AliasCluster& cluster) {
    return alias_pair_count(cluster.size());
}

Tanag Tanag::build(const AttributedCorpus& corpus) {
    std::set<AttributedName> vertex_set;
    for (const auto& rec : corpus.records) vertex_set.insert(rec.name);

    std::map<std::pair<std::string, std::string>, EdgeSpec> edge_map;
    for (const auto& assertion : corpus.assertions) {
        vertex_set.insert(assertion.canonical);
        for (const auto& alias : assertion.aliases) {
            vertex_set.insert(alias);
            auto a = assertion.canonical;
            auto b = alias;
            if (b < a) std::swap(a, b);
            auto key = std::make_pair(a.display(), b.display());
            auto it = edge_map.find(key);
            if (it == edge_map.end()) {
                it = edge_map.emplace(key, EdgeSpec{a, b, {}}).first;
            }
            it->second.mapping_ids.insert(assertion.mapping_id);
        }
    }

    std::vector<EdgeSpec> edges;
    edges.reserve(edge_map.size());
    for (auto& [key, spec] : edge_map) edges.push_back(std::move(spec));

    return from_graph({vertex_set.begin(), vertex_set.end()}, edges);
}

Tanag Tanag::from_graph(std::vector<AttributedName> vertices,
                        const std::vector<EdgeSpec>& edges) {
    Tanag g;
    std::set<AttributedName> vertex_set(vertices.begin(), vertices.end());
    for (const auto& e : edges) {
        vertex_set.insert(e.a);
        vertex_set.insert(e.b);
    }
    g.vertices_.assign(vertex_set.begin(), vertex_set.end());
    for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
        g.index_by_display_[g.vertices_[i].display()] = static_cast<int>(i);
    }

    std::map<std::pair<int, int>, std::set<std::string>> edge_map;
    for (const auto& e : edges) {
        if (e.a == e.b) continue;  // alias edges connect distinct names
        int u = g.index_by_display_.at(e.a.display());
        int v = g.index_by_display_.at(e.b.display());
        if (u > v) std::swap(u, v);
        auto& ids = edge_map[{u, v}];
        ids.insert(e.mapping_ids.begin(), e.mapping_ids.end());
    }

    UnionFind uf(g.vertices_.size());
    g.adjacency_.assign(g.vertices_.size(), {});
    for (auto& [key, mapping_ids] : edge_map) {
        InternalEdge ie;
        ie.u = key.first;
        ie.v = key.second;
        ie.mapping_ids = std::move(mapping_ids);
        int eid = static_cast<int>(g.edges_.size());
        g.adjacency_[static_cast<std::size_t>(ie.u)].emplace_back(ie.v, eid);
        g.adjacency_[static_cast<std::size_t>(ie.v)].emplace_back(ie.u, eid);
        uf.unite(ie.u, ie.v);
        g.edges_.push_back(std::move(ie));
    }

    std::vector<int> root_of(g.vertices_.size());
    for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
        root_of[i] = uf.find(static_cast<int>(i));
    }
    g.clusters_ = group_into_clusters(g.vertices_, root_of, g.cluster_of_);
    return g;
}

AliasEdge Tanag::materialize(const InternalEdge& e) const {
    AliasEdge out;
    out.a = vertices_[static_cast<std::size_t>(e.u)];
    out.b = vertices_[static_cast<std::size_t>(e.v)];
    out.confidence = static_cast<int>(e.mapping_ids.size());
    out.mapping_ids = e.mapping_ids;
    return out;
}

int Tanag::vertex_index(const AttributedName& name) const {
    auto it = index_by_display_.find(name.display());
    return it == index_by_display_.end() ? -1 : it->second;
}

std::vector<AliasEdge> Tanag::edges() const {
    std::vector<AliasEdge> out;
    out.reserve(edges_.size());
    for (const auto& e : edges_) out.push_back(materialize(e));
    return out;
}

std::optional<int> Tanag::cluster_id_of(const AttributedName& name) const {
    int idx = vertex_index(name);
    if (idx < 0) return std::nullopt;
    return cluster_of_[static_cast<std::size_t>(idx)];
}

const AliasCluster& Tanag::cluster(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= clusters_.size()) {
        throw UnknownClusterId("no cluster with id " + std::to_string(id));
    }
    return clusters_[static_cast<std::size_t>(id)];
}

std::optional<AliasEdge> Tanag::find_edge(const AttributedName& a,
                                          const AttributedName& b) const {
    int u = vertex_index(a);
    int v = vertex_index(b);
    if (u < 0 || v < 0) return std::nullopt;
    if (u > v) std::swap(u, v);
    for (const auto& [nbr, eid] : adjacency_[static_cast<std::size_t>(u)]) {
        if (nbr == v) return materialize(edges_[static_cast<std::size_t>(eid)]);
    }
    return std::nullopt;
}

std::vector<AliasEdge> Tanag::edges_in_cluster(int cluster_id) const {
    cluster(cluster_id);  // bounds check
    std::vector<AliasEdge> out;
    for (const auto& e : edges_) {
        if (cluster_of_[static_cast<std::size_t>(e.u)] == cluster_id) {
            out.push_back(materialize(e));
        }
    }
    return out;
}

std::vector<AliasEdge> Tanag::bridges() const {
    const auto n = vertices_.size();
    std::vector<int> disc(n, -1), low(n, 0);
    std::vector<bool> is_bridge(edges_.size(), false);
    int timer = 0;

    // Iterative lowlink DFS; the parent edge id is skipped, not the parent
    // vertex, so a hypothetical parallel edge would still cancel bridgeness.
    struct Frame {
        int v;
        int parent_edge;
        std::size_t next;
    };
    std::vector<Frame> stack;
    for (std::size_t start = 0; start < n; ++start) {
        if (disc[start] != -1) continue;
        stack.push_back({static_cast<int>(start), -1, 0});
        disc[start] = low[start] = timer++;
        while (!stack.empty()) {
            auto& frame = stack.back();
            auto v = static_cast<std::size_t>(frame.v);
            if (frame.next < adjacency_[v].size()) {
                auto [to, eid] = adjacency_[v][frame.next++];
                if (eid == frame.parent_edge) continue;
                if (disc[static_cast<std::size_t>(to)] == -1) {
                    disc[static_cast<std::size_t>(to)] =
                        low[static_cast<std::size_t>(to)] = timer++;
                    stack.push_back({to, eid, 0});
                } else {
                    low[v] = std::min(low[v], disc[static_cast<std::size_t>(to)]);
                }
            } else {
                stack.pop_back();
                if (!stack.empty()) {
                    auto u = static_cast<std::size_t>(stack.back().v);
                    low[u] = std::min(low[u], low[v]);
                    if (low[v] > disc[u]) {
                        is_bridge[static_cast<std::size_t>(frame.parent_edge)] = true;
                    }
                }
            }
        }
    }

    std::vector<AliasEdge> out;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (is_bridge[i]) out.push_back(materialize(edges_[i]));
    }
    // edges_ is sorted by (u, v) and vertex order is display order, so the
    // output is already deterministic by endpoint names.
    return out;
}

WhatIfReport Tanag::what_if_remove(const AttributedName& a, const AttributedName& b) const {
    int u = vertex_index(a);
    int v = vertex_index(b);
    int removed_eid = -1;
    if (u >= 0 && v >= 0) {
        for (const auto& [nbr, eid] : adjacency_[static_cast<std::size_t>(u)]) {
            if (nbr == v) {
                removed_eid = eid;
                break;
            }
        }
    }
    if (removed_eid < 0) {
        throw UnknownEdge("no edge between \"" + a.display() + "\" and \"" + b.display() + "\"");
    }

    WhatIfReport report;
    report.edge = materialize(edges_[static_cast<std::size_t>(removed_eid)]);
    report.cluster_id = cluster_of_[static_cast<std::size_t>(u)];
    const auto& affected = clusters_[static_cast<std::size_t>(report.cluster_id)];
    report.pairs_before = alias_pair_count(affected);

    // Components of the affected cluster only, with the edge skipped.
    std::map<int, int> local;  // vertex idx -> local component
    for (const auto& m : affected.members) local[vertex_index(m)] = -1;
    int component = 0;
    std::vector<int> work;
    for (auto& [start, assigned] : local) {
        if (assigned != -1) continue;
        work.push_back(start);
        assigned = component;
        while (!work.empty()) {
            int cur = work.back();
            work.pop_back();
            for (const auto& [to, eid] : adjacency_[static_cast<std::size_t>(cur)]) {
                if (eid == removed_eid) continue;
                auto it = local.find(to);
                if (it->second == -1) {
                    it->second = component;
                    work.push_back(to);
                }
            }
        }
        ++component;
    }

    std::map<int, std::vector<AttributedName>> groups;
    for (const auto& [idx, comp] : local) {
        groups[comp].push_back(vertices_[static_cast<std::size_t>(idx)]);
    }
    for (auto& [comp, members] : groups) {
        AliasCluster c;
        std::sort(members.begin(), members.end());
        c.members = std::move(members);
        report.resulting.push_back(std::move(c));
    }
    std::sort(report.resulting.begin(), report.resulting.end(),
              [](const AliasCluster& x, const AliasCluster& y) {
                  if (x.members.size() != y.members.size()) {
                      return x.members.size() > y.members.size();
                  }
                  return x.members.front().display() < y.members.front().display();
              });
    for (std::size_t i = 0; i < report.resulting.size(); ++i) {
        report.resulting[i].id = static_cast<int>(i);
        report.pairs_after += alias_pair_count(report.resulting[i]);
    }
    report.reduction =
        report.pairs_before == 0
            ? 0.0
            : 1.0 - static_cast<double>(report.pairs_after) /
                        static_cast<double>(report.pairs_before);
    return report;
}

}  // namespace hip
