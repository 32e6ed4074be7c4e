#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "hip/errors.hpp"
#include "hip/ingest.hpp"
#include "hip/tanag.hpp"

using namespace hip;

namespace {

AttributedName unk(const std::string& name) { return {"UNK", name}; }

Tanag graph_from_pairs(int n, const std::vector<std::pair<int, int>>& pairs) {
    std::vector<AttributedName> vertices;
    for (int i = 0; i < n; ++i) {
        // zero-padded so display order matches numeric order
        char buf[16];
        std::snprintf(buf, sizeof(buf), "N%04d", i);
        vertices.push_back(unk(buf));
    }
    std::vector<Tanag::EdgeSpec> edges;
    for (auto [a, b] : pairs) {
        edges.push_back({vertices[static_cast<std::size_t>(a)],
                         vertices[static_cast<std::size_t>(b)],
                         {"m"}});
    }
    return Tanag::from_graph(vertices, edges);
}

// Independent component oracle: plain recursive-style DFS over an adjacency
// map, no union-find involved.
std::vector<std::set<std::string>> dfs_components(const Tanag& g) {
    std::map<std::string, std::set<std::string>> adj;
    for (const auto& v : g.vertices()) adj[v.display()];
    for (const auto& e : g.edges()) {
        adj[e.a.display()].insert(e.b.display());
        adj[e.b.display()].insert(e.a.display());
    }
    std::set<std::string> seen;
    std::vector<std::set<std::string>> components;
    for (const auto& [start, _] : adj) {
        if (seen.count(start)) continue;
        std::set<std::string> comp;
        std::vector<std::string> stack{start};
        while (!stack.empty()) {
            auto cur = stack.back();
            stack.pop_back();
            if (!comp.insert(cur).second) continue;
            for (const auto& nbr : adj[cur]) {
                if (!comp.count(nbr)) stack.push_back(nbr);
            }
        }
        seen.insert(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    return components;
}

// Bridge oracle: remove each edge in turn and recount components.
std::set<std::pair<std::string, std::string>> naive_bridges(const Tanag& g) {
    auto edges = g.edges();
    auto base = dfs_components(g).size();
    std::set<std::pair<std::string, std::string>> bridges;
    for (std::size_t skip = 0; skip < edges.size(); ++skip) {
        std::map<std::string, std::set<std::string>> adj;
        for (const auto& v : g.vertices()) adj[v.display()];
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (i == skip) continue;
            adj[edges[i].a.display()].insert(edges[i].b.display());
            adj[edges[i].b.display()].insert(edges[i].a.display());
        }
        std::size_t count = 0;
        std::set<std::string> seen;
        for (const auto& [start, _] : adj) {
            if (seen.count(start)) continue;
            ++count;
            std::vector<std::string> stack{start};
            while (!stack.empty()) {
                auto cur = stack.back();
                stack.pop_back();
                if (!seen.insert(cur).second) continue;
                for (const auto& nbr : adj[cur]) stack.push_back(nbr);
            }
        }
        if (count > base) {
            bridges.insert({edges[skip].a.display(), edges[skip].b.display()});
        }
    }
    return bridges;
}

}  // namespace

TEST_CASE("build: confidence aggregates distinct mappings") {
    AttributedCorpus corpus;
    AttributedAssertion m1{"misp", unk("A"), {unk("B")}, std::nullopt};
    AttributedAssertion m2{"malpedia", unk("A"), {unk("B")}, std::nullopt};
    corpus.assertions = {m1, m2};
    auto g = Tanag::build(corpus);
    auto edge = g.find_edge(unk("A"), unk("B"));
    REQUIRE(edge.has_value());
    CHECK(edge->confidence == 2);
    CHECK(edge->mapping_ids == std::set<std::string>{"malpedia", "misp"});

    // duplicate assertion from the same mapping does not raise confidence
    corpus.assertions.push_back(m1);
    auto g2 = Tanag::build(corpus);
    CHECK(g2.find_edge(unk("B"), unk("A"))->confidence == 2);
}

TEST_CASE("build: records without assertions become singletons") {
    AttributedCorpus corpus;
    for (const char* n : {"A", "B", "C", "D", "E"}) {
        AttributedRecord rec;
        rec.name = unk(n);
        corpus.records.push_back(rec);
    }
    auto g = Tanag::build(corpus);
    CHECK(g.vertex_count() == 5);
    CHECK(g.edge_count() == 0);
    CHECK(g.components().size() == 5);
    for (const auto& c : g.components()) CHECK(c.size() == 1);
}

TEST_CASE("components: path plus isolated vertex") {
    AttributedCorpus corpus;
    AttributedRecord d;
    d.name = unk("D");
    corpus.records.push_back(d);
    corpus.assertions.push_back({"m", unk("A"), {unk("B")}, std::nullopt});
    corpus.assertions.push_back({"m", unk("B"), {unk("C")}, std::nullopt});
    auto g = Tanag::build(corpus);
    REQUIRE(g.components().size() == 2);
    CHECK(g.components()[0].size() == 3);
    CHECK(g.components()[1].size() == 1);
    CHECK(g.components()[1].members[0].display() == "UNK:D");
}

TEST_CASE("cluster ids: descending size, lexicographic tiebreak") {
    // two clusters of size 2: {UNK:M, UNK:N} and {UNK:A, UNK:Z}
    AttributedCorpus corpus;
    corpus.assertions.push_back({"m", unk("M"), {unk("N")}, std::nullopt});
    corpus.assertions.push_back({"m", unk("Z"), {unk("A")}, std::nullopt});
    corpus.assertions.push_back({"m", unk("P"), {unk("Q"), unk("R")}, std::nullopt});
    auto g = Tanag::build(corpus);
    REQUIRE(g.components().size() == 3);
    CHECK(g.components()[0].members.front().display() == "UNK:P");  // size 3 first
    CHECK(g.components()[1].members.front().display() == "UNK:A");  // A < M
    CHECK(g.components()[2].members.front().display() == "UNK:M");
}

TEST_CASE("components match the DFS oracle on random graphs") {
    std::mt19937 rng(20260811);
    for (int trial = 0; trial < 200; ++trial) {
        int n = std::uniform_int_distribution<int>(1, 200)(rng);
        int m = std::uniform_int_distribution<int>(0, 400)(rng);
        std::uniform_int_distribution<int> pick(0, n - 1);
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < m; ++i) {
            int a = pick(rng), b = pick(rng);
            if (a != b) pairs.emplace_back(a, b);
        }
        auto g = graph_from_pairs(n, pairs);

        std::set<std::set<std::string>> expected;
        for (auto& comp : dfs_components(g)) expected.insert(comp);
        std::set<std::set<std::string>> actual;
        std::size_t total = 0;
        for (const auto& c : g.components()) {
            std::set<std::string> members;
            for (const auto& v : c.members) members.insert(v.display());
            total += members.size();
            actual.insert(std::move(members));
        }
        REQUIRE(actual == expected);
        CHECK(total == g.vertex_count());  // partition covers every vertex
    }
}

TEST_CASE("bridges: path, triangle") {
    auto path = graph_from_pairs(3, {{0, 1}, {1, 2}});
    CHECK(path.bridges().size() == 2);

    auto triangle = graph_from_pairs(3, {{0, 1}, {1, 2}, {2, 0}});
    CHECK(triangle.bridges().empty());
}

TEST_CASE("bridges match the per-edge removal oracle on random graphs") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        int n = std::uniform_int_distribution<int>(2, 40)(rng);
        int m = std::uniform_int_distribution<int>(1, 100)(rng);
        std::uniform_int_distribution<int> pick(0, n - 1);
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < m; ++i) {
            int a = pick(rng), b = pick(rng);
            if (a != b) pairs.emplace_back(a, b);
        }
        auto g = graph_from_pairs(n, pairs);

        std::set<std::pair<std::string, std::string>> reported;
        for (const auto& e : g.bridges()) {
            reported.insert({e.a.display(), e.b.display()});
        }
        REQUIRE(reported == naive_bridges(g));
    }
}

TEST_CASE("bridges are deterministic and sorted by endpoints") {
    auto g = graph_from_pairs(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {2, 3}});
    auto b1 = g.bridges();
    auto b2 = g.bridges();
    REQUIRE(b1.size() == b2.size());
    for (std::size_t i = 0; i < b1.size(); ++i) {
        CHECK(b1[i].a.display() == b2[i].a.display());
        if (i > 0) {
            CHECK(b1[i - 1].a.display() <= b1[i].a.display());
        }
    }
}

TEST_CASE("alias pair counts") {
    CHECK(alias_pair_count(514) == 131841);
    CHECK(alias_pair_count(400) == 79800);
    CHECK(alias_pair_count(114) == 6441);
    CHECK(alias_pair_count(1) == 0);
    CHECK(alias_pair_count(0) == 0);
    CHECK(alias_pair_count(2) == 1);
}

TEST_CASE("what_if_remove: non-bridge removal keeps the cluster intact") {
    auto triangle = graph_from_pairs(3, {{0, 1}, {1, 2}, {2, 0}});
    auto report = triangle.what_if_remove(unk("N0000"), unk("N0001"));
    CHECK(report.pairs_before == 3);
    CHECK(report.pairs_after == 3);
    CHECK(report.reduction == doctest::Approx(0.0));
    CHECK(report.resulting.size() == 1);
}

TEST_CASE("what_if_remove: edge symmetry and unknown edges") {
    auto g = graph_from_pairs(2, {{0, 1}});
    auto ab = g.what_if_remove(unk("N0000"), unk("N0001"));
    auto ba = g.what_if_remove(unk("N0001"), unk("N0000"));
    CHECK(ab.pairs_after == ba.pairs_after);
    CHECK_THROWS_AS(g.what_if_remove(unk("N0000"), unk("MISSING")), UnknownEdge);
}

TEST_CASE("what_if_remove matches a brute-force recount on random trees") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        int n = std::uniform_int_distribution<int>(2, 60)(rng);
        std::vector<std::pair<int, int>> pairs;
        for (int v = 1; v < n; ++v) {
            pairs.emplace_back(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
        }
        auto g = graph_from_pairs(n, pairs);
        auto edges = g.edges();
        auto pick = edges[std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng)];
        auto report = g.what_if_remove(pick.a, pick.b);

        // brute force: rebuild without the edge, recount pairs over all
        // components that draw from the original cluster's members
        std::vector<Tanag::EdgeSpec> kept;
        for (const auto& e : edges) {
            if (e.a.display() == pick.a.display() && e.b.display() == pick.b.display()) continue;
            kept.push_back({e.a, e.b, e.mapping_ids});
        }
        auto without = Tanag::from_graph(g.vertices(), kept);
        std::set<std::string> affected;
        for (const auto& m : g.cluster(report.cluster_id).members) affected.insert(m.display());
        long long expected_after = 0;
        for (const auto& c : without.components()) {
            if (affected.count(c.members.front().display())) {
                expected_after += alias_pair_count(c);
            }
        }
        CHECK(report.pairs_after == expected_after);
    }
}

TEST_CASE("monotonicity: adding an edge never increases component count") {
    std::mt19937 rng(5);
    int n = 30;
    std::vector<std::pair<int, int>> pairs;
    std::size_t prev = static_cast<std::size_t>(n);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int i = 0; i < 60; ++i) {
        int a = pick(rng), b = pick(rng);
        if (a == b) continue;
        pairs.emplace_back(a, b);
        auto g = graph_from_pairs(n, pairs);
        CHECK(g.components().size() <= prev);
        prev = g.components().size();
    }
}

TEST_CASE("grizzly fixture: confidence, provenance, bridge") {
    auto corpus = load_corpus(load_manifest(test::fixture("grizzly/manifest.json")));
    auto nc = normalize_corpus(corpus, NormalizationRuleSet::defaults());
    auto ac = attribute_corpus(nc, TaxonomyCatalog::defaults(), OverrideTable{});
    auto g = Tanag::build(ac);

    CHECK(g.vertex_count() == 7);
    CHECK(g.components().size() == 1);

    AttributedName grizzly{"UNK", "GRIZZLYSTEPPE"};
    AttributedName apt29{"MANDIANT", "APT29"};
    AttributedName apt28{"MANDIANT", "APT28"};

    auto edge = g.find_edge(grizzly, apt29);
    REQUIRE(edge.has_value());
    CHECK(edge->confidence == 1);
    CHECK(edge->mapping_ids == std::set<std::string>{"misp"});

    bool is_bridge = false;
    for (const auto& b : g.bridges()) {
        if ((b.a == grizzly && b.b == apt29) || (b.a == apt29 && b.b == grizzly)) {
            is_bridge = true;
        }
    }
    CHECK(is_bridge);

    // its removal separates the APT29 side from the APT28 side
    auto report = g.what_if_remove(grizzly, apt29);
    REQUIRE(report.resulting.size() == 2);
    auto in_part = [&](const AttributedName& n, const AliasCluster& c) {
        return std::find(c.members.begin(), c.members.end(), n) != c.members.end();
    };
    CHECK(in_part(apt28, report.resulting[0]));
    CHECK(in_part(grizzly, report.resulting[0]));
    CHECK(in_part(apt29, report.resulting[1]));

    // the Grizzly-APT28 link is corroborated through Sofacy, so not a bridge
    auto ga28 = g.find_edge(apt28, grizzly);
    REQUIRE(ga28.has_value());
    for (const auto& b : g.bridges()) {
        CHECK_FALSE((b.a == ga28->a && b.b == ga28->b));
    }
}
