#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <map>
#include <queue>
#include <sstream>
#include <vector>

#include "evotree/io.hpp"
#include "evotree/rng.hpp"
#include "evotree/tree.hpp"

using namespace evotree;

namespace {

EvolvingTree build(const std::vector<Event>& events, std::size_t upto) {
    EvolvingTree tree;
    for (std::size_t i = 0; i < upto; ++i) {
        const Event& ev = events[i];
        if (ev.parent.empty())
            tree.add_root(ev.name, ev.label);
        else
            tree.add_child(ev.parent, ev.name, ev.label, ev.length);
    }
    return tree;
}

// Independent distance oracle: BFS over an adjacency list with weights.
double bfs_distance(const EvolvingTree& tree, NodeId a, NodeId b) {
    std::map<NodeId, std::vector<std::pair<NodeId, double>>> adj;
    for (std::size_t e = 0; e < tree.edge_count(); ++e) {
        const EdgeRecord& ed = tree.edge(static_cast<int>(e));
        adj[ed.u].push_back({ed.v, ed.desired_length});
        adj[ed.v].push_back({ed.u, ed.desired_length});
    }
    std::map<NodeId, double> dist{{a, 0.0}};
    std::queue<NodeId> frontier;
    frontier.push(a);
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop();
        if (u == b) return dist[u];
        for (const auto& [v, w] : adj[u])
            if (!dist.count(v)) {
                dist[v] = dist[u] + w;
                frontier.push(v);
            }
    }
    REQUIRE(false);
    return -1.0;
}

}  // namespace

TEST_CASE("chain distances accumulate") {
    EvolvingTree t;
    t.add_root("a", "A");
    t.add_child("a", "b", "B", 10.0);
    t.add_child("b", "c", "C", 20.0);
    t.add_child("c", "d", "D", 5.0);
    CHECK(t.tree_distance(t.id_of("a"), t.id_of("d")) == doctest::Approx(35.0));
    CHECK(t.tree_distance(t.id_of("b"), t.id_of("d")) == doctest::Approx(25.0));
    CHECK(t.tree_distance(t.id_of("a"), t.id_of("a")) == 0.0);
}

TEST_CASE("star distances go through the hub") {
    EvolvingTree t;
    t.add_root("hub", "H");
    for (int i = 0; i < 5; ++i)
        t.add_child("hub", "leaf" + std::to_string(i), "L", 100.0);
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            CHECK(t.tree_distance(t.id_of("leaf" + std::to_string(i)),
                                  t.id_of("leaf" + std::to_string(j))) ==
                  doctest::Approx(200.0));
}

TEST_CASE("distances match a BFS oracle on random prefixes") {
    std::istringstream text(generate_synthetic(100, 5, 100.0, 5));
    const std::vector<Event> events = parse_events(text);
    SplitMix64 rng(99);
    for (const std::size_t upto : {5ul, 23ul, 60ul, 100ul}) {
        const EvolvingTree tree = build(events, upto);
        for (int trial = 0; trial < 30; ++trial) {
            const auto ra = static_cast<std::uint32_t>(rng.below(tree.real_count()));
            const auto rb = static_cast<std::uint32_t>(rng.below(tree.real_count()));
            const NodeId a = tree.real_ids()[ra];
            const NodeId b = tree.real_ids()[rb];
            if (a == b) continue;
            CHECK(tree.tree_distance(a, b) ==
                  doctest::Approx(bfs_distance(tree, a, b)).epsilon(1e-12));
            CHECK(tree.distance_by_rank(ra, rb) ==
                  doctest::Approx(tree.tree_distance(a, b)));
        }
    }
}

TEST_CASE("every insertion keeps the structure a connected tree") {
    std::istringstream text(generate_synthetic(80, 5, 50.0, 8));
    const std::vector<Event> events = parse_events(text);
    EvolvingTree tree;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& ev = events[i];
        if (ev.parent.empty())
            tree.add_root(ev.name, ev.label);
        else
            tree.add_child(ev.parent, ev.name, ev.label, ev.length);
        CHECK(tree.real_count() == i + 1);
        CHECK(tree.edge_count() == i);  // n nodes, n-1 edges: a tree

        // Union-find over edges: everything must collapse to one component.
        std::vector<NodeId> parent(tree.node_count());
        for (NodeId k = 0; k < parent.size(); ++k) parent[k] = k;
        const std::function<NodeId(NodeId)> find = [&](NodeId x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t e = 0; e < tree.edge_count(); ++e)
            parent[find(tree.edge(static_cast<int>(e)).u)] =
                find(tree.edge(static_cast<int>(e)).v);
        std::size_t stray = 0;
        for (const NodeId id : tree.real_ids())
            if (find(id) != find(tree.real_ids()[0])) ++stray;
        CHECK(stray == 0);
    }
}

TEST_CASE("subdivision conserves structure and length") {
    EvolvingTree t;
    t.add_root("a", "A");
    t.add_child("a", "b", "B", 90.0);
    const std::vector<NodeId> subs = t.subdivide_edge(0, 2);
    CHECK(subs.size() == 2);
    CHECK(t.node_count() == 4);
    CHECK(t.real_count() == 2);
    CHECK(t.edge(0).chain.size() == 4);
    CHECK(t.segments().size() == 3);
    double total = 0.0;
    for (const Segment& s : t.segments()) {
        CHECK(s.rest_length == doctest::Approx(30.0));
        total += s.rest_length;
    }
    CHECK(total == doctest::Approx(90.0));
    for (const NodeId s : subs) {
        CHECK(t.node(s).kind == NodeKind::subdivision);
        CHECK(t.parent_of(s) == no_node);
    }
    // Real-pair distances ignore subdivision: still the desired length.
    CHECK(t.tree_distance(t.id_of("a"), t.id_of("b")) == doctest::Approx(90.0));
}

TEST_CASE("subdivide with zero nodes is a no-op on the chain") {
    EvolvingTree t;
    t.add_root("a", "A");
    t.add_child("a", "b", "B", 10.0);
    CHECK(t.subdivide_edge(0, 0).empty());
    CHECK(t.edge(0).chain.size() == 2);
    CHECK(t.segments().size() == 1);
}

TEST_CASE("incident segments are indexed per node") {
    EvolvingTree t;
    t.add_root("a", "A");
    t.add_child("a", "b", "B", 10.0);
    t.add_child("a", "c", "C", 10.0);
    t.subdivide_edge(0, 1);
    CHECK(t.incident_segments(t.id_of("a")).size() == 2);  // a-s, a-c
    CHECK(t.incident_segments(t.id_of("b")).size() == 1);
    const NodeId sub = t.edge(0).chain[1];
    CHECK(t.incident_segments(sub).size() == 2);
    for (const int si : t.incident_segments(sub)) {
        const Segment& s = t.segments()[static_cast<std::size_t>(si)];
        CHECK((s.a == sub || s.b == sub));
    }
}

TEST_CASE("structural errors are rejected") {
    EvolvingTree t;
    CHECK_THROWS_AS(t.add_child("a", "b", "B", 10.0), std::logic_error);
    t.add_root("a", "A");
    CHECK_THROWS_AS(t.add_root("z", "Z"), std::logic_error);
    CHECK_THROWS_AS(t.add_child("missing", "b", "B", 10.0), std::invalid_argument);
    t.add_child("a", "b", "B", 10.0);
    CHECK_THROWS_AS(t.add_child("a", "b", "B2", 10.0), std::invalid_argument);
    CHECK_THROWS_AS(t.add_child("a", "c", "C", -1.0), std::invalid_argument);
    CHECK_THROWS_AS(t.add_child("a", "c", "C", 0.0), std::invalid_argument);
    CHECK_THROWS_AS(t.subdivide_edge(5, 1), std::out_of_range);
    CHECK_THROWS_AS(t.subdivide_edge(0, -1), std::invalid_argument);
    t.subdivide_edge(0, 1);
    CHECK_THROWS_AS(t.subdivide_edge(0, 1), std::logic_error);
    // Subdivision nodes are not valid distance endpoints.
    const NodeId sub = t.edge(0).chain[1];
    CHECK_THROWS_AS(t.tree_distance(t.id_of("a"), sub), std::invalid_argument);
}

TEST_CASE("ids are dense and creation-ordered") {
    EvolvingTree t;
    CHECK(t.empty());
    const NodeId r = t.add_root("a", "A");
    CHECK(r == 0);
    const NodeId b = t.add_child("a", "b", "B", 10.0);
    CHECK(b == 1);
    const auto subs = t.subdivide_edge(0, 2);
    CHECK(subs[0] == 2);
    CHECK(subs[1] == 3);
    const NodeId c = t.add_child("b", "c", "C", 10.0);
    CHECK(c == 4);
    CHECK(t.node(c).real_rank == 2);
    CHECK(t.parent_of(c) == b);
    CHECK(t.parent_of(r) == no_node);
}
