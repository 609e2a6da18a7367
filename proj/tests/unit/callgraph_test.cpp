#include "impactlab/callgraph.hpp"
#include "impactlab/error.hpp"

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace impactlab;

namespace {

CallGraph parse_graph(const std::string& text) {
    std::istringstream in(text);
    return load_graph(in);
}

} // namespace

TEST(CallGraph, MultiplierShape) {
    const CallGraph g = fixture::multiplier();
    EXPECT_EQ(g.node_count(), 8u);
    EXPECT_EQ(g.edge_count(), 6u);
    EXPECT_FALSE(g.find_edge("op", "mul").has_value());
    EXPECT_TRUE(g.find_edge("pow", "mul").has_value());
}

TEST(CallGraph, BuilderRejectsDuplicateNode) {
    CallGraphBuilder b;
    b.add_node({"a", "a", NodeKind::Application});
    EXPECT_THROW(b.add_node({"a", "other", NodeKind::Test}), IntegrityError);
}

TEST(CallGraph, DuplicateEdgesCollapse) {
    CallGraphBuilder b;
    b.add_node({"f", "f", NodeKind::Application}).add_node({"g", "g", NodeKind::Application});
    b.add_edge({"f", "g", true}).add_edge({"f", "g", false}).add_edge({"f", "f", false});
    const CallGraph g = b.build();
    ASSERT_EQ(g.edge_count(), 2u);
    EXPECT_FALSE(g.edge(*g.find_edge("f", "g")).via_cha);
    EXPECT_TRUE(g.find_edge("f", "f").has_value());
}

TEST(CallGraph, DanglingEdgeNamesMissingNode) {
    CallGraphBuilder b;
    b.add_node({"a", "a", NodeKind::Application});
    b.add_edge({"a", "ghost"});
    try {
        b.build();
        FAIL() << "expected IntegrityError";
    } catch (const IntegrityError& e) {
        EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
    }
}

TEST(CallGraphIo, MultiplierRoundTrip) {
    const CallGraph g = fixture::multiplier();
    const std::string text = save_graph(g);
    EXPECT_EQ(parse_graph(text), g);
    EXPECT_EQ(save_graph(parse_graph(text)), text);
}

TEST(CallGraphIo, CanonicalOrderAndHeader) {
    const std::string text = save_graph(fixture::multiplier());
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, R"({"format":"cig-graph","version":1})");
    std::getline(in, line);
    EXPECT_EQ(line, R"({"node":{"id":"fac","name":"fac","kind":"app"}})");
    std::string last;
    while (std::getline(in, line)) {
        last = line;
    }
    EXPECT_EQ(last, R"({"edge":{"caller":"test_pow","callee":"pow","via_cha":false}})");
}

TEST(CallGraphIo, EmptyStreamIsEmptyGraph) {
    const CallGraph g = parse_graph("");
    EXPECT_EQ(g.node_count(), 0u);
    EXPECT_EQ(g.edge_count(), 0u);
}

TEST(CallGraphIo, EmptyGraphSavesHeaderOnly) {
    EXPECT_EQ(save_graph(CallGraph{}), "{\"format\":\"cig-graph\",\"version\":1}\n");
    EXPECT_EQ(parse_graph(save_graph(CallGraph{})), CallGraph{});
}

TEST(CallGraphIo, ViaChaPreserved) {
    CallGraphBuilder b;
    b.add_node({"f", "f", NodeKind::Application}).add_node({"g", "g", NodeKind::Application});
    b.add_edge({"f", "g", true});
    const CallGraph g = parse_graph(save_graph(b.build()));
    EXPECT_TRUE(g.edge(0).via_cha);
}

TEST(CallGraphIo, UnknownEdgeEndpointIsIntegrityError) {
    const std::string text = "{\"format\":\"cig-graph\",\"version\":1}\n"
                             "{\"node\":{\"id\":\"a\",\"name\":\"a\",\"kind\":\"app\"}}\n"
                             "{\"edge\":{\"caller\":\"a\",\"callee\":\"ghost\",\"via_cha\":false}}\n";
    try {
        parse_graph(text);
        FAIL() << "expected IntegrityError";
    } catch (const IntegrityError& e) {
        EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
    }
}

TEST(CallGraphIo, MalformedLineReportsLineNumber) {
    const std::string text = "{\"format\":\"cig-graph\",\"version\":1}\n"
                             "{\"node\":{\"id\":\"a\",\"name\":\"a\",\"kind\":\"app\"}}\n"
                             "{not json\n";
    try {
        parse_graph(text);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(parse_graph("{\"format\":\"other\",\"version\":1}\n"), ParseError);
    EXPECT_THROW(parse_graph("{\"format\":\"cig-graph\",\"version\":1}\n"
                             "{\"node\":{\"id\":\"a\",\"name\":\"a\",\"kind\":\"lib\"}}\n"),
                 ParseError);
}

TEST(CallGraphIo, RandomRoundTrips) {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const CallGraph g = gen::random_graph(rng, {.nodes = 9, .cha_edges = true});
        EXPECT_EQ(parse_graph(save_graph(g)), g);
    }
}

TEST(CallGraphIo, HashTracksContent) {
    const CallGraph a = fixture::multiplier();
    EXPECT_EQ(graph_hash(a), graph_hash(fixture::multiplier()));
    EXPECT_EQ(graph_hash(a).size(), 64u);
    EXPECT_NE(graph_hash(a), graph_hash(strip_cha(CallGraph{})));
}

TEST(TransitiveImpact, Multiplier) {
    const CallGraph g = fixture::multiplier();
    EXPECT_EQ(transitive_impact_set(g, "mul"), (std::set<NodeId>{"test_mul", "test_pow", "test_fac"}));
    EXPECT_EQ(transitive_impact_set(g, "op"), (std::set<NodeId>{"test_op"}));
    EXPECT_EQ(transitive_impact_set(g, "test_mul"), (std::set<NodeId>{"test_mul"}));
    EXPECT_THROW(transitive_impact_set(g, "nope"), InvalidArgument);
}

TEST(TransitiveImpact, MatchesClosureOracle) {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const CallGraph g = gen::random_graph(rng, {.nodes = 10, .edge_prob = 0.2});
        for (const auto& n : g.nodes()) {
            std::set<NodeId> expected = oracle::closure_tests(g, n.id);
            if (n.kind == NodeKind::Test) {
                expected.insert(n.id);
            }
            EXPECT_EQ(transitive_impact_set(g, n.id), expected);
        }
    }
}

TEST(TransitiveImpact, MonotoneInEdges) {
    Rng rng(6);
    for (int i = 0; i < 50; ++i) {
        const CallGraph g = gen::random_graph(rng, {.nodes = 9, .edge_prob = 0.2});
        CallGraphBuilder more;
        for (const auto& n : g.nodes()) {
            more.add_node(n);
        }
        for (const auto& e : g.edges()) {
            more.add_edge(e);
        }
        const auto& nodes = g.nodes();
        const auto& from = nodes[rng.uniform_index(nodes.size())];
        const auto& to = nodes[rng.uniform_index(nodes.size())];
        if (to.kind == NodeKind::Application) {
            more.add_edge({from.id, to.id});
        }
        const CallGraph bigger = more.build();
        for (const auto& n : nodes) {
            const auto small = transitive_impact_set(g, n.id);
            const auto large = transitive_impact_set(bigger, n.id);
            EXPECT_TRUE(std::includes(large.begin(), large.end(), small.begin(), small.end()));
        }
    }
}

TEST(SimplePaths, Multiplier) {
    const CallGraph g = fixture::multiplier();
    const PathSet pow = simple_paths(g, "mul", "test_pow", 100);
    ASSERT_EQ(pow.paths.size(), 1u);
    EXPECT_EQ(pow.paths[0], (std::vector<NodeId>{"mul", "pow", "test_pow"}));
    EXPECT_FALSE(pow.truncated);
    EXPECT_TRUE(simple_paths(g, "mul", "test_op", 100).paths.empty());
}

TEST(SimplePaths, Diamond) {
    CallGraphBuilder b;
    for (const char* a : {"a", "b", "c"}) {
        b.add_node({a, a, NodeKind::Application});
    }
    b.add_node({"t", "t", NodeKind::Test});
    b.add_edge({"a", "c"}).add_edge({"b", "c"}).add_edge({"t", "a"}).add_edge({"t", "b"});
    const PathSet ps = simple_paths(b.build(), "c", "t", 100);
    ASSERT_EQ(ps.paths.size(), 2u);
    EXPECT_EQ(ps.paths[0], (std::vector<NodeId>{"c", "a", "t"}));
    EXPECT_EQ(ps.paths[1], (std::vector<NodeId>{"c", "b", "t"}));
}

TEST(SimplePaths, CapTruncates) {
    CallGraphBuilder b;
    for (const char* a : {"a", "b", "c"}) {
        b.add_node({a, a, NodeKind::Application});
    }
    b.add_node({"t", "t", NodeKind::Test});
    b.add_edge({"a", "c"}).add_edge({"b", "c"}).add_edge({"t", "a"}).add_edge({"t", "b"});
    const PathSet ps = simple_paths(b.build(), "c", "t", 1);
    EXPECT_EQ(ps.paths.size(), 1u);
    EXPECT_TRUE(ps.truncated);
    EXPECT_THROW(simple_paths(b.build(), "c", "t", 0), InvalidArgument);
    EXPECT_THROW(simple_paths(b.build(), "zzz", "t", 1), InvalidArgument);
}

TEST(SimplePaths, SelfLoopNeverTraversed) {
    CallGraphBuilder b;
    b.add_node({"f", "f", NodeKind::Application}).add_node({"test_f", "test_f", NodeKind::Test});
    b.add_edge({"f", "f"}).add_edge({"test_f", "f"});
    const PathSet ps = simple_paths(b.build(), "f", "test_f");
    ASSERT_EQ(ps.paths.size(), 1u);
    EXPECT_EQ(ps.paths[0], (std::vector<NodeId>{"f", "test_f"}));
}

TEST(SimplePaths, MatchesBruteForceOnSmallGraphs) {
    Rng rng(2024);
    for (int i = 0; i < 200; ++i) {
        const CallGraph g = gen::random_graph(rng, {.nodes = 2 + rng.uniform_index(7), .edge_prob = 0.35});
        for (const auto& m : g.nodes()) {
            if (m.kind == NodeKind::Test) {
                continue;
            }
            for (const auto& t : g.nodes()) {
                if (t.kind != NodeKind::Test) {
                    continue;
                }
                const PathSet ps = simple_paths(g, m.id, t.id, 1'000'000);
                const auto expected = oracle::all_simple_paths(g, m.id, t.id);
                EXPECT_FALSE(ps.truncated);
                EXPECT_TRUE(std::is_sorted(ps.paths.begin(), ps.paths.end()));
                EXPECT_EQ(std::set<std::vector<NodeId>>(ps.paths.begin(), ps.paths.end()), expected);
                EXPECT_EQ(ps.paths.size(), expected.size());
            }
        }
    }
}

TEST(StripCha, RemovesOnlyFlaggedEdges) {
    CallGraphBuilder b;
    for (const char* a : {"a", "b", "c", "d"}) {
        b.add_node({a, a, NodeKind::Application});
    }
    b.add_edge({"a", "b"}).add_edge({"b", "c"}).add_edge({"c", "d"}).add_edge({"a", "c"}).add_edge({"a", "d"});
    b.add_edge({"b", "d"}).add_edge({"d", "a", true}).add_edge({"c", "a", true});
    const CallGraph g = b.build();
    const CallGraph s = strip_cha(g);
    EXPECT_EQ(s.edge_count(), 6u);
    EXPECT_EQ(s.node_count(), g.node_count());
    EXPECT_EQ(strip_cha(fixture::multiplier()), fixture::multiplier());
}

TEST(StripCha, AllChaGraphBecomesEdgeless) {
    CallGraphBuilder b;
    b.add_node({"a", "a", NodeKind::Application}).add_node({"b", "b", NodeKind::Application});
    b.add_edge({"a", "b", true}).add_edge({"b", "a", true});
    const CallGraph s = strip_cha(b.build());
    EXPECT_EQ(s.edge_count(), 0u);
    EXPECT_EQ(s.node_count(), 2u);
}

TEST(StripCha, SubgraphAndImpactSubset) {
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        const CallGraph g = gen::random_graph(rng, {.nodes = 10, .edge_prob = 0.25, .cha_edges = true});
        const CallGraph s = strip_cha(g);
        for (const auto& e : s.edges()) {
            EXPECT_TRUE(g.find_edge(e.caller, e.callee).has_value());
            EXPECT_FALSE(e.via_cha);
        }
        for (const auto& n : g.nodes()) {
            const auto small = transitive_impact_set(s, n.id);
            const auto large = transitive_impact_set(g, n.id);
            EXPECT_TRUE(std::includes(large.begin(), large.end(), small.begin(), small.end()));
        }
    }
}
