#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <set>

#include "rulegnn/dataset.hpp"
#include "rulegnn/folds.hpp"
#include "rulegnn/graph.hpp"
#include "support.hpp"

using namespace rulegnn;
using namespace testing_support;

namespace {

void write(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

/// Floyd-Warshall over an adjacency matrix; independent of the BFS under test.
std::vector<std::vector<int>> floyd_warshall(const LabeledGraph& g) {
    const int n = static_cast<int>(g.node_count());
    const int inf = 1 << 20;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (int i = 0; i < n; ++i) d[i][i] = 0;
    for (const auto& [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
        }
    }
    for (auto& row : d) {
        for (auto& x : row) {
            if (x >= inf) x = kUnreachable;
        }
    }
    return d;
}

GraphDataset toy_dataset(std::size_t n, int classes) {
    GraphDataset ds;
    ds.name = "toy";
    ds.num_classes = classes;
    for (std::size_t i = 0; i < n; ++i) {
        ds.graphs.push_back(path(2 + i % 3));
        ds.class_labels.push_back(static_cast<int>(i % static_cast<std::size_t>(classes)));
    }
    return ds;
}

} // namespace

TEST(LabeledGraph, RejectsSelfLoopsAndBadEndpoints) {
    EXPECT_THROW(LabeledGraph::unlabeled(3, {{1, 1}}), ArgumentError);
    EXPECT_THROW(LabeledGraph::unlabeled(3, {{0, 3}}), ArgumentError);
    EXPECT_THROW(LabeledGraph(3, {}, {0, 0}), ArgumentError);
}

TEST(LabeledGraph, CollapsesDuplicateAndReversedEdges) {
    const auto g = LabeledGraph::unlabeled(3, {{0, 1}, {1, 0}, {0, 1}, {2, 1}});
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_TRUE(g.has_edge(1, 2));
    EXPECT_TRUE(g.has_edge(2, 1));
    EXPECT_EQ(g.degree(1), 2u);
}

TEST(Distances, AntipodalNodesOnSixteenCycle) {
    const auto d = all_pairs_distances(cycle(16));
    for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(d.at(i, (i + 8) % 16), 8);
}

TEST(Distances, PathEndpoints) { EXPECT_EQ(all_pairs_distances(path(3)).at(0, 2), 2); }

TEST(Distances, DisconnectedPairIsUnreachable) {
    const auto d = all_pairs_distances(LabeledGraph::unlabeled(4, {{0, 1}, {2, 3}}));
    EXPECT_EQ(d.at(0, 2), kUnreachable);
    EXPECT_FALSE(d.reachable(1, 3));
    EXPECT_TRUE(d.reachable(0, 1));
}

TEST(Distances, MatchFloydWarshallAndSatisfyMetricAxioms) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const auto g = random_graph(rng, 1 + trial % 18, 0.15 + 0.01 * (trial % 20));
        const auto d = all_pairs_distances(g);
        const auto oracle = floyd_warshall(g);
        const auto n = g.node_count();
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_EQ(d.at(i, i), 0);
            for (std::size_t j = 0; j < n; ++j) {
                ASSERT_EQ(d.at(i, j), oracle[i][j]);
                EXPECT_EQ(d.at(i, j), d.at(j, i));
                EXPECT_EQ(d.at(i, j) == 1, g.has_edge(static_cast<NodeId>(i), static_cast<NodeId>(j)));
                for (std::size_t k = 0; k < n; ++k) {
                    if (d.reachable(i, k) && d.reachable(k, j)) { EXPECT_LE(d.at(i, j), d.at(i, k) + d.at(k, j)); }
                }
            }
        }
    }
}

TEST(Distances, InvariantUnderPermutation) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = random_graph(rng, 2 + trial % 20, 0.2, 0, 3);
        const auto perm = random_permutation(rng, g.node_count());
        const auto d = all_pairs_distances(g);
        const auto dp = all_pairs_distances(permute_graph(g, perm));
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            for (std::size_t j = 0; j < g.node_count(); ++j) ASSERT_EQ(dp.at(perm[i], perm[j]), d.at(i, j));
        }
    }
}

TEST(PermuteGraph, IdentityGivesEqualGraph) {
    std::mt19937_64 rng(2);
    const auto g = random_graph(rng, 9, 0.3, 0, 2);
    EXPECT_EQ(permute_graph(g, identity_permutation(9)), g);
}

TEST(PermuteGraph, TriangleStaysTriangle) {
    const auto tri = complete(3);
    const std::vector<NodeId> perm{2, 0, 1};
    EXPECT_EQ(permute_graph(tri, perm), tri);
}

TEST(PermuteGraph, SwappingPathEndpointsFixesCenter) {
    auto p3 = LabeledGraph(3, {{0, 1}, {1, 2}}, {5, 7, 9});
    const std::vector<NodeId> perm{2, 1, 0};
    const auto q = permute_graph(p3, perm);
    EXPECT_EQ(q.label(1), 7);
    EXPECT_EQ(q.degree(1), 2u);
    EXPECT_EQ(q.label(0), 9);
    EXPECT_EQ(q.edge_count(), 2u);
}

TEST(PermuteGraph, RejectsNonBijection) {
    const std::vector<NodeId> bad{0, 0, 1};
    EXPECT_THROW(permute_graph(path(3), bad), ArgumentError);
    const std::vector<NodeId> short_perm{0, 1};
    EXPECT_THROW(permute_graph(path(3), short_perm), ArgumentError);
}

class TudFixture : public ::testing::Test {
protected:
    TempDir dir{"tud"};

    void write_two_graphs(bool with_labels) {
        // Graph 1: triangle on nodes 1..3; graph 2: edge 4-5. Some pairs listed twice or reversed.
        write(dir.path() / "T_A.txt", "1, 2\n2, 1\n2, 3\n3, 1\n1, 3\n4, 5\n5, 4\n");
        write(dir.path() / "T_graph_indicator.txt", "1\n1\n1\n2\n2\n");
        write(dir.path() / "T_graph_labels.txt", "7\n-1\n");
        if (with_labels) write(dir.path() / "T_node_labels.txt", "3\n3\n4\n0\n1\n");
    }
};

TEST_F(TudFixture, TwoGraphFixture) {
    write_two_graphs(false);
    const auto ds = parse_tud_dataset(dir.path(), "T");
    ASSERT_EQ(ds.size(), 2u);
    EXPECT_EQ(ds.graphs[0].node_count(), 3u);
    EXPECT_EQ(ds.graphs[1].node_count(), 2u);
    EXPECT_EQ(ds.graphs[0].edge_count(), 3u);
    EXPECT_EQ(ds.graphs[1].edge_count(), 1u);
    EXPECT_EQ(ds.graphs[0].labels(), (std::vector<int>{0, 0, 0}));
    // Raw classes {7, -1} map to {1, 0} by sorted raw value.
    EXPECT_EQ(ds.class_labels, (std::vector<int>{1, 0}));
    EXPECT_EQ(ds.num_classes, 2);
}

TEST_F(TudFixture, NodeLabelsAreRead) {
    write_two_graphs(true);
    const auto ds = parse_tud_dataset(dir.path(), "T");
    EXPECT_EQ(ds.graphs[0].labels(), (std::vector<int>{3, 3, 4}));
    EXPECT_EQ(ds.graphs[1].labels(), (std::vector<int>{0, 1}));
}

TEST_F(TudFixture, RoundTripsThroughWriter) {
    write_two_graphs(true);
    const auto ds = parse_tud_dataset(dir.path(), "T");
    TempDir out{"tud-out"};
    write_tud_dataset(out.path(), ds);
    EXPECT_EQ(parse_tud_dataset(out.path(), "T"), ds);
}

TEST_F(TudFixture, RandomDatasetsRoundTrip) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        GraphDataset ds;
        ds.name = "R";
        ds.num_classes = 3;
        for (int g = 0; g < 12; ++g) {
            ds.graphs.push_back(random_graph(rng, 1 + (g * 7) % 11, 0.3, 0, 4));
            ds.class_labels.push_back(g % 3);
        }
        TempDir out{"tud-rand"};
        write_tud_dataset(out.path(), ds);
        EXPECT_EQ(parse_tud_dataset(out.path(), "R"), ds);
    }
}

TEST_F(TudFixture, MalformedLineNamesFileAndLine) {
    write_two_graphs(false);
    write(dir.path() / "T_A.txt", "1, 2\n2, x\n");
    try {
        parse_tud_dataset(dir.path(), "T");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.file(), "T_A.txt");
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST_F(TudFixture, EdgeAcrossGraphsIsStructuralError) {
    write_two_graphs(false);
    write(dir.path() / "T_A.txt", "1, 2\n3, 4\n");
    EXPECT_THROW(parse_tud_dataset(dir.path(), "T"), DataError);
}

TEST_F(TudFixture, MissingFileIsDataError) {
    EXPECT_THROW(parse_tud_dataset(dir.path(), "T"), DataError);
}

TEST(Tud, DhfrStatisticsWhenAvailable) {
    const char* root = std::getenv("RULEGNN_DATA");
    const auto dir = std::filesystem::path(root ? root : "data") / "DHFR";
    if (!std::filesystem::exists(dir / "DHFR_A.txt")) GTEST_SKIP() << "DHFR not found under " << dir;
    const auto ds = parse_tud_dataset(dir, "DHFR");
    const auto s = compute_stats(ds);
    EXPECT_EQ(s.graphs, 756u);
    EXPECT_NEAR(s.nodes.avg, 42.4, 0.05);
    EXPECT_EQ(s.node_labels, 9u);
    EXPECT_EQ(s.classes, 2);
}

TEST(Folds, HundredSamplesTenFolds) {
    const auto ds = toy_dataset(100, 2);
    const auto spec = make_folds(ds, 10, 3);
    ASSERT_EQ(spec.size(), 10u);
    for (const auto& f : spec.folds) EXPECT_EQ(f.test.size(), 10u);
    validate_folds(spec, 100);
}

TEST(Folds, RotationConvention) {
    const auto spec = make_folds(toy_dataset(30, 3), 5, 1);
    for (std::size_t f = 0; f < 5; ++f) EXPECT_EQ(spec.folds[f].validation, spec.folds[(f + 1) % 5].test);
}

TEST(Folds, DeterministicUnderSeed) {
    const auto ds = toy_dataset(57, 3);
    EXPECT_EQ(make_folds(ds, 10, 42), make_folds(ds, 10, 42));
    EXPECT_NE(make_folds(ds, 10, 42), make_folds(ds, 10, 43));
}

TEST(Folds, PartitionPropertyOverRandomShapes) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const int classes = 1 + trial % 4;
        const std::size_t k = 2 + static_cast<std::size_t>(trial % 9);
        const std::size_t n = k * static_cast<std::size_t>(classes) + rng() % 50;
        const auto ds = toy_dataset(n, classes);
        const auto spec = make_folds(ds, k, rng());
        EXPECT_NO_THROW(validate_folds(spec, n));
        // Stratification: per class, test-part sizes differ by at most one.
        for (int c = 0; c < classes; ++c) {
            std::size_t lo = SIZE_MAX, hi = 0;
            for (const auto& f : spec.folds) {
                std::size_t count = 0;
                for (auto i : f.test) count += ds.class_labels[i] == c;
                lo = std::min(lo, count);
                hi = std::max(hi, count);
            }
            EXPECT_LE(hi - lo, 1u);
        }
    }
}

TEST(Folds, TooSmallClassIsRejected) {
    auto ds = toy_dataset(20, 2);
    ds.class_labels[0] = 1;
    for (std::size_t i = 1; i < 20; ++i) ds.class_labels[i] = i < 5 ? 0 : 1;
    EXPECT_THROW(make_folds(ds, 10, 0), ArgumentError);
    EXPECT_THROW(make_folds(ds, 1, 0), ArgumentError);
}

TEST(Folds, FileRoundTripAndTestOnlyFiles) {
    TempDir dir{"folds"};
    const auto spec = make_folds(toy_dataset(40, 2), 4, 9);
    save_folds(dir.path() / "f.json", spec);
    EXPECT_EQ(load_folds(dir.path() / "f.json"), spec);

    write(dir.path() / "t.json", R"({"folds": [{"test": [0, 3]}, {"test": [1, 4]}, {"test": [2, 5]}]})");
    const auto derived = load_folds(dir.path() / "t.json");
    ASSERT_EQ(derived.size(), 3u);
    EXPECT_EQ(derived.folds[0].validation, (std::vector<std::size_t>{1, 4}));
    EXPECT_EQ(derived.folds[0].train, (std::vector<std::size_t>{2, 5}));
    validate_folds(derived, 6);
}

TEST(Folds, ValidateRejectsOverlap) {
    FoldSpec bad;
    bad.folds = {{{0}, {1}, {1}}, {{0}, {1}, {0}}};
    EXPECT_THROW(validate_folds(bad, 2), DataError);
}
