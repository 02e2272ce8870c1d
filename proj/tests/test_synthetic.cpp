#include <gtest/gtest.h>

#include <map>
#include <set>

#include "rulegnn/dataset.hpp"
#include "rulegnn/isomorphism.hpp"
#include "rulegnn/synthetic.hpp"
#include "support.hpp"

using namespace rulegnn;
using namespace testing_support;

namespace {

/// Node sequence of a cycle graph, starting at `start`, walking towards its smaller neighbour.
std::vector<NodeId> ring_order(const LabeledGraph& g, NodeId start) {
    std::vector<NodeId> order{start};
    NodeId prev = start;
    NodeId cur = g.neighbors(start)[0];
    while (cur != start) {
        order.push_back(cur);
        const auto nb = g.neighbors(cur);
        const NodeId next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
    }
    return order;
}

NodeId node_with_label(const LabeledGraph& g, int label) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.label(v) == label) return v;
    }
    throw std::runtime_error("label not present");
}

std::map<int, std::size_t> class_sizes(const GraphDataset& ds) {
    std::map<int, std::size_t> sizes;
    for (int c : ds.class_labels) ++sizes[c];
    return sizes;
}

/// The subgraph hanging off `root` once the bridge (anchor, root) is cut.
LabeledGraph hanging_component(const LabeledGraph& g, NodeId anchor, NodeId root) {
    std::vector<int> seen(g.node_count(), -1);
    std::vector<NodeId> nodes{root};
    seen[root] = 0;
    for (std::size_t h = 0; h < nodes.size(); ++h) {
        for (NodeId v : g.neighbors(nodes[h])) {
            if (v == anchor || seen[v] >= 0) continue;
            seen[v] = static_cast<int>(nodes.size());
            nodes.push_back(v);
        }
    }
    std::vector<Edge> edges;
    for (const auto& [u, v] : g.edges()) {
        if (seen[u] >= 0 && seen[v] >= 0) {
            edges.emplace_back(static_cast<NodeId>(seen[u]), static_cast<NodeId>(seen[v]));
        }
    }
    return LabeledGraph::unlabeled(nodes.size(), std::move(edges));
}

} // namespace

TEST(LongRings, DefaultSizesAndStructure) {
    const auto ds = generate(default_synth_spec(SynthKind::long_rings, 1));
    ASSERT_EQ(ds.size(), 1200u);
    EXPECT_EQ(ds.num_classes, 3);
    for (const auto& [c, n] : class_sizes(ds)) EXPECT_EQ(n, 400u) << "class " << c;
    const auto s = compute_stats(ds);
    EXPECT_EQ(s.nodes.min, 100u);
    EXPECT_EQ(s.nodes.max, 100u);
    EXPECT_EQ(s.edges.min, 100u);
    EXPECT_EQ(s.edges.max, 100u);
    EXPECT_EQ(s.diameter.min, 50);
    EXPECT_EQ(s.diameter.max, 50);
}

TEST(LongRings, ClassMatchesLabelOppositeToOne) {
    const auto ds = generate(default_synth_spec(SynthKind::long_rings, 2));
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& g = ds.graphs[i];
        const auto order = ring_order(g, node_with_label(g, 1));
        ASSERT_EQ(order.size(), 100u);
        // Marked labels sit exactly 25 or 50 steps apart; the one 50 steps away decides the class.
        const int opposite = g.label(order[50]);
        EXPECT_EQ(ds.class_labels[i], opposite - 2);
        std::set<int> quarter{g.label(order[25]), g.label(order[75])};
        std::set<int> expected{2, 3, 4};
        expected.erase(opposite);
        EXPECT_EQ(quarter, expected);
        std::size_t zeros = 0;
        for (int l : g.labels()) zeros += l == 0;
        EXPECT_EQ(zeros, 96u);
    }
}

TEST(LongRings, RejectsUnbalancedCount) {
    auto spec = default_synth_spec(SynthKind::long_rings);
    spec.count = 100;
    EXPECT_THROW(gen_long_rings(spec), SpecError);
}

TEST(EvenOddRings, FourClassesBalanced) {
    const auto ds = generate(default_synth_spec(SynthKind::even_odd_rings, 3));
    ASSERT_EQ(ds.size(), 1200u);
    for (const auto& [c, n] : class_sizes(ds)) EXPECT_EQ(n, 300u) << "class " << c;
    const auto s = compute_stats(ds);
    EXPECT_EQ(s.diameter.min, 8);
    EXPECT_EQ(s.diameter.max, 8);
    EXPECT_EQ(s.edges.max, 16u);
}

TEST(EvenOddRings, ClassRederivedFromGraph) {
    const auto ds = generate(default_synth_spec(SynthKind::even_odd_rings, 4));
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& g = ds.graphs[i];
        std::vector<int> sorted = g.labels();
        std::sort(sorted.begin(), sorted.end());
        for (int k = 0; k < 16; ++k) ASSERT_EQ(sorted[static_cast<std::size_t>(k)], k);
        const auto order = ring_order(g, node_with_label(g, 0));
        const int x = g.label(order[8]);
        const int yz = g.label(order[4]) + g.label(order[12]);
        EXPECT_EQ(ds.class_labels[i], 2 * (x % 2) + yz % 2);
    }
}

TEST(EvenOddRingsCount, TwoClassesBalancedAndRederived) {
    const auto ds = generate(default_synth_spec(SynthKind::even_odd_rings_count, 5));
    ASSERT_EQ(ds.size(), 1200u);
    for (const auto& [c, n] : class_sizes(ds)) EXPECT_EQ(n, 600u) << "class " << c;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& g = ds.graphs[i];
        const auto order = ring_order(g, 0);
        int even = 0;
        for (int k = 0; k < 8; ++k) even += (g.label(order[k]) + g.label(order[k + 8])) % 2 == 0;
        ASSERT_NE(even, 4) << "tie emitted";
        EXPECT_EQ(ds.class_labels[i], even > 4 ? 0 : 1);
    }
}

TEST(EvenOddRingsCount, IdentityLabelingByEnumeration) {
    // Labels 0..15 in ring order: antipodal sums i + (i + 8) = 2i + 8 are all even.
    std::vector<int> ring(16);
    std::iota(ring.begin(), ring.end(), 0);
    int even = 0;
    for (int i = 0; i < 8; ++i) even += (ring[i] + ring[i + 8]) % 2 == 0;
    EXPECT_EQ(even, 8);
    EXPECT_EQ(even_odd_class(ring, SynthKind::even_odd_rings_count), 0);
}

TEST(EvenOddRingsCount, TiesExistAndAreRecognised) {
    // Four mixed-parity pairs and four same-parity pairs: 4 even and 4 odd sums.
    const std::vector<std::pair<int, int>> pairs{{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 10}, {12, 14}, {9, 11}, {13, 15}};
    std::vector<int> ring(16);
    for (int i = 0; i < 8; ++i) {
        ring[static_cast<std::size_t>(i)] = pairs[static_cast<std::size_t>(i)].first;
        ring[static_cast<std::size_t>(i + 8)] = pairs[static_cast<std::size_t>(i)].second;
    }
    EXPECT_EQ(even_odd_class(ring, SynthKind::even_odd_rings_count), -1);
}

TEST(Csl, DefaultShape) {
    const auto ds = generate(default_synth_spec(SynthKind::csl, 6));
    ASSERT_EQ(ds.size(), 150u);
    EXPECT_EQ(ds.num_classes, 10);
    for (const auto& [c, n] : class_sizes(ds)) EXPECT_EQ(n, 15u);
    for (const auto& g : ds.graphs) {
        EXPECT_EQ(g.node_count(), 41u);
        EXPECT_EQ(g.edge_count(), 82u);
        for (NodeId v = 0; v < 41; ++v) ASSERT_EQ(g.degree(v), 4u);
    }
}

TEST(Csl, SmallestSkipPairIsNonIsomorphic) {
    EXPECT_FALSE(are_isomorphic(circulant_skip_link(41, 2), circulant_skip_link(41, 3)));
    EXPECT_TRUE(wl_equivalent(circulant_skip_link(41, 2), circulant_skip_link(41, 3)));
}

TEST(Csl, IsomorphismAgreesWithMultiplierEquivalence) {
    // 4 * 31 = 124 = 1 (mod 41), so multiplying node ids by 31 maps C(41, 4) onto C(41, 31).
    EXPECT_TRUE(are_isomorphic(circulant_skip_link(41, 4), circulant_skip_link(41, 31)));
    EXPECT_TRUE(are_isomorphic(circulant_skip_link(41, 5), circulant_skip_link(41, 36)));
}

TEST(Csl, GraphsAreIsomorphicToTheirClassRepresentative) {
    const auto spec = default_synth_spec(SynthKind::csl, 7);
    const auto ds = generate(spec);
    for (std::size_t i = 0; i < ds.size(); i += 7) {
        const auto c = static_cast<std::size_t>(ds.class_labels[i]);
        EXPECT_TRUE(are_isomorphic(ds.graphs[i], circulant_skip_link(41, spec.skips[c])));
        const auto other = spec.skips[(c + 1) % spec.skips.size()];
        EXPECT_FALSE(are_isomorphic(ds.graphs[i], circulant_skip_link(41, other)));
    }
}

TEST(Csl, RejectsEquivalentSkips) {
    EXPECT_THROW(validate_csl_skips(41, {2, 39}), SpecError);
    EXPECT_THROW(validate_csl_skips(41, {4, 31}), SpecError);
    EXPECT_THROW(validate_csl_skips(41, {1, 3}), SpecError);
    EXPECT_NO_THROW(validate_csl_skips(41, default_synth_spec(SynthKind::csl).skips));
}

TEST(Snowflakes, AttachmentFamilyIsWlEquivalentButNotIsomorphic) {
    const auto family = default_snowflake_family();
    ASSERT_EQ(family.size(), 4u);
    for (std::size_t i = 0; i < family.size(); ++i) {
        EXPECT_EQ(component_count(family[i].graph), 1u);
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            EXPECT_TRUE(wl_equivalent(family[i].graph, family[j].graph)) << i << " vs " << j;
            EXPECT_FALSE(are_isomorphic(family[i].graph, family[j].graph)) << i << " vs " << j;
        }
    }
    EXPECT_NO_THROW(validate_attachment_family(family));
}

TEST(Snowflakes, FamilyValidationRejectsBadFamilies) {
    auto family = default_snowflake_family();
    auto dup = family;
    dup[1] = dup[0];
    EXPECT_THROW(validate_attachment_family(dup), SpecError);
    auto wl_distinct = family;
    wl_distinct[2] = {cycle(8), 0};
    EXPECT_THROW(validate_attachment_family(wl_distinct), SpecError);
}

TEST(Snowflakes, DefaultShapeAndRederivedClasses) {
    const auto ds = generate(default_synth_spec(SynthKind::snowflakes, 8));
    ASSERT_EQ(ds.size(), 1000u);
    EXPECT_EQ(ds.num_classes, 4);
    for (const auto& [c, n] : class_sizes(ds)) EXPECT_EQ(n, 250u);
    const auto family = default_snowflake_family();
    for (std::size_t i = 0; i < ds.size(); i += 5) {
        const auto& g = ds.graphs[i];
        ASSERT_EQ(g.node_count() % 9, 0u);
        const auto c = g.node_count() / 9;
        EXPECT_GE(c, 3u);
        EXPECT_LE(c, 12u);
        EXPECT_EQ(g.edge_count(), 14 * c);
        std::size_t ones = 0;
        for (int l : g.labels()) ones += l == 1;
        ASSERT_EQ(ones, 1u);
        const NodeId marked = node_with_label(g, 1);
        int derived = -1;
        for (NodeId nb : g.neighbors(marked)) {
            const auto part = hanging_component(g, marked, nb);
            if (part.node_count() != 8) continue;
            for (std::size_t f = 0; f < family.size(); ++f) {
                if (are_isomorphic(part, family[f].graph)) derived = static_cast<int>(f);
            }
        }
        EXPECT_EQ(derived, ds.class_labels[i]) << "graph " << i;
    }
}

TEST(Generators, DeterministicUnderSeed) {
    for (auto kind : {SynthKind::long_rings, SynthKind::even_odd_rings, SynthKind::even_odd_rings_count, SynthKind::csl,
                      SynthKind::snowflakes}) {
        auto spec = default_synth_spec(kind, 99);
        spec.count = kind == SynthKind::csl ? 30 : 60;
        EXPECT_EQ(generate(spec), generate(spec)) << dataset_name(kind);
        auto other = spec;
        other.seed = 100;
        EXPECT_NE(generate(spec), generate(other)) << dataset_name(kind);
    }
}

TEST(Generators, ParseKindAcceptsSpellings) {
    EXPECT_EQ(parse_synth_kind("evenoddringscount"), SynthKind::even_odd_rings_count);
    EXPECT_EQ(parse_synth_kind("Even-Odd-Rings"), SynthKind::even_odd_rings);
    EXPECT_EQ(parse_synth_kind("CSL"), SynthKind::csl);
    EXPECT_THROW(parse_synth_kind("rings"), ArgumentError);
}
