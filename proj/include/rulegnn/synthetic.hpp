#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "isomorphism.hpp"

namespace rulegnn {

enum class SynthKind { long_rings, even_odd_rings, even_odd_rings_count, csl, snowflakes };

/// Parameters of one synthetic benchmark. `default_synth_spec` gives the standard sizes.
struct SynthSpec {
    SynthKind kind = SynthKind::long_rings;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    int ring_length = 0;
    std::vector<int> skips;
    int min_cycle = 3;
    int max_cycle = 12;
    std::size_t retry_budget = 1'000'000;
};

inline std::string dataset_name(SynthKind kind) {
    switch (kind) {
    case SynthKind::long_rings: return "LongRings";
    case SynthKind::even_odd_rings: return "EvenOddRings";
    case SynthKind::even_odd_rings_count: return "EvenOddRingsCount";
    case SynthKind::csl: return "CSL";
    case SynthKind::snowflakes: return "Snowflakes";
    }
    return "?";
}

/// Accepts the dataset name in any case, with or without separators ("even-odd-rings").
inline SynthKind parse_synth_kind(std::string text) {
    std::string key;
    for (char c : text) {
        if (c != '-' && c != '_') key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    for (auto kind : {SynthKind::long_rings, SynthKind::even_odd_rings, SynthKind::even_odd_rings_count,
                      SynthKind::csl, SynthKind::snowflakes}) {
        std::string name;
        for (char c : dataset_name(kind)) name += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (name == key) return kind;
    }
    throw ArgumentError("unknown synthetic dataset '" + text + "'");
}

inline SynthSpec default_synth_spec(SynthKind kind, std::uint64_t seed = 0) {
    SynthSpec s;
    s.kind = kind;
    s.seed = seed;
    switch (kind) {
    case SynthKind::long_rings:
        s.count = 1200;
        s.ring_length = 100;
        break;
    case SynthKind::even_odd_rings:
    case SynthKind::even_odd_rings_count:
        s.count = 1200;
        s.ring_length = 16;
        break;
    case SynthKind::csl:
        s.count = 150;
        s.ring_length = 41;
        s.skips = {2, 3, 4, 5, 6, 9, 11, 12, 13, 16};
        break;
    case SynthKind::snowflakes: s.count = 1000; break;
    }
    return s;
}

namespace detail {

inline std::vector<Edge> ring_edges(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % n));
    return edges;
}

inline LabeledGraph shuffled(const LabeledGraph& g, std::mt19937_64& rng) {
    auto perm = identity_permutation(g.node_count());
    std::shuffle(perm.begin(), perm.end(), rng);
    return permute_graph(g, perm);
}

/// Packs per-class graph lists into a dataset and shuffles the sample order.
inline GraphDataset assemble(SynthKind kind, std::vector<std::pair<LabeledGraph, int>> samples, int num_classes,
                             std::mt19937_64& rng) {
    std::shuffle(samples.begin(), samples.end(), rng);
    GraphDataset ds;
    ds.name = dataset_name(kind);
    ds.num_classes = num_classes;
    for (auto& [g, c] : samples) {
        ds.graphs.push_back(std::move(g));
        ds.class_labels.push_back(c);
    }
    return ds;
}

inline void require_divisible(const SynthSpec& s, std::size_t classes) {
    if (s.count == 0 || s.count % classes != 0) {
        throw SpecError(dataset_name(s.kind) + ": count " + std::to_string(s.count) + " is not divisible by " +
                        std::to_string(classes) + " classes");
    }
}

} // namespace detail

/// Rings with four marked nodes at quarter offsets. Class c means the node labelled 1 sits
/// opposite the node labelled c + 2.
inline GraphDataset gen_long_rings(const SynthSpec& spec) {
    const int n = spec.ring_length;
    if (n < 4 || n % 4 != 0) throw SpecError("LongRings ring length must be a positive multiple of 4");
    detail::require_divisible(spec, 3);
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> pos(0, n - 1);
    std::vector<std::pair<LabeledGraph, int>> samples;
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < spec.count / 3; ++i) {
            std::vector<int> labels(static_cast<std::size_t>(n), 0);
            const int p = pos(rng);
            std::array<int, 2> others{};
            for (int l = 2, k = 0; l <= 4; ++l) {
                if (l != c + 2) others[static_cast<std::size_t>(k++)] = l;
            }
            if (rng() & 1) std::swap(others[0], others[1]);
            labels[static_cast<std::size_t>(p)] = 1;
            labels[static_cast<std::size_t>((p + n / 2) % n)] = c + 2;
            labels[static_cast<std::size_t>((p + n / 4) % n)] = others[0];
            labels[static_cast<std::size_t>((p + 3 * n / 4) % n)] = others[1];
            LabeledGraph g(static_cast<std::size_t>(n), detail::ring_edges(n), std::move(labels));
            samples.emplace_back(detail::shuffled(g, rng), c);
        }
    }
    return detail::assemble(spec.kind, std::move(samples), 3, rng);
}

/// Class of a ring labelling (labels listed in ring order) for the two EvenOddRings variants.
/// Returns -1 for a count-variant tie, which the generator resamples.
inline int even_odd_class(const std::vector<int>& ring_labels, SynthKind kind) {
    const int n = static_cast<int>(ring_labels.size());
    const auto at = [&](int i) { return ring_labels[static_cast<std::size_t>(((i % n) + n) % n)]; };
    if (kind == SynthKind::even_odd_rings) {
        int p0 = 0;
        while (at(p0) != 0) ++p0;
        const int x = at(p0 + n / 2);
        const int yz = at(p0 + n / 4) + at(p0 - n / 4);
        return 2 * (x % 2) + (yz % 2);
    }
    int even = 0;
    for (int i = 0; i < n / 2; ++i) even += ((at(i) + at(i + n / 2)) % 2 == 0) ? 1 : 0;
    const int odd = n / 2 - even;
    if (even == odd) return -1;
    return even > odd ? 0 : 1;
}

/// 16-rings labelled by a random permutation of 0..15, drawn until every class is full.
inline GraphDataset gen_even_odd_rings(const SynthSpec& spec) {
    const int n = spec.ring_length;
    if (n != 16) throw SpecError("EvenOddRings requires ring length 16");
    const bool four = spec.kind == SynthKind::even_odd_rings;
    if (!four && spec.kind != SynthKind::even_odd_rings_count) throw SpecError("not an EvenOddRings spec");
    const int classes = four ? 4 : 2;
    detail::require_divisible(spec, static_cast<std::size_t>(classes));
    const std::size_t per_class = spec.count / static_cast<std::size_t>(classes);

    std::mt19937_64 rng(spec.seed);
    std::vector<std::size_t> filled(static_cast<std::size_t>(classes), 0);
    std::vector<std::pair<LabeledGraph, int>> samples;
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (std::size_t attempt = 0; samples.size() < spec.count; ++attempt) {
        if (attempt >= spec.retry_budget) {
            throw SpecError(dataset_name(spec.kind) + ": class balance not reached within the retry budget");
        }
        std::iota(labels.begin(), labels.end(), 0);
        std::shuffle(labels.begin(), labels.end(), rng);
        const int c = even_odd_class(labels, spec.kind);
        if (c < 0 || filled[static_cast<std::size_t>(c)] == per_class) continue;
        ++filled[static_cast<std::size_t>(c)];
        LabeledGraph g(static_cast<std::size_t>(n), detail::ring_edges(n), labels);
        samples.emplace_back(detail::shuffled(g, rng), c);
    }
    return detail::assemble(spec.kind, std::move(samples), classes, rng);
}

/// Circulant graph on n nodes with edges {i, i+1} and {i, i+skip}.
inline LabeledGraph circulant_skip_link(int n, int skip) {
    std::vector<Edge> edges = detail::ring_edges(n);
    for (int i = 0; i < n; ++i) edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>((i + skip) % n));
    return LabeledGraph::unlabeled(static_cast<std::size_t>(n), std::move(edges));
}

/// Rejects skip sets with degenerate or mutually isomorphic circulants: s must not be 0 or
/// +-1 mod n, 2s must not vanish mod n, and no pair may satisfy s' = +-s or s*s' = +-1 (mod n).
inline void validate_csl_skips(int n, const std::vector<int>& skips) {
    const auto mod = [n](long long x) { return static_cast<int>(((x % n) + n) % n); };
    for (int s : skips) {
        const int r = mod(s);
        if (r == 0 || r == 1 || r == n - 1 || mod(2LL * s) == 0) {
            throw SpecError("CSL skip " + std::to_string(s) + " is degenerate on " + std::to_string(n) + " nodes");
        }
    }
    for (std::size_t i = 0; i < skips.size(); ++i) {
        for (std::size_t j = i + 1; j < skips.size(); ++j) {
            const int a = mod(skips[i]);
            const int b = mod(skips[j]);
            const int prod = mod(static_cast<long long>(a) * b);
            if (a == b || a == mod(-b) || prod == 1 || prod == n - 1) {
                throw SpecError("CSL skips " + std::to_string(skips[i]) + " and " + std::to_string(skips[j]) +
                                " give isomorphic circulants");
            }
        }
    }
}

inline GraphDataset gen_csl(const SynthSpec& spec) {
    const int n = spec.ring_length;
    if (spec.skips.empty()) throw SpecError("CSL needs a skip set");
    validate_csl_skips(n, spec.skips);
    const auto classes = spec.skips.size();
    detail::require_divisible(spec, classes);
    std::mt19937_64 rng(spec.seed);
    std::vector<std::pair<LabeledGraph, int>> samples;
    for (std::size_t c = 0; c < classes; ++c) {
        const auto base = circulant_skip_link(n, spec.skips[c]);
        for (std::size_t i = 0; i < spec.count / classes; ++i) samples.emplace_back(detail::shuffled(base, rng), static_cast<int>(c));
    }
    return detail::assemble(spec.kind, std::move(samples), static_cast<int>(classes), rng);
}

/// A small graph glued to a host node through a bridge from `root`.
struct Attachment {
    LabeledGraph graph;
    NodeId root = 0;
};

/// Four connected cubic graphs on 8 nodes: the cube, the Wagner graph, two K4-minus-an-edge
/// joined into a ring, and an 8-cycle with chords 0-2, 1-5, 3-7, 4-6. Regular graphs of equal
/// degree and size are 1-WL-equivalent; the cycle structures make them pairwise non-isomorphic.
inline std::vector<Attachment> default_snowflake_family() {
    auto make = [](std::vector<Edge> edges) { return Attachment{LabeledGraph::unlabeled(8, std::move(edges)), 0}; };
    std::vector<Attachment> family;
    family.push_back(make({{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6}, {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}}));
    family.push_back(make({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 0}, {0, 4}, {1, 5}, {2, 6}, {3, 7}}));
    family.push_back(make({{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {4, 5}, {4, 6}, {5, 6}, {5, 7}, {6, 7}, {0, 4}, {3, 7}}));
    family.push_back(make({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 0}, {0, 2}, {1, 5}, {3, 7}, {4, 6}}));
    return family;
}

/// Checks that every member is connected, all members share node and edge counts, are pairwise
/// 1-WL-equivalent and pairwise non-isomorphic. Throws SpecError naming the offending pair.
inline void validate_attachment_family(const std::vector<Attachment>& family) {
    if (family.size() < 2) throw SpecError("attachment family needs at least two graphs");
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& g = family[i].graph;
        if (component_count(g) != 1) throw SpecError("attachment " + std::to_string(i) + " is not connected");
        if (family[i].root >= g.node_count()) throw SpecError("attachment " + std::to_string(i) + " root out of range");
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            const auto& h = family[j].graph;
            const auto pair = std::to_string(i) + " and " + std::to_string(j);
            if (!wl_equivalent(g, h)) throw SpecError("attachments " + pair + " are distinguishable by 1-WL");
            if (are_isomorphic(g, h)) throw SpecError("attachments " + pair + " are isomorphic");
        }
    }
}

/// One snowflake: a cycle of `ring_types.size()` nodes, attachment ring_types[i] bridged to
/// cycle node i, and cycle node `marked` labelled 1.
inline LabeledGraph build_snowflake(const std::vector<Attachment>& family, const std::vector<int>& ring_types, int marked) {
    const int c = static_cast<int>(ring_types.size());
    std::vector<Edge> edges = detail::ring_edges(c);
    std::size_t offset = static_cast<std::size_t>(c);
    for (int i = 0; i < c; ++i) {
        const auto& att = family[static_cast<std::size_t>(ring_types[static_cast<std::size_t>(i)])];
        for (const auto& [u, v] : att.graph.edges()) {
            edges.emplace_back(static_cast<NodeId>(offset + u), static_cast<NodeId>(offset + v));
        }
        edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(offset + att.root));
        offset += att.graph.node_count();
    }
    std::vector<int> labels(offset, 0);
    labels[static_cast<std::size_t>(marked)] = 1;
    return LabeledGraph(offset, std::move(edges), std::move(labels));
}

inline GraphDataset gen_snowflakes(const SynthSpec& spec, const std::vector<Attachment>& family) {
    validate_attachment_family(family);
    if (spec.min_cycle < 3 || spec.max_cycle < spec.min_cycle) throw SpecError("Snowflakes cycle range is invalid");
    const auto classes = family.size();
    detail::require_divisible(spec, classes);
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> cycle_len(spec.min_cycle, spec.max_cycle);
    std::uniform_int_distribution<int> any_type(0, static_cast<int>(classes) - 1);
    std::vector<std::pair<LabeledGraph, int>> samples;
    for (std::size_t cls = 0; cls < classes; ++cls) {
        for (std::size_t i = 0; i < spec.count / classes; ++i) {
            const int len = cycle_len(rng);
            std::vector<int> types(static_cast<std::size_t>(len));
            for (auto& t : types) t = any_type(rng);
            const int marked = std::uniform_int_distribution<int>(0, len - 1)(rng);
            types[static_cast<std::size_t>(marked)] = static_cast<int>(cls);
            samples.emplace_back(detail::shuffled(build_snowflake(family, types, marked), rng), static_cast<int>(cls));
        }
    }
    return detail::assemble(spec.kind, std::move(samples), static_cast<int>(classes), rng);
}

inline GraphDataset gen_snowflakes(const SynthSpec& spec) { return gen_snowflakes(spec, default_snowflake_family()); }

/// Dispatches on spec.kind.
inline GraphDataset generate(const SynthSpec& spec) {
    switch (spec.kind) {
    case SynthKind::long_rings: return gen_long_rings(spec);
    case SynthKind::even_odd_rings:
    case SynthKind::even_odd_rings_count: return gen_even_odd_rings(spec);
    case SynthKind::csl: return gen_csl(spec);
    case SynthKind::snowflakes: return gen_snowflakes(spec);
    }
    throw SpecError("unknown synthetic kind");
}

} // namespace rulegnn
