#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "rulegnn/graph.hpp"

namespace testing_support {

using rulegnn::Edge;
using rulegnn::LabeledGraph;
using rulegnn::NodeId;

/// G(n, p) with labels drawn from [lo, hi].
inline LabeledGraph random_graph(std::mt19937_64& rng, std::size_t n, double p, int lo = 0, int hi = 0) {
    std::bernoulli_distribution edge(p);
    std::uniform_int_distribution<int> label(lo, hi);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (edge(rng)) edges.emplace_back(u, v);
        }
    }
    std::vector<int> labels(n);
    for (auto& l : labels) l = label(rng);
    return LabeledGraph(n, std::move(edges), std::move(labels));
}

inline std::vector<NodeId> random_permutation(std::mt19937_64& rng, std::size_t n) {
    auto perm = rulegnn::identity_permutation(n);
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

inline LabeledGraph cycle(std::size_t n, std::vector<int> labels = {}) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) edges.emplace_back(i, static_cast<NodeId>((i + 1) % n));
    if (labels.empty()) labels.assign(n, 0);
    return LabeledGraph(n, std::move(edges), std::move(labels));
}

inline LabeledGraph path(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return LabeledGraph::unlabeled(n, std::move(edges));
}

inline LabeledGraph complete(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    }
    return LabeledGraph::unlabeled(n, std::move(edges));
}

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("rulegnn-" + tag + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace testing_support
