#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "io.hpp"

namespace rulegnn {

/// A graph classification corpus. Class labels are remapped to [0, num_classes).
struct GraphDataset {
    std::string name;
    std::vector<LabeledGraph> graphs;
    std::vector<int> class_labels;
    int num_classes = 0;

    std::size_t size() const noexcept { return graphs.size(); }

    /// Throws DataError when the class label invariants do not hold.
    void validate() const {
        if (class_labels.size() != graphs.size()) {
            throw DataError(name + ": " + std::to_string(class_labels.size()) + " class labels for " +
                            std::to_string(graphs.size()) + " graphs");
        }
        if (num_classes <= 0) throw DataError(name + ": num_classes must be positive");
        for (int c : class_labels) {
            if (c < 0 || c >= num_classes) throw DataError(name + ": class label out of range");
        }
    }

    friend bool operator==(const GraphDataset&, const GraphDataset&) = default;
};

namespace detail {

inline std::vector<long long> parse_ints(std::string_view line, const std::string& file, std::size_t lineno) {
    std::vector<long long> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == ',' || line[pos] == '\r')) ++pos;
        if (pos >= line.size()) break;
        long long value = 0;
        auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), value);
        if (ec != std::errc() || ptr == line.data() + pos) {
            throw ParseError(file, lineno, "expected an integer, got '" + std::string(line.substr(pos)) + "'");
        }
        pos = static_cast<std::size_t>(ptr - line.data());
        if (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != ',' && line[pos] != '\r') {
            throw ParseError(file, lineno, "unexpected character '" + std::string(1, line[pos]) + "'");
        }
        out.push_back(value);
    }
    return out;
}

/// Reads one integer per non-empty line.
inline std::vector<long long> read_int_column(const std::filesystem::path& path) {
    const std::string text = io::read_file(path);
    const std::string file = path.filename().string();
    std::vector<long long> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (io::trim(line).empty()) continue;
        auto values = parse_ints(line, file, lineno);
        if (values.size() != 1) throw ParseError(file, lineno, "expected exactly one integer");
        out.push_back(values.front());
    }
    return out;
}

} // namespace detail

/// Reads `<name>_A.txt`, `<name>_graph_indicator.txt`, `<name>_graph_labels.txt` and the
/// optional `<name>_node_labels.txt` from `directory`.
///
/// Node ids in the files are 1-based and global; each graph gets 0-based local ids in the
/// order its nodes appear. Self-loops are dropped, duplicate and reversed pairs collapse.
inline GraphDataset parse_tud_dataset(const std::filesystem::path& directory, const std::string& name) {
    const auto file = [&](const char* suffix) { return directory / (name + suffix); };
    for (const char* required : {"_A.txt", "_graph_indicator.txt", "_graph_labels.txt"}) {
        if (!std::filesystem::exists(file(required))) {
            throw DataError("missing dataset file " + file(required).string());
        }
    }

    const auto indicator = detail::read_int_column(file("_graph_indicator.txt"));
    const auto raw_classes = detail::read_int_column(file("_graph_labels.txt"));
    const std::size_t total_nodes = indicator.size();
    const std::size_t graph_count = raw_classes.size();

    std::vector<long long> node_labels(total_nodes, 0);
    if (std::filesystem::exists(file("_node_labels.txt"))) {
        node_labels = detail::read_int_column(file("_node_labels.txt"));
        if (node_labels.size() != total_nodes) {
            throw DataError(name + "_node_labels.txt has " + std::to_string(node_labels.size()) +
                            " entries, expected " + std::to_string(total_nodes));
        }
    }

    std::vector<std::size_t> graph_of(total_nodes);
    std::vector<NodeId> local_id(total_nodes);
    std::vector<std::vector<int>> labels(graph_count);
    for (std::size_t v = 0; v < total_nodes; ++v) {
        const long long gid = indicator[v];
        if (gid < 1 || static_cast<std::size_t>(gid) > graph_count) {
            throw ParseError(name + "_graph_indicator.txt", v + 1,
                             "graph id " + std::to_string(gid) + " outside [1, " + std::to_string(graph_count) + "]");
        }
        graph_of[v] = static_cast<std::size_t>(gid - 1);
        local_id[v] = static_cast<NodeId>(labels[graph_of[v]].size());
        labels[graph_of[v]].push_back(static_cast<int>(node_labels[v]));
    }
    for (std::size_t g = 0; g < graph_count; ++g) {
        if (labels[g].empty()) throw DataError(name + ": graph " + std::to_string(g + 1) + " has no nodes");
    }

    std::vector<std::vector<Edge>> edges(graph_count);
    {
        const auto path = file("_A.txt");
        const std::string text = io::read_file(path);
        const std::string fname = path.filename().string();
        std::istringstream in(text);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (io::trim(line).empty()) continue;
            auto pair = detail::parse_ints(line, fname, lineno);
            if (pair.size() != 2) throw ParseError(fname, lineno, "expected two node ids");
            for (auto id : pair) {
                if (id < 1 || static_cast<std::size_t>(id) > total_nodes) {
                    throw ParseError(fname, lineno, "node id " + std::to_string(id) + " outside [1, " +
                                                        std::to_string(total_nodes) + "]");
                }
            }
            const auto u = static_cast<std::size_t>(pair[0] - 1);
            const auto v = static_cast<std::size_t>(pair[1] - 1);
            if (graph_of[u] != graph_of[v]) {
                throw DataError(fname + ":" + std::to_string(lineno) + ": edge crosses graphs " +
                                std::to_string(graph_of[u] + 1) + " and " + std::to_string(graph_of[v] + 1));
            }
            if (u == v) continue;
            edges[graph_of[u]].emplace_back(local_id[u], local_id[v]);
        }
    }

    std::set<long long> distinct(raw_classes.begin(), raw_classes.end());
    std::map<long long, int> class_index;
    for (long long c : distinct) class_index.emplace(c, static_cast<int>(class_index.size()));

    GraphDataset ds;
    ds.name = name;
    ds.num_classes = static_cast<int>(class_index.size());
    ds.graphs.reserve(graph_count);
    for (std::size_t g = 0; g < graph_count; ++g) {
        const std::size_t n = labels[g].size();
        ds.graphs.emplace_back(n, std::move(edges[g]), std::move(labels[g]));
        ds.class_labels.push_back(class_index.at(raw_classes[g]));
    }
    return ds;
}

/// Writes the dataset in the same four-file layout `parse_tud_dataset` reads.
/// Each undirected edge appears in both directions; class labels are written remapped.
inline void write_tud_dataset(const std::filesystem::path& directory, const GraphDataset& ds) {
    ds.validate();
    std::string adjacency, indicator, graph_labels, node_labels;
    std::size_t offset = 0;
    char buf[64];
    for (std::size_t g = 0; g < ds.size(); ++g) {
        const auto& graph = ds.graphs[g];
        for (NodeId v = 0; v < graph.node_count(); ++v) {
            indicator += std::to_string(g + 1) + "\n";
            node_labels += std::to_string(graph.label(v)) + "\n";
        }
        for (NodeId u = 0; u < graph.node_count(); ++u) {
            for (NodeId v : graph.neighbors(u)) {
                std::snprintf(buf, sizeof buf, "%zu, %zu\n", offset + u + 1, offset + v + 1);
                adjacency += buf;
            }
        }
        graph_labels += std::to_string(ds.class_labels[g]) + "\n";
        offset += graph.node_count();
    }
    io::write_file_atomic(directory / (ds.name + "_A.txt"), adjacency);
    io::write_file_atomic(directory / (ds.name + "_graph_indicator.txt"), indicator);
    io::write_file_atomic(directory / (ds.name + "_graph_labels.txt"), graph_labels);
    io::write_file_atomic(directory / (ds.name + "_node_labels.txt"), node_labels);
}

template <typename T>
struct MinAvgMax {
    T min{};
    double avg = 0.0;
    T max{};
};

/// Summary statistics in the layout of a dataset details table.
struct DatasetStats {
    std::size_t graphs = 0;
    MinAvgMax<std::size_t> nodes;
    MinAvgMax<std::size_t> edges;
    MinAvgMax<std::int32_t> diameter;
    std::size_t node_labels = 0;
    int classes = 0;
    std::vector<std::size_t> class_sizes;
};

inline DatasetStats compute_stats(const GraphDataset& ds) {
    DatasetStats s;
    s.graphs = ds.size();
    s.classes = ds.num_classes;
    s.class_sizes.assign(static_cast<std::size_t>(ds.num_classes), 0);
    if (ds.graphs.empty()) return s;
    std::set<int> labels;
    s.nodes.min = s.edges.min = SIZE_MAX;
    s.diameter.min = INT32_MAX;
    for (std::size_t g = 0; g < ds.size(); ++g) {
        const auto& graph = ds.graphs[g];
        const auto dia = diameter(all_pairs_distances(graph));
        s.nodes.min = std::min(s.nodes.min, graph.node_count());
        s.nodes.max = std::max(s.nodes.max, graph.node_count());
        s.nodes.avg += static_cast<double>(graph.node_count());
        s.edges.min = std::min(s.edges.min, graph.edge_count());
        s.edges.max = std::max(s.edges.max, graph.edge_count());
        s.edges.avg += static_cast<double>(graph.edge_count());
        s.diameter.min = std::min(s.diameter.min, dia);
        s.diameter.max = std::max(s.diameter.max, dia);
        s.diameter.avg += dia;
        labels.insert(graph.labels().begin(), graph.labels().end());
        ++s.class_sizes[static_cast<std::size_t>(ds.class_labels[g])];
    }
    const double n = static_cast<double>(ds.size());
    s.nodes.avg /= n;
    s.edges.avg /= n;
    s.diameter.avg /= n;
    s.node_labels = labels.size();
    return s;
}

inline std::string format_stats(const std::string& name, const DatasetStats& s) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "dataset %s\n"
                  "graphs %zu\n"
                  "nodes max %zu avg %.1f min %zu\n"
                  "edges max %zu avg %.1f min %zu\n"
                  "diameter max %d avg %.1f min %d\n"
                  "node_labels %zu\n"
                  "classes %d\n",
                  name.c_str(), s.graphs, s.nodes.max, s.nodes.avg, s.nodes.min, s.edges.max, s.edges.avg,
                  s.edges.min, s.diameter.max, s.diameter.avg, s.diameter.min, s.node_labels, s.classes);
    std::string out = buf;
    out += "class_sizes";
    for (auto c : s.class_sizes) out += " " + std::to_string(c);
    out += "\n";
    return out;
}

} // namespace rulegnn
