#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

#include "dataset.hpp"
#include "error.hpp"
#include "io.hpp"
#include "model.hpp"

namespace rulegnn {

// Cache files, all text, each starting with a format tag and version:
//   distances-<key>.txt  "rulegnn-distances 1 <graphs>", then per graph "<n>" and n rows of n ints
//   labeling-<key>.json  {"format":"rulegnn-labeling","version":1,"descriptor","alphabet_size","labels"}
//   layouts-<key>.txt    "rulegnn-layouts 1 <graphs>", then per graph "<m> <n> <N> <M> <nnz>",
//                        one line of m bias indices and nnz lines "<row> <col> <index>"
// <key> is the FNV-1a hash of the dataset fingerprint and the stage descriptor.
inline constexpr int kCacheVersion = 1;

/// Hash over the dataset contents; changes whenever any graph, label or class changes.
inline std::uint64_t dataset_fingerprint(const GraphDataset& ds) {
    std::ostringstream s;
    s << ds.name << '|' << ds.num_classes << '|' << ds.size();
    for (std::size_t g = 0; g < ds.size(); ++g) {
        const auto& graph = ds.graphs[g];
        s << '|' << ds.class_labels[g] << ':' << graph.node_count() << ':';
        for (int l : graph.labels()) s << l << ',';
        s << ':';
        for (const auto& [u, v] : graph.edges()) s << u << '-' << v << ',';
    }
    return io::fnv1a(s.str());
}

inline std::string cache_key(std::uint64_t fingerprint, const std::string& descriptor) {
    return io::hex64(io::fnv1a(io::hex64(fingerprint) + "|" + descriptor));
}

namespace detail {

inline void expect_header(std::istream& in, const std::string& tag, const std::filesystem::path& path) {
    std::string got;
    int version = 0;
    in >> got >> version;
    if (got != tag || version != kCacheVersion) throw DataError(path.string() + ": not a " + tag + " v1 file");
}

} // namespace detail

inline void save_distances(const std::filesystem::path& path, const std::vector<PropertyMap>& maps) {
    std::ostringstream out;
    out << "rulegnn-distances " << kCacheVersion << ' ' << maps.size() << '\n';
    for (const auto& m : maps) {
        out << m.size() << '\n';
        for (std::size_t i = 0; i < m.size(); ++i) {
            for (std::size_t j = 0; j < m.size(); ++j) out << (j ? " " : "") << m.at(i, j);
            out << '\n';
        }
    }
    io::write_file_atomic(path, out.str());
}

inline std::vector<PropertyMap> load_distances(const std::filesystem::path& path) {
    std::istringstream in(io::read_file(path));
    detail::expect_header(in, "rulegnn-distances", path);
    std::size_t count = 0;
    in >> count;
    std::vector<PropertyMap> maps;
    maps.reserve(count);
    for (std::size_t g = 0; g < count; ++g) {
        std::size_t n = 0;
        in >> n;
        std::vector<std::int32_t> values(n * n);
        for (auto& v : values) in >> v;
        if (!in) throw DataError(path.string() + ": truncated distance cache");
        maps.emplace_back(n, std::move(values));
    }
    return maps;
}

inline void save_labeling(const std::filesystem::path& path, const NodeLabeling& l) {
    nlohmann::json j = {{"format", "rulegnn-labeling"},
                        {"version", kCacheVersion},
                        {"descriptor", l.descriptor},
                        {"alphabet_size", l.alphabet_size},
                        {"labels", l.labels}};
    io::write_file_atomic(path, j.dump() + "\n");
}

inline NodeLabeling load_labeling(const std::filesystem::path& path) {
    try {
        const auto j = nlohmann::json::parse(io::read_file(path));
        if (j.at("format") != "rulegnn-labeling" || j.at("version") != kCacheVersion) {
            throw DataError(path.string() + ": not a rulegnn-labeling v1 file");
        }
        NodeLabeling l;
        l.descriptor = j.at("descriptor").get<std::string>();
        l.alphabet_size = j.at("alphabet_size").get<int>();
        l.labels = j.at("labels").get<std::vector<std::vector<int>>>();
        return l;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

inline void save_layouts(const std::filesystem::path& path, const std::vector<RuleLayout>& layouts) {
    std::ostringstream out;
    out << "rulegnn-layouts " << kCacheVersion << ' ' << layouts.size() << '\n';
    for (const auto& l : layouts) {
        out << l.out_dim() << ' ' << l.in_dim() << ' ' << l.weight_pool_size() << ' ' << l.bias_pool_size() << ' '
            << l.nonzeros() << '\n';
        for (std::size_t r = 0; r < l.out_dim(); ++r) out << (r ? " " : "") << l.bias_index()[r];
        out << '\n';
        for (const auto& e : l.weights()) out << e.row << ' ' << e.col << ' ' << e.index << '\n';
    }
    io::write_file_atomic(path, out.str());
}

inline std::vector<RuleLayout> load_layouts(const std::filesystem::path& path) {
    std::istringstream in(io::read_file(path));
    detail::expect_header(in, "rulegnn-layouts", path);
    std::size_t count = 0;
    in >> count;
    std::vector<RuleLayout> out;
    out.reserve(count);
    for (std::size_t g = 0; g < count; ++g) {
        std::size_t m = 0, n = 0, N = 0, M = 0, nnz = 0;
        in >> m >> n >> N >> M >> nnz;
        std::vector<std::uint32_t> bias(m);
        for (auto& b : bias) in >> b;
        std::vector<WeightEntry> entries(nnz);
        for (auto& e : entries) in >> e.row >> e.col >> e.index;
        if (!in) throw DataError(path.string() + ": truncated layout cache");
        out.emplace_back(m, n, N, M, std::move(entries), std::move(bias));
    }
    return out;
}

/// Wall-clock seconds per preprocessing stage and whether it was served from the cache.
struct StageReport {
    std::string stage;
    double seconds = 0;
    bool cache_hit = false;
};

/// Like prepare(), but each stage (distances, one labeling per layer, one layout set per layer)
/// is loaded from `cache_dir` when present and written there otherwise.
inline PreparedData prepare_cached(const GraphDataset& ds, const ModelSpec& spec, const std::filesystem::path& cache_dir,
                                   EnumerationBudget budget = {}, std::vector<StageReport>* report = nullptr) {
    spec.validate();
    const auto fp = dataset_fingerprint(ds);
    using clock = std::chrono::steady_clock;
    const auto stage = [&](const std::string& name, const std::filesystem::path& file, auto&& load, auto&& compute) {
        const auto t0 = clock::now();
        const bool hit = std::filesystem::exists(file);
        auto value = hit ? load(file) : compute();
        if (!hit) {
            std::filesystem::create_directories(cache_dir);
            if constexpr (std::is_same_v<std::decay_t<decltype(value)>, NodeLabeling>) {
                save_labeling(file, value);
            } else if constexpr (std::is_same_v<std::decay_t<decltype(value)>, std::vector<PropertyMap>>) {
                save_distances(file, value);
            } else {
                save_layouts(file, value);
            }
        }
        if (report) report->push_back({name, std::chrono::duration<double>(clock::now() - t0).count(), hit});
        return value;
    };

    PreparedData out;
    out.num_classes = static_cast<std::size_t>(ds.num_classes);
    if (needs_distances(spec)) {
        out.distances = stage("distances", cache_dir / ("distances-" + cache_key(fp, "distances") + ".txt"),
                              load_distances, [&] {
                                  std::vector<PropertyMap> maps;
                                  maps.reserve(ds.size());
                                  for (const auto& g : ds.graphs) maps.push_back(all_pairs_distances(g));
                                  return maps;
                              });
    }
    out.layouts.assign(ds.size(), {});
    for (std::size_t l = 0; l < spec.layers.size(); ++l) {
        const auto& layer = spec.layers[l];
        const auto ldesc = layer.labeling.descriptor();
        out.labelings.push_back(stage("labeling " + ldesc, cache_dir / ("labeling-" + cache_key(fp, ldesc) + ".json"),
                                      load_labeling,
                                      [&] { return compute_labeling(ds.graphs, layer.labeling, budget); }));
        const auto& labeling = out.labelings.back();
        out.pools.push_back(pool_shape(layer, labeling, out.num_classes));
        auto desc = layer.descriptor();
        if (layer.rule == RuleKind::aggregation && layer.out_dim == 0) desc += "M=" + std::to_string(out.num_classes);
        auto layouts = stage("layouts layer " + std::to_string(l + 1), cache_dir / ("layouts-" + cache_key(fp, desc) + ".txt"),
                             load_layouts, [&] {
                                 std::vector<RuleLayout> per_graph;
                                 per_graph.reserve(ds.size());
                                 for (std::size_t g = 0; g < ds.size(); ++g) {
                                     per_graph.push_back(build_layer_layout(
                                         layer, ds.graphs[g], labeling.labels[g], labeling.alphabet_size,
                                         out.distances.empty() ? nullptr : &out.distances[g], out.num_classes));
                                 }
                                 return per_graph;
                             });
        if (layouts.size() != ds.size() || labeling.graph_count() != ds.size()) {
            throw DataError("cache entry for layer " + std::to_string(l + 1) + " does not match the dataset size");
        }
        for (std::size_t g = 0; g < ds.size(); ++g) out.layouts[g].push_back(std::move(layouts[g]));
    }
    return out;
}

} // namespace rulegnn
