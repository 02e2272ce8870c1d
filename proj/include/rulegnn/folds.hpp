#pragma once

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dataset.hpp"
#include "error.hpp"
#include "io.hpp"

namespace rulegnn {

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;

    friend bool operator==(const Fold&, const Fold&) = default;
};

/// Cross-validation splits. Fold f tests on part f, validates on part (f + 1) mod k and
/// trains on the remaining parts.
struct FoldSpec {
    std::vector<Fold> folds;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return folds.size(); }
    friend bool operator==(const FoldSpec&, const FoldSpec&) = default;
};

namespace detail {

inline FoldSpec folds_from_parts(std::vector<std::vector<std::size_t>> parts, std::uint64_t seed) {
    const std::size_t k = parts.size();
    for (auto& p : parts) std::sort(p.begin(), p.end());
    FoldSpec spec;
    spec.seed = seed;
    for (std::size_t f = 0; f < k; ++f) {
        Fold fold;
        fold.test = parts[f];
        fold.validation = parts[(f + 1) % k];
        for (std::size_t p = 0; p < k; ++p) {
            if (p == f || p == (f + 1) % k) continue;
            fold.train.insert(fold.train.end(), parts[p].begin(), parts[p].end());
        }
        std::sort(fold.train.begin(), fold.train.end());
        spec.folds.push_back(std::move(fold));
    }
    return spec;
}

} // namespace detail

/// Stratified, seeded k-fold split. Each class is shuffled and dealt round-robin into the
/// k parts, continuing the deal position across classes so part sizes differ by at most one.
inline FoldSpec make_folds(const GraphDataset& ds, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ArgumentError("fold count must be at least 2");
    ds.validate();
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(ds.num_classes));
    for (std::size_t i = 0; i < ds.size(); ++i) by_class[static_cast<std::size_t>(ds.class_labels[i])].push_back(i);
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (!by_class[c].empty() && by_class[c].size() < k) {
            throw ArgumentError("class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                                " members, fewer than the fold count " + std::to_string(k));
        }
    }
    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::size_t>> parts(k);
    std::size_t deal = 0;
    for (auto& members : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        for (auto idx : members) parts[deal++ % k].push_back(idx);
    }
    return detail::folds_from_parts(std::move(parts), seed);
}

/// Serializes folds as JSON: {"format": "rulegnn-folds", "version": 1, "seed": s,
/// "folds": [{"train": [...], "validation": [...], "test": [...]}, ...]}.
inline std::string folds_to_json(const FoldSpec& spec) {
    nlohmann::json j;
    j["format"] = "rulegnn-folds";
    j["version"] = 1;
    j["seed"] = spec.seed;
    j["folds"] = nlohmann::json::array();
    for (const auto& f : spec.folds) {
        j["folds"].push_back({{"train", f.train}, {"validation", f.validation}, {"test", f.test}});
    }
    return j.dump(1) + "\n";
}

inline void save_folds(const std::filesystem::path& path, const FoldSpec& spec) {
    io::write_file_atomic(path, folds_to_json(spec));
}

/// Loads a fold file. Folds that list only "test" get validation and train derived by the
/// rotation convention of `make_folds`.
inline FoldSpec load_folds(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(io::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string(), 0, e.what());
    }
    if (!j.contains("folds") || !j["folds"].is_array() || j["folds"].size() < 2) {
        throw DataError(path.string() + ": expected a 'folds' array with at least two entries");
    }
    const auto seed = j.value("seed", std::uint64_t{0});
    const auto& arr = j["folds"];
    const bool full = std::all_of(arr.begin(), arr.end(),
                                  [](const auto& f) { return f.contains("train") && f.contains("validation"); });
    try {
        if (!full) {
            std::vector<std::vector<std::size_t>> parts;
            for (const auto& f : arr) parts.push_back(f.at("test").template get<std::vector<std::size_t>>());
            return detail::folds_from_parts(std::move(parts), seed);
        }
        FoldSpec spec;
        spec.seed = seed;
        for (const auto& f : arr) {
            spec.folds.push_back({f.at("train").template get<std::vector<std::size_t>>(),
                                  f.at("validation").template get<std::vector<std::size_t>>(),
                                  f.at("test").template get<std::vector<std::size_t>>()});
        }
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

/// Checks that each fold partitions [0, n) and the test parts partition [0, n).
inline void validate_folds(const FoldSpec& spec, std::size_t n) {
    std::vector<int> test_hits(n, 0);
    for (std::size_t f = 0; f < spec.size(); ++f) {
        std::vector<int> hits(n, 0);
        const auto& fold = spec.folds[f];
        for (const auto* part : {&fold.train, &fold.validation, &fold.test}) {
            for (auto i : *part) {
                if (i >= n) throw DataError("fold " + std::to_string(f) + " references sample " + std::to_string(i));
                ++hits[i];
            }
        }
        for (auto i : fold.test) ++test_hits[i];
        if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; })) {
            throw DataError("fold " + std::to_string(f) + " does not partition the dataset");
        }
    }
    if (std::any_of(test_hits.begin(), test_hits.end(), [](int h) { return h != 1; })) {
        throw DataError("test parts do not partition the dataset");
    }
}

} // namespace rulegnn
