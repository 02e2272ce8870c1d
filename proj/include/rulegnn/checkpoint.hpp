#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "io.hpp"
#include "model.hpp"
#include "training.hpp"

namespace rulegnn {

/// Trained parameters plus enough metadata to refuse a mismatched model.
/// JSON: {"format":"rulegnn-checkpoint","version":1,"model","spec_digest","dataset_fingerprint",
///        "fold","run","seed","best_epoch","val_acc","test_acc","pools":[[N,M],...],"parameters":[...]}
struct Checkpoint {
    std::string model;
    std::uint64_t dataset_fingerprint = 0;
    std::size_t fold = 0;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    std::size_t best_epoch = 0;
    double val_acc = 0;
    double test_acc = 0;
    std::vector<PoolShape> pools;
    std::vector<double> parameters;

    std::string spec_digest() const { return io::hex64(io::fnv1a(model)); }
};

inline Checkpoint make_checkpoint(const ModelSpec& spec, const PreparedData& data, std::uint64_t fingerprint,
                                  const RunResult& r) {
    return {spec.descriptor(), fingerprint, r.fold, r.run, r.seed, r.best_epoch, r.val_acc, r.test_acc, data.pools,
            r.parameters};
}

/// An all-zero checkpoint for `spec`; useful to inspect layouts before training.
inline Checkpoint zero_checkpoint(const ModelSpec& spec, const PreparedData& data, std::uint64_t fingerprint) {
    Checkpoint c;
    c.model = spec.descriptor();
    c.dataset_fingerprint = fingerprint;
    c.pools = data.pools;
    c.parameters.assign(RuleGnn(spec, data.pools).parameter_count(), 0.0);
    return c;
}

inline void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
    nlohmann::json pools = nlohmann::json::array();
    for (const auto& p : c.pools) pools.push_back({p.weights, p.biases});
    nlohmann::json j = {{"format", "rulegnn-checkpoint"},
                        {"version", 1},
                        {"model", c.model},
                        {"spec_digest", c.spec_digest()},
                        {"dataset_fingerprint", io::hex64(c.dataset_fingerprint)},
                        {"fold", c.fold},
                        {"run", c.run},
                        {"seed", c.seed},
                        {"best_epoch", c.best_epoch},
                        {"val_acc", c.val_acc},
                        {"test_acc", c.test_acc},
                        {"pools", pools},
                        {"parameters", c.parameters}};
    io::write_file_atomic(path, j.dump() + "\n");
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
    try {
        const auto j = nlohmann::json::parse(io::read_file(path));
        if (j.at("format") != "rulegnn-checkpoint" || j.at("version") != 1) {
            throw DataError(path.string() + ": not a rulegnn-checkpoint v1 file");
        }
        Checkpoint c;
        c.model = j.at("model").get<std::string>();
        c.dataset_fingerprint = std::stoull(j.at("dataset_fingerprint").get<std::string>(), nullptr, 16);
        c.fold = j.at("fold").get<std::size_t>();
        c.run = j.at("run").get<std::size_t>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.best_epoch = j.at("best_epoch").get<std::size_t>();
        c.val_acc = j.at("val_acc").get<double>();
        c.test_acc = j.at("test_acc").get<double>();
        for (const auto& p : j.at("pools")) c.pools.push_back({p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>()});
        c.parameters = j.at("parameters").get<std::vector<double>>();
        if (j.at("spec_digest") != c.spec_digest()) throw DataError(path.string() + ": spec digest mismatch");
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

/// Rebuilds the model; throws DataError if the checkpoint belongs to another model or dataset.
inline RuleGnn restore_model(const Checkpoint& c, const ModelSpec& spec, const PreparedData& data,
                             std::uint64_t fingerprint) {
    if (c.model != spec.descriptor()) throw DataError("checkpoint was trained for model " + c.model);
    if (c.dataset_fingerprint != fingerprint) throw DataError("checkpoint was trained on a different dataset");
    if (c.pools != data.pools) throw DataError("checkpoint pool sizes do not match the prepared data");
    RuleGnn model(spec, data.pools);
    if (c.parameters.size() != model.parameter_count()) throw DataError("checkpoint parameter count mismatch");
    model.parameters() = c.parameters;
    return model;
}

} // namespace rulegnn
