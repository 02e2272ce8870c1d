#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rulegnn/rulegnn.hpp"

namespace fs = std::filesystem;
using namespace rulegnn;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kRuntime = 3 };

struct ConfigArgs {
    std::string config;
    std::string preset;
    std::string output;
    std::string data_dir;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App* app) {
        auto* c = app->add_option("--config", config, "experiment config file");
        auto* p = app->add_option("--preset", preset, "packaged preset (see `rulegnn presets`)");
        c->excludes(p);
        app->add_option("--output", output, "output directory (overrides the config)");
        app->add_option("--data-dir", data_dir, "root for real datasets (default $RULEGNN_DATA or ./data)");
        app->add_option("--seed", seed, "training seed (overrides the config)");
    }

    ExperimentConfig load() const {
        if (config.empty() == preset.empty()) throw ArgumentError("give exactly one of --config or --preset");
        auto cfg = config.empty() ? preset_config(preset) : load_experiment_config(config);
        if (!output.empty()) cfg.output_dir = output;
        if (seed) cfg.train.seed = *seed;
        return cfg;
    }
};

EnumerationBudget budget_of(const ExperimentConfig& cfg) { return {cfg.pattern_budget}; }

std::string run_stem(std::size_t fold, std::size_t run) {
    return "fold" + std::to_string(fold) + "-run" + std::to_string(run);
}

std::string results_table(const std::string& name, const CvSummary& s) {
    std::ostringstream out;
    out << "dataset\taccuracy\tfolds\truns\n";
    out << name << '\t' << format_accuracy(s.mean, s.std) << '\t' << s.folds.size() << '\t'
        << (s.folds.empty() ? 0 : s.runs.size() / s.folds.size()) << "\n\nfold\ttest_accuracy\n";
    for (std::size_t i = 0; i < s.folds.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f", s.fold_accuracy[i] * 100.0);
        out << s.folds[i] << '\t' << buf << '\n';
    }
    return out.str();
}

int cmd_generate(const std::string& kind, std::uint64_t seed, std::size_t count, const std::string& out_dir) {
    auto spec = default_synth_spec(parse_synth_kind(kind), seed);
    if (count) spec.count = count;
    const auto ds = generate(spec);
    const fs::path dir = fs::path(out_dir) / ds.name;
    write_tud_dataset(dir, ds);
    const auto report = format_stats(ds.name, compute_stats(ds));
    io::write_file_atomic(dir / (ds.name + "_stats.txt"), report);
    std::cout << report << "written to " << dir.string() << "\n";
    return kOk;
}

int cmd_preprocess(const ConfigArgs& args) {
    const auto cfg = args.load();
    const auto t0 = std::chrono::steady_clock::now();
    const auto ds = load_dataset(cfg, args.data_dir);
    const double load_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::vector<StageReport> report;
    const auto data = prepare_cached(ds, cfg.model, cfg.output_dir / "cache", budget_of(cfg), &report);
    std::printf("%-40s %10s  %s\n", "stage", "seconds", "cache");
    std::printf("%-40s %10.3f  %s\n", "load dataset", load_s, "-");
    for (const auto& r : report) std::printf("%-40s %10.3f  %s\n", r.stage.c_str(), r.seconds, r.cache_hit ? "hit" : "miss");
    for (std::size_t l = 0; l < data.pools.size(); ++l) {
        std::printf("layer %zu: %zu labels, %zu weights + %zu biases\n", l + 1,
                    static_cast<std::size_t>(data.labelings[l].alphabet_size), data.pools[l].weights, data.pools[l].biases);
    }
    return kOk;
}

int cmd_train(const ConfigArgs& args, std::size_t threads, const std::vector<std::size_t>& only_folds) {
    const auto cfg = args.load();
    const auto ds = load_dataset(cfg, args.data_dir);
    const auto data = prepare_cached(ds, cfg.model, cfg.output_dir / "cache", budget_of(cfg));
    const auto folds = load_or_make_folds(cfg, ds);
    const auto fp = dataset_fingerprint(ds);
    save_folds(cfg.output_dir / "folds.json", folds);
    io::write_file_atomic(cfg.output_dir / "config.ini", to_ini(cfg));
    const auto summary = cross_validate(ds, data, cfg.model, cfg.train, folds, threads, [&](const RunResult& r) {
        std::string log;
        for (const auto& rec : r.log) log += to_json(rec).dump() + "\n";
        io::write_file_atomic(cfg.output_dir / "logs" / (run_stem(r.fold, r.run) + ".jsonl"), log);
        save_checkpoint(cfg.output_dir / "checkpoints" / (run_stem(r.fold, r.run) + ".json"),
                        make_checkpoint(cfg.model, data, fp, r));
        std::fprintf(stderr, "fold %zu run %zu: test %.4f (best epoch %zu of %zu)\n", r.fold, r.run, r.test_acc,
                     r.best_epoch, r.log.size());
    }, only_folds);
    const auto table = results_table(cfg.name, summary);
    io::write_file_atomic(cfg.output_dir / "results.tsv", table);
    std::cout << table;
    return kOk;
}

int cmd_evaluate(const ConfigArgs& args) {
    const auto cfg = args.load();
    const auto ds = load_dataset(cfg, args.data_dir);
    const auto data = prepare_cached(ds, cfg.model, cfg.output_dir / "cache", budget_of(cfg));
    const auto folds = load_or_make_folds(cfg, ds);
    const auto fp = dataset_fingerprint(ds);
    const auto dir = cfg.output_dir / "checkpoints";
    if (!fs::is_directory(dir)) throw DataError("no checkpoints under " + dir.string() + "; run `train` first");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<RunResult> runs;
    for (const auto& f : files) {
        const auto c = load_checkpoint(f);
        if (c.fold >= folds.size()) throw DataError(f.string() + ": fold " + std::to_string(c.fold) + " does not exist");
        const auto model = restore_model(c, cfg.model, data, fp);
        RunResult r;
        r.fold = c.fold;
        r.run = c.run;
        r.test_acc = evaluate(model, ds, data, folds.folds[c.fold].test).accuracy;
        runs.push_back(r);
    }
    if (runs.empty()) throw DataError("no checkpoints under " + dir.string());
    std::cout << results_table(cfg.name, summarize(std::move(runs)));
    return kOk;
}

int cmd_export(const ConfigArgs& args, const std::string& checkpoint, std::size_t graph, std::size_t top_k,
               const std::string& out_dir) {
    const auto cfg = args.load();
    const auto ds = load_dataset(cfg, args.data_dir);
    const auto data = prepare_cached(ds, cfg.model, cfg.output_dir / "cache", budget_of(cfg));
    const auto fp = dataset_fingerprint(ds);
    const auto c = checkpoint.empty() ? zero_checkpoint(cfg.model, data, fp) : load_checkpoint(checkpoint);
    const auto model = restore_model(c, cfg.model, data, fp);
    const auto records = filter_top_k(export_weights(model, data, graph), top_k);
    const fs::path dir = out_dir.empty() ? cfg.output_dir / "export" : fs::path(out_dir);
    const auto stem = "graph" + std::to_string(graph);
    io::write_file_atomic(dir / (stem + ".tsv"), to_tsv(records));
    for (std::size_t l = 0; l < cfg.model.layers.size(); ++l) {
        if (cfg.model.layers[l].rule != RuleKind::propagation) continue;
        io::write_file_atomic(dir / (stem + "-layer" + std::to_string(l + 1) + ".dot"),
                              to_dot(records, ds.graphs[graph], l + 1));
    }
    std::cout << records.weights.size() << " weight records, " << records.biases.size() << " bias records written to "
              << dir.string() << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rule based graph neural networks: dataset generation, preprocessing, training and export"};
    app.require_subcommand(1);

    std::string kind;
    std::uint64_t gen_seed = 0;
    std::size_t gen_count = 0;
    std::string gen_out = "data";
    auto* gen = app.add_subcommand("generate", "write a synthetic dataset in TUDataset format");
    gen->add_option("kind", kind, "longrings | evenoddrings | evenoddringscount | csl | snowflakes")->required();
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--count", gen_count, "number of graphs (default: the benchmark size)");
    gen->add_option("--out", gen_out, "parent directory");

    ConfigArgs pre_args, train_args, eval_args, export_args;
    auto* pre = app.add_subcommand("preprocess", "compute and cache distances, labelings and layouts");
    pre_args.attach(pre);

    std::size_t threads = 1;
    std::vector<std::size_t> only_folds;
    auto* train = app.add_subcommand("train", "cross-validate: one model per fold and run");
    train_args.attach(train);
    train->add_option("--threads", threads, "parallel (fold, run) workers")->check(CLI::PositiveNumber);
    train->add_option("--folds", only_folds, "train only these folds");

    auto* eval = app.add_subcommand("evaluate", "re-evaluate saved checkpoints on their test folds");
    eval_args.attach(eval);

    std::string checkpoint;
    std::size_t graph = 0;
    std::size_t top_k = 0;
    std::string export_out;
    auto* exp = app.add_subcommand("export-weights", "write per-edge weight records and DOT files for one graph");
    export_args.attach(exp);
    exp->add_option("--checkpoint", checkpoint, "checkpoint file (default: all-zero parameters)");
    exp->add_option("--graph", graph, "graph index");
    exp->add_option("--top-k", top_k, "keep the k largest positive and negative weights per layer (0: all)");
    exp->add_option("--out", export_out, "output directory");

    std::string show;
    auto* presets = app.add_subcommand("presets", "list packaged presets or print one");
    presets->add_option("name", show, "preset to print");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) return cmd_generate(kind, gen_seed, gen_count, gen_out);
        if (*pre) return cmd_preprocess(pre_args);
        if (*train) return cmd_train(train_args, threads, only_folds);
        if (*eval) return cmd_evaluate(eval_args);
        if (*exp) return cmd_export(export_args, checkpoint, graph, top_k, export_out);
        if (*presets) {
            if (show.empty()) {
                for (const auto& n : preset_names()) std::cout << n << "\n";
            } else {
                std::cout << preset_text(show);
            }
            return kOk;
        }
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}
