#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "io.hpp"
#include "model.hpp"
#include "synthetic.hpp"
#include "training.hpp"

namespace rulegnn {

/// A parsed INI-style document: `[section]` headers, `key = value` lines, `#`/`;` comments.
/// Sections may repeat; each occurrence is kept in file order.
struct IniSection {
    std::string name;
    std::size_t line = 0;
    std::vector<std::pair<std::string, std::string>> entries;
    std::vector<std::size_t> entry_lines;
};

inline std::vector<IniSection> parse_ini(std::string_view text, const std::string& file = "<config>") {
    std::vector<IniSection> sections;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (const auto c = raw.find_first_of("#;"); c != std::string_view::npos) raw = raw.substr(0, c);
        const auto line = io::trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) throw ParseError(file, lineno, "malformed section header");
            sections.push_back({std::string(io::trim(line.substr(1, line.size() - 2))), lineno, {}, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(file, lineno, "expected 'key = value'");
        if (sections.empty()) throw ParseError(file, lineno, "key outside of any section");
        const auto key = io::trim(line.substr(0, eq));
        if (key.empty()) throw ParseError(file, lineno, "empty key");
        sections.back().entries.emplace_back(std::string(key), std::string(io::trim(line.substr(eq + 1))));
        sections.back().entry_lines.push_back(lineno);
    }
    return sections;
}

/// Integer sets: "8", "1,2", "1..10", "1-10", and mixtures such as "1..3,7".
inline std::vector<int> parse_int_set(std::string_view text) {
    std::vector<int> out;
    std::string s(text);
    for (char& c : s) {
        if (c == '{' || c == '}') c = ' ';
    }
    std::stringstream items(s);
    std::string item;
    while (std::getline(items, item, ',')) {
        const auto t = std::string(io::trim(item));
        if (t.empty()) continue;
        std::size_t sep = t.find("..");
        std::size_t sep_len = 2;
        if (sep == std::string::npos) {
            sep = t.find('-', 1);
            sep_len = 1;
        }
        try {
            if (sep == std::string::npos) {
                out.push_back(std::stoi(t));
            } else {
                const int lo = std::stoi(t.substr(0, sep));
                const int hi = std::stoi(t.substr(sep + sep_len));
                if (hi < lo) throw ArgumentError("empty range '" + t + "'");
                for (int v = lo; v <= hi; ++v) out.push_back(v);
            }
        } catch (const std::logic_error&) {
            throw ArgumentError("not an integer set: '" + std::string(text) + "'");
        }
    }
    if (out.empty()) throw ArgumentError("empty integer set");
    return out;
}

inline std::string format_int_set(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
    return out;
}

/// Where the graphs come from: a synthetic generator (`synthetic` non-empty) or a TUDataset
/// directory `path` holding files prefixed `name`.
struct DatasetRef {
    std::string synthetic;
    std::uint64_t seed = 0;
    std::size_t count = 0;
    std::filesystem::path path;
    std::string name;

    friend bool operator==(const DatasetRef&, const DatasetRef&) = default;
};

/// Folds are generated (k, seed) unless `file` names a fold file.
struct FoldSource {
    std::size_t k = 10;
    std::uint64_t seed = 0;
    std::filesystem::path file;

    friend bool operator==(const FoldSource&, const FoldSource&) = default;
};

struct ExperimentConfig {
    std::string name = "experiment";
    DatasetRef dataset;
    ModelSpec model;
    TrainConfig train;
    FoldSource folds;
    std::filesystem::path output_dir = "runs";
    std::uint64_t pattern_budget = EnumerationBudget{}.max_steps;

    friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
        return a.name == b.name && a.dataset == b.dataset && a.model == b.model && a.folds == b.folds &&
               a.output_dir == b.output_dir && a.pattern_budget == b.pattern_budget &&
               a.train.learning_rate == b.train.learning_rate && a.train.decay == b.train.decay &&
               a.train.decay_every == b.train.decay_every && a.train.epochs == b.train.epochs &&
               a.train.batch_size == b.train.batch_size && a.train.patience == b.train.patience &&
               a.train.runs == b.train.runs && a.train.seed == b.train.seed;
    }
};

namespace detail {

inline std::uint64_t to_u64(const std::string& v, const std::string& file, std::size_t line) {
    try {
        std::size_t used = 0;
        const auto x = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::logic_error&) {
        throw ParseError(file, line, "expected a non-negative integer, got '" + v + "'");
    }
}

inline double to_double(const std::string& v, const std::string& file, std::size_t line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::logic_error&) {
        throw ParseError(file, line, "expected a number, got '" + v + "'");
    }
}

inline bool to_bool(const std::string& v, const std::string& file, std::size_t line) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ParseError(file, line, "expected true/false, got '" + v + "'");
}

inline LayerSpec parse_layer(const IniSection& s, const std::string& file) {
    LayerSpec layer;
    bool has_rule = false;
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
        const auto& [k, v] = s.entries[i];
        const auto line = s.entry_lines[i];
        try {
            if (k == "rule") {
                if (v == "propagation" || v == "wl" || v == "pattern") layer.rule = RuleKind::propagation;
                else if (v == "aggregation") layer.rule = RuleKind::aggregation;
                else throw ParseError(file, line, "unknown rule '" + v + "'");
                has_rule = true;
            } else if (k == "labeling") {
                layer.labeling.source = parse_label_source(v);
            } else if (k == "base") {
                layer.labeling.base = parse_label_source(v);
            } else if (k == "wl_iterations" || k == "k") {
                layer.labeling.wl_iterations = static_cast<int>(to_u64(v, file, line));
            } else if (k == "patterns") {
                parse_patterns(v);
                layer.labeling.patterns = v;
            } else if (k == "with_original") {
                layer.labeling.with_original = to_bool(v, file, line);
            } else if (k == "label_cap" || k == "L") {
                layer.labeling.cap = static_cast<int>(to_u64(v, file, line));
            } else if (k == "distances" || k == "D") {
                layer.distances = parse_int_set(v);
            } else if (k == "outputs" || k == "M") {
                layer.out_dim = to_u64(v, file, line);
            } else if (k == "activation") {
                layer.activation = parse_activation(v);
            } else {
                throw ParseError(file, line, "unknown key '" + k + "' in [layer]");
            }
        } catch (const ArgumentError& e) {
            throw ParseError(file, line, e.what());
        }
    }
    if (!has_rule) throw ParseError(file, s.line, "[layer] needs a 'rule'");
    return layer;
}

} // namespace detail

/// Parses an experiment file. Unknown sections or keys are errors, so typos do not pass silently.
/// `[train] mode` (synthetic | real) selects the default schedule and is applied before other keys.
inline ExperimentConfig parse_experiment_config(std::string_view text, const std::string& file = "<config>") {
    ExperimentConfig cfg;
    const auto sections = parse_ini(text, file);
    for (const auto& s : sections) {
        if (s.name != "train") continue;
        for (std::size_t i = 0; i < s.entries.size(); ++i) {
            if (s.entries[i].first != "mode") continue;
            const auto& v = s.entries[i].second;
            if (v == "synthetic") cfg.train = TrainConfig::synthetic();
            else if (v == "real") cfg.train = TrainConfig::real_world();
            else throw ParseError(file, s.entry_lines[i], "mode must be synthetic or real");
        }
    }
    using detail::to_double;
    using detail::to_u64;
    for (const auto& s : sections) {
        if (s.name == "layer") {
            cfg.model.layers.push_back(detail::parse_layer(s, file));
            continue;
        }
        for (std::size_t i = 0; i < s.entries.size(); ++i) {
            const auto& [k, v] = s.entries[i];
            const auto line = s.entry_lines[i];
            const auto unknown = [&] { return ParseError(file, line, "unknown key '" + k + "' in [" + s.name + "]"); };
            if (s.name == "experiment") {
                if (k == "name") cfg.name = v;
                else if (k == "output") cfg.output_dir = v;
                else if (k == "pattern_budget") cfg.pattern_budget = to_u64(v, file, line);
                else throw unknown();
            } else if (s.name == "dataset") {
                if (k == "synthetic") {
                    try {
                        parse_synth_kind(v);
                    } catch (const Error& e) {
                        throw ParseError(file, line, e.what());
                    }
                    cfg.dataset.synthetic = v;
                } else if (k == "seed") cfg.dataset.seed = to_u64(v, file, line);
                else if (k == "count") cfg.dataset.count = to_u64(v, file, line);
                else if (k == "path") cfg.dataset.path = v;
                else if (k == "name") cfg.dataset.name = v;
                else throw unknown();
            } else if (s.name == "train") {
                if (k == "mode") continue;
                if (k == "learning_rate") cfg.train.learning_rate = to_double(v, file, line);
                else if (k == "decay") cfg.train.decay = to_double(v, file, line);
                else if (k == "decay_every") cfg.train.decay_every = to_u64(v, file, line);
                else if (k == "epochs") cfg.train.epochs = to_u64(v, file, line);
                else if (k == "batch_size") cfg.train.batch_size = to_u64(v, file, line);
                else if (k == "patience") cfg.train.patience = to_u64(v, file, line);
                else if (k == "runs") cfg.train.runs = to_u64(v, file, line);
                else if (k == "seed") cfg.train.seed = to_u64(v, file, line);
                else throw unknown();
            } else if (s.name == "folds") {
                if (k == "k") cfg.folds.k = to_u64(v, file, line);
                else if (k == "seed") cfg.folds.seed = to_u64(v, file, line);
                else if (k == "file") cfg.folds.file = v;
                else throw unknown();
            } else if (s.name == "model") {
                if (k == "input") {
                    if (v == "ones") cfg.model.input = InputSignal::ones;
                    else if (v == "degree") cfg.model.input = InputSignal::degree;
                    else throw ParseError(file, line, "input must be ones or degree");
                } else {
                    throw unknown();
                }
            } else {
                throw ParseError(file, s.line, "unknown section [" + s.name + "]");
            }
        }
    }
    if (cfg.dataset.synthetic.empty() && cfg.dataset.name.empty()) {
        throw ParseError(file, 0, "[dataset] needs either 'synthetic' or 'name'");
    }
    try {
        cfg.model.validate();
        cfg.train.validate();
    } catch (const SpecError& e) {
        throw ParseError(file, 0, e.what());
    }
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    return parse_experiment_config(io::read_file(path), path.string());
}

/// Canonical text form; parse_experiment_config(to_ini(c)) == c.
inline std::string to_ini(const ExperimentConfig& c) {
    std::ostringstream out;
    out.precision(17);
    out << "[experiment]\nname = " << c.name << "\noutput = " << c.output_dir.string()
        << "\npattern_budget = " << c.pattern_budget << "\n\n[dataset]\n";
    if (!c.dataset.synthetic.empty()) {
        out << "synthetic = " << c.dataset.synthetic << "\nseed = " << c.dataset.seed << "\n";
        if (c.dataset.count) out << "count = " << c.dataset.count << "\n";
    } else {
        out << "name = " << c.dataset.name << "\n";
        if (!c.dataset.path.empty()) out << "path = " << c.dataset.path.string() << "\n";
    }
    out << "\n[train]\nlearning_rate = " << c.train.learning_rate << "\ndecay = " << c.train.decay
        << "\ndecay_every = " << c.train.decay_every << "\nepochs = " << c.train.epochs
        << "\nbatch_size = " << c.train.batch_size << "\npatience = " << c.train.patience << "\nruns = " << c.train.runs
        << "\nseed = " << c.train.seed << "\n\n[folds]\nk = " << c.folds.k << "\nseed = " << c.folds.seed << "\n";
    if (!c.folds.file.empty()) out << "file = " << c.folds.file.string() << "\n";
    out << "\n[model]\ninput = " << (c.model.input == InputSignal::ones ? "ones" : "degree") << "\n";
    for (const auto& l : c.model.layers) {
        out << "\n[layer]\nrule = " << (l.rule == RuleKind::propagation ? "propagation" : "aggregation")
            << "\nlabeling = " << to_string(l.labeling.source) << "\n";
        if (l.labeling.source == LabelSource::wl) {
            out << "wl_iterations = " << l.labeling.wl_iterations << "\nbase = " << to_string(l.labeling.base) << "\n";
        }
        if (!l.labeling.patterns.empty()) out << "patterns = " << l.labeling.patterns << "\n";
        if (l.labeling.with_original) out << "with_original = true\n";
        if (l.labeling.cap) out << "label_cap = " << l.labeling.cap << "\n";
        if (!l.distances.empty()) out << "distances = " << format_int_set(l.distances) << "\n";
        if (l.out_dim) out << "outputs = " << l.out_dim << "\n";
        if (l.activation) out << "activation = " << to_string(*l.activation) << "\n";
    }
    return out.str();
}

/// Real datasets resolve `path` (default: the dataset name) against `data_dir`, which defaults
/// to $RULEGNN_DATA or ./data.
inline std::filesystem::path resolve_data_dir(const ExperimentConfig& c, const std::filesystem::path& data_dir = {}) {
    std::filesystem::path root = data_dir;
    if (root.empty()) {
        const char* env = std::getenv("RULEGNN_DATA");
        root = env && *env ? env : "data";
    }
    const auto rel = c.dataset.path.empty() ? std::filesystem::path(c.dataset.name) : c.dataset.path;
    return rel.is_absolute() ? rel : root / rel;
}

inline SynthSpec synth_spec(const ExperimentConfig& c) {
    auto spec = default_synth_spec(parse_synth_kind(c.dataset.synthetic), c.dataset.seed);
    if (c.dataset.count) spec.count = c.dataset.count;
    return spec;
}

/// Generates or loads the configured dataset. Missing files raise DataError naming the path.
inline GraphDataset load_dataset(const ExperimentConfig& c, const std::filesystem::path& data_dir = {}) {
    if (!c.dataset.synthetic.empty()) return generate(synth_spec(c));
    const auto dir = resolve_data_dir(c, data_dir);
    if (!std::filesystem::is_directory(dir)) {
        throw DataError("dataset directory " + dir.string() + " not found (expected " + c.dataset.name + "_A.txt etc.)");
    }
    return parse_tud_dataset(dir, c.dataset.name);
}

inline FoldSpec load_or_make_folds(const ExperimentConfig& c, const GraphDataset& ds) {
    if (!c.folds.file.empty()) {
        auto spec = load_folds(c.folds.file);
        validate_folds(spec, ds.size());
        return spec;
    }
    return make_folds(ds, c.folds.k, c.folds.seed);
}

} // namespace rulegnn
