#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "config.hpp"

namespace rulegnn {

namespace detail {

inline const std::vector<std::pair<std::string_view, std::string_view>>& preset_table() {
    static const std::vector<std::pair<std::string_view, std::string_view>> table = {
        {"nci1", R"([experiment]
name = nci1
[dataset]
name = NCI1
[train]
mode = real
[layer]
rule = propagation
labeling = wl
wl_iterations = 2
label_cap = 500
distances = 1..10
[layer]
rule = aggregation
labeling = wl
wl_iterations = 2
label_cap = 50000
)"},
        {"dhfr", R"([experiment]
name = dhfr
[dataset]
name = DHFR
[train]
mode = real
[layer]
rule = propagation
labeling = wl
wl_iterations = 2
label_cap = 500
distances = 1..6
[layer]
rule = aggregation
labeling = patterns
patterns = simple_cycles<=10
)"},
        {"imdb-b", R"([experiment]
name = imdb-b
[dataset]
name = IMDB-BINARY
[train]
mode = real
[layer]
rule = propagation
labeling = patterns
patterns = triangle, edge
distances = 1,2
[layer]
rule = aggregation
labeling = patterns
patterns = induced_cycles<=5
)"},
        {"imdb-m", R"([experiment]
name = imdb-m
[dataset]
name = IMDB-MULTI
[train]
mode = real
[layer]
rule = propagation
labeling = patterns
patterns = triangle, edge
distances = 1,2
[layer]
rule = aggregation
labeling = patterns
patterns = triangle, edge
)"},
        {"longrings", R"([experiment]
name = longrings
[dataset]
synthetic = longrings
[train]
mode = synthetic
[layer]
rule = propagation
labeling = original
distances = 25
[layer]
rule = aggregation
labeling = original
)"},
        {"evenoddrings", R"([experiment]
name = evenoddrings
[dataset]
synthetic = evenoddrings
[train]
mode = synthetic
[layer]
rule = propagation
labeling = original
distances = 8
[layer]
rule = propagation
labeling = original
distances = 4
[layer]
rule = aggregation
labeling = original
)"},
        {"evenoddringscount", R"([experiment]
name = evenoddringscount
[dataset]
synthetic = evenoddringscount
[train]
mode = synthetic
[layer]
rule = propagation
labeling = original
distances = 8
[layer]
rule = aggregation
labeling = original
)"},
        {"csl", R"([experiment]
name = csl
[dataset]
synthetic = csl
[train]
mode = synthetic
[folds]
k = 5
[layer]
rule = propagation
labeling = patterns
patterns = simple_cycles<=10
distances = 1
[layer]
rule = aggregation
labeling = patterns
patterns = simple_cycles<=10
)"},
        {"snowflakes", R"([experiment]
name = snowflakes
[dataset]
synthetic = snowflakes
[train]
mode = synthetic
[layer]
rule = propagation
labeling = patterns
patterns = cycle_4, cycle_5
distances = 3
[layer]
rule = aggregation
labeling = wl
wl_iterations = 2
)"},
    };
    return table;
}

} // namespace detail

inline std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : detail::preset_table()) names.emplace_back(name);
    return names;
}

inline std::string preset_text(const std::string& name) {
    for (const auto& [n, text] : detail::preset_table()) {
        if (n == name) return std::string(text);
    }
    throw ArgumentError("unknown preset '" + name + "'");
}

inline ExperimentConfig preset_config(const std::string& name) {
    auto cfg = parse_experiment_config(preset_text(name), "preset:" + name);
    cfg.output_dir = "runs/" + name;
    return cfg;
}

} // namespace rulegnn
