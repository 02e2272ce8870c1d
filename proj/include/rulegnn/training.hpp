#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "dataset.hpp"
#include "folds.hpp"
#include "model.hpp"
#include "optimizer.hpp"

namespace rulegnn {

/// Optimisation schedule. decay_every == 0 keeps the learning rate constant.
struct TrainConfig {
    double learning_rate = 0.1;
    double decay = 0.5;
    std::size_t decay_every = 0;
    std::size_t epochs = 200;
    std::size_t batch_size = 128;
    std::size_t patience = 25;
    std::size_t runs = 3;
    std::uint64_t seed = 0;

    static TrainConfig synthetic() { return {}; }
    static TrainConfig real_world() {
        TrainConfig c;
        c.learning_rate = 0.05;
        c.decay_every = 10;
        c.epochs = 50;
        return c;
    }

    void validate() const {
        if (!(learning_rate > 0) || !(decay > 0) || epochs == 0 || batch_size == 0 || patience == 0 || runs == 0) {
            throw SpecError("training parameters must be positive");
        }
        if (patience > epochs) throw SpecError("patience exceeds the epoch count");
    }

    double lr(std::size_t epoch) const { return lr_schedule(epoch, learning_rate, decay, decay_every); }
};

struct EpochRecord {
    std::size_t epoch = 0;
    double lr = 0;
    double train_loss = 0;
    double train_acc = 0;
    double val_loss = 0;
    double val_acc = 0;
};

inline nlohmann::json to_json(const EpochRecord& r) {
    return {{"epoch", r.epoch}, {"lr", r.lr},           {"train_loss", r.train_loss},
            {"train_acc", r.train_acc}, {"val_loss", r.val_loss}, {"val_acc", r.val_acc}};
}

struct EvalResult {
    double accuracy = 0;
    double loss = 0;
};

inline EvalResult evaluate(const RuleGnn& model, const GraphDataset& ds, const PreparedData& data,
                           const std::vector<std::size_t>& indices) {
    EvalResult r;
    if (indices.empty()) return r;
    std::size_t correct = 0;
    for (auto i : indices) {
        const auto x = input_signal(ds.graphs[i], model.spec().input);
        const auto s = model.scores(data.layouts[i], x);
        const auto target = static_cast<std::size_t>(ds.class_labels[i]);
        r.loss += softmax_cross_entropy(s, target).loss;
        if (argmax(s) == target) ++correct;
    }
    r.accuracy = static_cast<double>(correct) / static_cast<double>(indices.size());
    r.loss /= static_cast<double>(indices.size());
    return r;
}

/// Outcome of training one (fold, run). `parameters` are those of the selected epoch.
struct RunResult {
    std::size_t fold = 0;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    std::size_t best_epoch = 0;
    double val_acc = 0;
    double test_acc = 0;
    std::vector<EpochRecord> log;
    std::vector<double> parameters;
};

inline std::uint64_t run_seed(std::uint64_t base, std::size_t fold, std::size_t run) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(fold), static_cast<std::uint32_t>(run)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (std::uint64_t{out[0]} << 32) | out[1];
}

/// Trains one model on fold.train. An epoch is better than the incumbent when its validation
/// accuracy is higher, or equal with lower validation loss. Stops after `patience` epochs without
/// improvement. Throws RuntimeFailure on a non-finite loss.
inline RunResult train_fold(const GraphDataset& ds, const PreparedData& data, const ModelSpec& spec,
                            const TrainConfig& cfg, const Fold& fold, std::size_t fold_index, std::size_t run) {
    cfg.validate();
    RunResult res;
    res.fold = fold_index;
    res.run = run;
    res.seed = run_seed(cfg.seed, fold_index, run);
    std::mt19937_64 rng(res.seed);

    RuleGnn model(spec, data.pools);
    model.initialize(data.layouts, rng());
    Adam adam(model.parameter_count());
    std::vector<double> grad(model.parameter_count());

    std::vector<std::vector<double>> inputs(ds.size());
    for (auto i : fold.train) inputs[i] = input_signal(ds.graphs[i], spec.input);

    auto order = fold.train;
    double best_val_acc = -1;
    double best_val_loss = 0;
    std::size_t since_best = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double lr = cfg.lr(epoch);
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0;
        std::size_t correct = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t k = start; k < end; ++k) {
                const auto i = order[k];
                const auto caches = model.forward(data.layouts[i], inputs[i]);
                const auto& s = caches.back().output;
                const auto target = static_cast<std::size_t>(ds.class_labels[i]);
                auto loss = softmax_cross_entropy(s, target);
                if (!std::isfinite(loss.loss)) {
                    throw RuntimeFailure("non-finite loss in fold " + std::to_string(fold_index) + ", run " +
                                         std::to_string(run) + ", epoch " + std::to_string(epoch) + ", graph " +
                                         std::to_string(i));
                }
                loss_sum += loss.loss;
                if (argmax(s) == target) ++correct;
                model.backward(data.layouts[i], caches, loss.grad, grad);
            }
            const double scale = 1.0 / static_cast<double>(end - start);
            for (auto& g : grad) g *= scale;
            adam.update(model.parameters(), grad, lr);
        }
        EpochRecord rec;
        rec.epoch = epoch;
        rec.lr = lr;
        rec.train_loss = order.empty() ? 0 : loss_sum / static_cast<double>(order.size());
        rec.train_acc = order.empty() ? 0 : static_cast<double>(correct) / static_cast<double>(order.size());
        const auto val = evaluate(model, ds, data, fold.validation);
        rec.val_loss = val.loss;
        rec.val_acc = val.accuracy;
        res.log.push_back(rec);

        if (val.accuracy > best_val_acc || (val.accuracy == best_val_acc && val.loss < best_val_loss)) {
            best_val_acc = val.accuracy;
            best_val_loss = val.loss;
            res.best_epoch = epoch;
            res.parameters = model.parameters();
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }
    model.parameters() = res.parameters;
    res.val_acc = best_val_acc;
    res.test_acc = evaluate(model, ds, data, fold.test).accuracy;
    return res;
}

/// Per fold that ran: the mean of its runs. Overall: mean and population std of those fold means.
struct CvSummary {
    std::vector<RunResult> runs;
    std::vector<std::size_t> folds;
    std::vector<double> fold_accuracy;
    double mean = 0;
    double std = 0;
};

inline CvSummary summarize(std::vector<RunResult> runs) {
    CvSummary s;
    std::sort(runs.begin(), runs.end(),
              [](const RunResult& a, const RunResult& b) { return std::tie(a.fold, a.run) < std::tie(b.fold, b.run); });
    for (std::size_t i = 0; i < runs.size();) {
        std::size_t j = i;
        double sum = 0;
        for (; j < runs.size() && runs[j].fold == runs[i].fold; ++j) sum += runs[j].test_acc;
        s.folds.push_back(runs[i].fold);
        s.fold_accuracy.push_back(sum / static_cast<double>(j - i));
        i = j;
    }
    if (!s.fold_accuracy.empty()) {
        const auto k = static_cast<double>(s.fold_accuracy.size());
        s.mean = std::accumulate(s.fold_accuracy.begin(), s.fold_accuracy.end(), 0.0) / k;
        double var = 0;
        for (double a : s.fold_accuracy) var += (a - s.mean) * (a - s.mean);
        s.std = std::sqrt(var / k);
    }
    s.runs = std::move(runs);
    return s;
}

/// "99.0 ± 3.3" in percent, the way result tables print accuracies.
inline std::string format_accuracy(double mean, double std) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(1);
    out << mean * 100.0 << " ± " << std * 100.0;
    return out.str();
}

/// Runs every (fold, run) pair, `threads` at a time. Results do not depend on the thread count.
/// `on_done` is called (serialised) after each run finishes.
inline CvSummary cross_validate(const GraphDataset& ds, const PreparedData& data, const ModelSpec& spec,
                                const TrainConfig& cfg, const FoldSpec& folds, std::size_t threads = 1,
                                const std::function<void(const RunResult&)>& on_done = {},
                                const std::vector<std::size_t>& only_folds = {}) {
    validate_folds(folds, ds.size());
    std::vector<std::size_t> fold_ids = only_folds;
    if (fold_ids.empty()) {
        fold_ids.resize(folds.folds.size());
        std::iota(fold_ids.begin(), fold_ids.end(), std::size_t{0});
    }
    std::vector<std::pair<std::size_t, std::size_t>> tasks;
    for (auto f : fold_ids) {
        if (f >= folds.folds.size()) throw ArgumentError("fold " + std::to_string(f) + " does not exist");
        for (std::size_t r = 0; r < cfg.runs; ++r) tasks.emplace_back(f, r);
    }
    std::vector<RunResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex report;
    std::exception_ptr failure;
    auto worker = [&] {
        for (std::size_t t; (t = next++) < tasks.size();) {
            try {
                const auto [f, r] = tasks[t];
                results[t] = train_fold(ds, data, spec, cfg, folds.folds[f], f, r);
                if (on_done) {
                    std::lock_guard lock(report);
                    on_done(results[t]);
                }
            } catch (...) {
                std::lock_guard lock(report);
                if (!failure) failure = std::current_exception();
                next = tasks.size();
            }
        }
    };
    const std::size_t n = std::max<std::size_t>(1, std::min(threads, tasks.size()));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return summarize(std::move(results));
}

} // namespace rulegnn
