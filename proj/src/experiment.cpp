#include "ptc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>
#include <tuple>

#include "ptc/histogram.hpp"
#include "ptc/knn.hpp"

namespace ptc {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

void attach_truth(ResultRow& row, std::optional<double> truth) {
    row.truth = truth;
    if (!truth) return;
    row.abs_error = std::abs(row.estimate - *truth);
    if (*truth != 0.0) row.rel_error = *row.abs_error / std::abs(*truth);
}

void attach_histogram_stats(ResultRow& row, const HistogramDensity& histogram) {
    row.occupancy = occupancy(histogram);
    row.nnz_bins = histogram.counts.nnz();
    row.total_bins = static_cast<double>(histogram.grid.shape().size());
}

constexpr double kAutoTauCandidates[] = {1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1};

/// PTC entropy with the runner's fallback policy: full enumeration when the
/// grid fits the budget, otherwise the thresholded estimator at the smallest
/// workable tau.
double ptc_entropy_auto(const PtcDensity& density, Index enumeration_budget,
                        Index node_budget) {
    if (density.grid.shape().size() <= enumeration_budget)
        return ptc_entropy(density, enumeration_budget);
    const auto tau = pick_threshold(density.model, kAutoTauCandidates, node_budget);
    if (!tau)
        throw CapacityError("no threshold keeps the retained enumeration within budget");
    return ptc_entropy_thresholded(density, *tau).entropy_estimate;
}

struct TrialTask {
    std::int64_t s = 0;
    int trial = 0;
    bool reference = false;
};

class TrialRunner {
public:
    TrialRunner(const ExperimentConfig& config, std::optional<double> truth)
        : config_(config), truth_(truth) {}

    std::vector<ResultRow> run(const TrialTask& task) const {
        return task.reference ? run_reference(task) : run_regular(task);
    }

private:
    ResultRow base_row(const TrialTask& task, std::uint64_t seed) const {
        ResultRow row;
        row.trial = task.trial;
        row.s = task.s;
        row.seed = seed;
        return row;
    }

    Matrix make_samples(std::int64_t s, std::uint64_t seed) const {
        if (config_.input_samples) return *config_.input_samples;
        return sample(config_.dist, s, seed);
    }

    std::vector<ResultRow> run_regular(const TrialTask& task) const {
        const std::uint64_t trial_seed = config_.seed + static_cast<std::uint64_t>(task.trial);
        const Matrix samples = make_samples(task.s, trial_seed);
        const std::size_t d = samples.cols();

        std::vector<ResultRow> rows;
        for (const Method method : config_.methods) {
            switch (method) {
                case Method::Hist:
                    run_hist(task, trial_seed, samples, d, rows);
                    break;
                case Method::Ptc:
                    run_ptc(task, trial_seed, samples, d, rows);
                    break;
                case Method::Knn:
                    run_knn(task, trial_seed, samples, d, rows);
                    break;
            }
        }
        return rows;
    }

    void run_hist(const TrialTask& task, std::uint64_t seed, const Matrix& samples,
                  std::size_t d, std::vector<ResultRow>& rows) const {
        for (const double c : config_.width_c) {
            ResultRow row = base_row(task, seed);
            row.method = "hist";
            row.param_name = "c";
            row.param_value = c;
            row.d = d;
            const auto start = Clock::now();
            try {
                const double width = scott_width(task.s, d, c);
                row.bins_or_width = format_double(width);
                const HistogramDensity histogram =
                    build_histogram(samples, grid_from_width(samples, width));
                row.estimate = histogram_entropy(histogram);
                attach_histogram_stats(row, histogram);
                attach_truth(row, truth_);
            } catch (const Error& error) {
                row.error_tag = error.what();
            }
            row.runtime_ms = elapsed_ms(start);
            rows.push_back(std::move(row));
        }
    }

    void run_ptc(const TrialTask& task, std::uint64_t seed, const Matrix& samples,
                 std::size_t d, std::vector<ResultRow>& rows) const {
        if (config_.ptc_binning == PtcBinning::WidthRule) {
            // Same width-rule grids as the histogram rows, rank held fixed.
            const std::size_t rank = config_.ranks.back();
            for (const double c : config_.width_c) {
                ResultRow row = base_row(task, seed);
                row.method = "ptc";
                row.param_name = "c";
                row.param_value = c;
                row.d = d;
                const auto start = Clock::now();
                try {
                    const double width = scott_width(task.s, d, c);
                    row.bins_or_width = format_double(width);
                    fill_ptc_row(samples, grid_from_width(samples, width), rank, seed, row);
                } catch (const Error& error) {
                    row.error_tag = error.what();
                }
                row.runtime_ms = elapsed_ms(start);
                rows.push_back(std::move(row));
            }
            return;
        }

        for (const std::size_t rank : config_.ranks) {
            ResultRow row = base_row(task, seed);
            row.method = "ptc";
            row.param_name = "R";
            row.param_value = static_cast<double>(rank);
            row.d = d;
            row.bins_or_width = "bins=" + std::to_string(config_.bins_per_dim);
            const auto start = Clock::now();
            try {
                fill_ptc_row(samples, grid_from_samples(samples, config_.bins_per_dim), rank,
                             seed, row);
            } catch (const Error& error) {
                row.error_tag = error.what();
            }
            row.runtime_ms = elapsed_ms(start);
            rows.push_back(std::move(row));
        }

        // Optional thresholded-entropy sweep at the largest requested rank.
        if (!config_.taus.empty()) run_ptc_taus(task, seed, samples, d, rows);
    }

    void fill_ptc_row(const Matrix& samples, BinningGrid grid, std::size_t rank,
                      std::uint64_t seed, ResultRow& row) const {
        const HistogramDensity histogram = build_histogram(samples, std::move(grid));
        FitConfig fit_config = config_.fit;
        fit_config.rank = rank;
        fit_config.rng_seed = seed;
        const FitResult fitted = fit(histogram.counts, fit_config);
        const PtcDensity density = make_ptc_density(fitted.model, histogram.grid);
        row.estimate = ptc_entropy_auto(density, config_.enumeration_budget,
                                        config_.node_budget);
        attach_histogram_stats(row, histogram);
        attach_truth(row, truth_);
    }

    void run_ptc_taus(const TrialTask& task, std::uint64_t seed, const Matrix& samples,
                      std::size_t d, std::vector<ResultRow>& rows) const {
        const std::size_t rank = config_.ranks.back();
        try {
            const HistogramDensity histogram =
                build_histogram(samples, grid_from_samples(samples, config_.bins_per_dim));
            FitConfig fit_config = config_.fit;
            fit_config.rank = rank;
            fit_config.rng_seed = seed;
            const FitResult fitted = fit(histogram.counts, fit_config);
            const PtcDensity density = make_ptc_density(fitted.model, histogram.grid);
            for (const double tau : config_.taus) {
                ResultRow row = base_row(task, seed);
                row.method = "ptc";
                row.param_name = "tau";
                row.param_value = tau;
                row.d = d;
                row.bins_or_width = "bins=" + std::to_string(config_.bins_per_dim);
                const auto start = Clock::now();
                try {
                    row.estimate = ptc_entropy_thresholded(density, tau).entropy_estimate;
                    attach_histogram_stats(row, histogram);
                    attach_truth(row, truth_);
                } catch (const Error& error) {
                    row.error_tag = error.what();
                }
                row.runtime_ms = elapsed_ms(start);
                rows.push_back(std::move(row));
            }
        } catch (const Error& error) {
            for (const double tau : config_.taus) {
                ResultRow row = base_row(task, seed);
                row.method = "ptc";
                row.param_name = "tau";
                row.param_value = tau;
                row.d = d;
                row.error_tag = error.what();
                rows.push_back(std::move(row));
            }
        }
    }

    void run_knn(const TrialTask& task, std::uint64_t seed, const Matrix& samples,
                 std::size_t d, std::vector<ResultRow>& rows) const {
        const auto start = Clock::now();
        std::vector<KnnEntropyResult> sweep;
        std::string failure;
        try {
            sweep = knn_entropy_sweep(samples, config_.ks);
        } catch (const Error& error) {
            failure = error.what();
        }
        const double shared_ms = elapsed_ms(start) / static_cast<double>(config_.ks.size());
        for (std::size_t t = 0; t < config_.ks.size(); ++t) {
            ResultRow row = base_row(task, seed);
            row.method = "knn";
            row.param_name = "k";
            row.param_value = static_cast<double>(config_.ks[t]);
            row.d = d;
            row.runtime_ms = shared_ms;
            if (!failure.empty()) {
                row.error_tag = failure;
            } else {
                row.estimate = sweep[t].entropy;
                attach_truth(row, truth_);
            }
            rows.push_back(std::move(row));
        }
    }

    /// Large-sample histogram reference for distributions without a
    /// closed-form entropy (method tag hist-ref marks these rows).
    std::vector<ResultRow> run_reference(const TrialTask& task) const {
        const std::uint64_t ref_seed =
            config_.seed + 100000 + static_cast<std::uint64_t>(task.trial);
        ResultRow row;
        row.trial = task.trial;
        row.method = "hist-ref";
        row.param_name = "c";
        row.param_value = 3.5;
        row.s = config_.reference_samples;
        row.seed = ref_seed;
        const auto start = Clock::now();
        try {
            const Matrix samples = sample(config_.dist, config_.reference_samples, ref_seed);
            row.d = samples.cols();
            const double width = scott_width(config_.reference_samples, samples.cols(), 3.5);
            row.bins_or_width = format_double(width);
            const HistogramDensity histogram =
                build_histogram(samples, grid_from_width(samples, width));
            row.estimate = histogram_entropy(histogram);
            attach_histogram_stats(row, histogram);
        } catch (const Error& error) {
            row.error_tag = error.what();
        }
        row.runtime_ms = elapsed_ms(start);
        return {row};
    }

    const ExperimentConfig& config_;
    std::optional<double> truth_;
};

bool row_order(const ResultRow& a, const ResultRow& b) {
    return std::tie(a.method, a.param_name, a.param_value, a.s, a.trial) <
           std::tie(b.method, b.param_name, b.param_value, b.s, b.trial);
}

nlohmann::json summarize(const ExperimentConfig& config,
                         const std::vector<ResultRow>& rows,
                         std::optional<double> truth);

}  // namespace

double median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
    if (config.trials < 1) throw ArgumentError("trials must be >= 1");
    for (const std::int64_t s : config.sample_sizes)
        if (s < 2) throw ArgumentError("sample sizes must be >= 2");
    if (config.methods.empty()) throw ArgumentError("select at least one method");

    const std::optional<double> truth =
        config.input_samples ? std::nullopt : true_entropy(config.dist);

    // With a fixed input matrix the sample-size axis collapses to its row count.
    std::vector<std::int64_t> sizes = config.sample_sizes;
    if (config.input_samples)
        sizes = {static_cast<std::int64_t>(config.input_samples->rows())};

    std::vector<TrialTask> tasks;
    for (const std::int64_t s : sizes)
        for (int trial = 0; trial < config.trials; ++trial)
            tasks.push_back(TrialTask{s, trial, false});
    const bool want_reference = !config.input_samples && !truth && config.mixture_reference;
    if (want_reference)
        for (int trial = 0; trial < config.trials; ++trial)
            tasks.push_back(TrialTask{config.reference_samples, trial, true});

    TrialRunner runner(config, truth);
    std::vector<std::vector<ResultRow>> per_task(tasks.size());
    const int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) per_task[i] = runner.run(tasks[i]);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
                per_task[i] = runner.run(tasks[i]);
        };
        std::vector<std::thread> threads;
        const std::size_t thread_count =
            std::min(static_cast<std::size_t>(jobs), tasks.size());
        threads.reserve(thread_count);
        for (std::size_t t = 0; t < thread_count; ++t) threads.emplace_back(worker);
        for (auto& thread : threads) thread.join();
    }

    ExperimentOutput output;
    for (auto& rows : per_task)
        output.rows.insert(output.rows.end(), std::make_move_iterator(rows.begin()),
                           std::make_move_iterator(rows.end()));
    std::sort(output.rows.begin(), output.rows.end(), row_order);
    output.summary = summarize(config, output.rows, truth);
    return output;
}

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<ResultRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "# ptc-results v1\n";
    out << "trial,method,param_name,param_value,s,d,bins_per_dim_or_width,estimate,truth,"
           "abs_error,rel_error,occupancy,nnz_bins,total_bins,seed,runtime_ms,error_tag\n";
    auto opt = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string();
    };
    for (const ResultRow& row : rows) {
        out << row.trial << ',' << row.method << ',' << row.param_name << ','
            << format_double(row.param_value) << ',' << row.s << ',' << row.d << ','
            << row.bins_or_width << ','
            << (row.error_tag.empty() ? format_double(row.estimate) : std::string()) << ','
            << opt(row.truth) << ',' << opt(row.abs_error) << ',' << opt(row.rel_error)
            << ',' << opt(row.occupancy) << ','
            << (row.nnz_bins ? std::to_string(*row.nnz_bins) : std::string()) << ','
            << opt(row.total_bins) << ',' << row.seed << ','
            << format_double(row.runtime_ms) << ',' << row.error_tag << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

namespace {

nlohmann::json summarize(const ExperimentConfig& config,
                         const std::vector<ResultRow>& rows,
                         std::optional<double> truth) {
    nlohmann::json summary;
    summary["trials"] = config.trials;
    if (truth) summary["truth"] = *truth;

    // Per-(method, param, s) aggregates.
    nlohmann::json cells = nlohmann::json::array();
    std::size_t i = 0;
    while (i < rows.size()) {
        std::size_t j = i;
        std::vector<double> estimates, abs_errors, rel_errors, occupancies;
        std::size_t failed = 0;
        while (j < rows.size() && rows[j].method == rows[i].method &&
               rows[j].param_name == rows[i].param_name &&
               rows[j].param_value == rows[i].param_value && rows[j].s == rows[i].s) {
            if (!rows[j].error_tag.empty()) {
                ++failed;
            } else {
                estimates.push_back(rows[j].estimate);
                if (rows[j].abs_error) abs_errors.push_back(*rows[j].abs_error);
                if (rows[j].rel_error) rel_errors.push_back(*rows[j].rel_error);
                if (rows[j].occupancy) occupancies.push_back(*rows[j].occupancy);
            }
            ++j;
        }
        nlohmann::json cell;
        cell["method"] = rows[i].method;
        cell["param_name"] = rows[i].param_name;
        cell["param_value"] = rows[i].param_value;
        cell["s"] = rows[i].s;
        cell["rows"] = j - i;
        cell["failed"] = failed;
        if (!estimates.empty()) {
            cell["estimate_median"] = median(estimates);
            double mean = 0.0;
            for (const double e : estimates) mean += e;
            cell["estimate_mean"] = mean / static_cast<double>(estimates.size());
        }
        auto error_stats = [](std::vector<double> errors) {
            nlohmann::json stats;
            double mean = 0.0;
            for (const double e : errors) mean += e;
            stats["mean"] = mean / static_cast<double>(errors.size());
            stats["min"] = *std::min_element(errors.begin(), errors.end());
            stats["median"] = median(std::move(errors));
            return stats;
        };
        if (!abs_errors.empty()) cell["abs_error"] = error_stats(std::move(abs_errors));
        if (!rel_errors.empty()) cell["rel_error"] = error_stats(std::move(rel_errors));
        if (!occupancies.empty()) cell["occupancy_median"] = median(std::move(occupancies));
        cells.push_back(std::move(cell));
        i = j;
    }
    summary["cells"] = std::move(cells);

    // Reference aggregate (mixture mode).
    std::vector<double> reference_estimates;
    for (const ResultRow& row : rows)
        if (row.method == "hist-ref" && row.error_tag.empty())
            reference_estimates.push_back(row.estimate);
    if (!reference_estimates.empty()) {
        double mean = 0.0;
        for (const double e : reference_estimates) mean += e;
        summary["reference"] = {
            {"trials", reference_estimates.size()},
            {"estimate_mean", mean / static_cast<double>(reference_estimates.size())},
            {"estimate_median", median(std::move(reference_estimates))},
            {"reference", true},
        };
    }

    // Oracle-best selection: per trial, the hyperparameter with the smallest
    // error against the known truth. Only meaningful when a truth exists.
    if (config.oracle_best && truth) {
        nlohmann::json oracle;
        for (const std::string method : {"hist", "ptc", "knn"}) {
            for (const std::int64_t s : config.sample_sizes) {
                std::vector<double> best_abs(config.trials,
                                             std::numeric_limits<double>::infinity());
                std::vector<double> best_param(config.trials, 0.0);
                bool any = false;
                for (const ResultRow& row : rows) {
                    if (row.method != method || row.s != s || !row.abs_error) continue;
                    if (*row.abs_error < best_abs[row.trial]) {
                        best_abs[row.trial] = *row.abs_error;
                        best_param[row.trial] = row.param_value;
                        any = true;
                    }
                }
                if (!any) continue;
                nlohmann::json trials = nlohmann::json::array();
                std::vector<double> abs_list;
                for (int trial = 0; trial < config.trials; ++trial) {
                    if (!std::isfinite(best_abs[trial])) continue;
                    trials.push_back({{"trial", trial},
                                      {"param", best_param[trial]},
                                      {"abs_error", best_abs[trial]}});
                    abs_list.push_back(best_abs[trial]);
                }
                nlohmann::json entry;
                entry["trials"] = std::move(trials);
                entry["median_best_abs_error"] = median(abs_list);
                if (*truth != 0.0) {
                    for (double& e : abs_list) e /= std::abs(*truth);
                    entry["median_best_rel_error"] = median(std::move(abs_list));
                }
                oracle[method]["s=" + std::to_string(s)] = std::move(entry);
            }
        }
        summary["oracle_best"] = std::move(oracle);
    }
    return summary;
}

}  // namespace

}  // namespace ptc
