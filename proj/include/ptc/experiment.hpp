#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptc/cp_apr.hpp"
#include "ptc/density.hpp"
#include "ptc/samplers.hpp"

namespace ptc {

enum class Method { Hist, Ptc, Knn };

/// Which grid the PTC rows use: the fixed bins-per-dimension tensor grid,
/// or the same width-rule grid the histogram rows sweep over (c values).
enum class PtcBinning { BinsPerDim, WidthRule };

struct ExperimentConfig {
    DistributionSpec dist = DistributionSpec::uniform({{0.0, 1.0}});
    std::optional<Matrix> input_samples;  // replaces sampling when present

    std::vector<std::int64_t> sample_sizes{2500};
    int trials = 25;

    Coord bins_per_dim = 20;           // tensor grid
    std::vector<double> width_c{3.5};  // histogram width-rule sweep
    PtcBinning ptc_binning = PtcBinning::BinsPerDim;

    std::vector<std::size_t> ranks{1, 2, 3, 4, 5};
    std::vector<int> ks{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 25, 50, 100, 200};
    std::vector<double> taus;  // extra thresholded-entropy rows at ranks.back()

    std::uint64_t seed = 0;
    std::vector<Method> methods{Method::Hist, Method::Ptc, Method::Knn};
    bool oracle_best = false;       // report per-trial best hyperparameter vs truth
    bool mixture_reference = true;  // large-sample histogram rows when no truth
    std::int64_t reference_samples = 1'000'000;
    int jobs = 1;

    Index enumeration_budget = kDefaultEnumerationBudget;
    Index node_budget = 1'000'000'000;  // thresholded fallback size cap
    FitConfig fit;                      // rank and seed are set per row
};

struct ResultRow {
    int trial = 0;
    std::string method;      // hist | ptc | knn | hist-ref
    std::string param_name;  // c | R | k | tau
    double param_value = 0.0;
    std::int64_t s = 0;
    std::size_t d = 0;
    std::string bins_or_width;  // "bins=20" or the width value
    double estimate = 0.0;
    std::optional<double> truth;
    std::optional<double> abs_error;
    std::optional<double> rel_error;
    std::optional<double> occupancy;
    std::optional<std::uint64_t> nnz_bins;
    std::optional<double> total_bins;
    std::uint64_t seed = 0;
    double runtime_ms = 0.0;
    std::string error_tag;  // empty on success; "reference" rows use method hist-ref
};

struct ExperimentOutput {
    std::vector<ResultRow> rows;
    nlohmann::json summary;
};

/// Full cross product of trials x methods x hyperparameters x sample sizes
/// with per-trial seeds (base seed + trial index); failures become rows with
/// an error tag instead of aborting the run. Rows come back in a fixed sort
/// order regardless of the number of worker threads.
ExperimentOutput run_experiment(const ExperimentConfig& config);

/// Fixed 17-column CSV with a version comment line on top.
void write_results_csv(const std::filesystem::path& path,
                       const std::vector<ResultRow>& rows);

double median(std::vector<double> values);

}  // namespace ptc
