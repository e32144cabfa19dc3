#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptc/csv.hpp"
#include "ptc/experiment.hpp"
#include "ptc/histogram.hpp"
#include "ptc/knn.hpp"

namespace {

using nlohmann::json;

struct DistFlags {
    std::string family = "gaussian";
    std::size_t dim = 2;
    double box_min = 0.0;
    double box_max = 1.0;
    std::string cov = "identity";  // identity | equicorr
    double dof = 1.0;
    std::size_t components = 3;
    double separation = 10.0;
};

void add_dist_flags(CLI::App* cmd, DistFlags& flags) {
    cmd->add_option("--dist", flags.family, "uniform | gaussian | student-t | mixture")
        ->check(CLI::IsMember({"uniform", "gaussian", "student-t", "mixture"}));
    cmd->add_option("--d", flags.dim, "dimension (number of variates)");
    cmd->add_option("--box-min", flags.box_min, "uniform: lower endpoint (every dimension)");
    cmd->add_option("--box-max", flags.box_max, "uniform: upper endpoint (every dimension)");
    cmd->add_option("--cov", flags.cov,
                    "gaussian: identity | equicorr (0.5*(11^T + I))")
        ->check(CLI::IsMember({"identity", "equicorr"}));
    cmd->add_option("--dof", flags.dof, "student-t: degrees of freedom (1 = Cauchy)");
    cmd->add_option("--components", flags.components,
                    "mixture: number of equidistant Gaussian components");
    cmd->add_option("--separation", flags.separation, "mixture: distance between modes");
}

ptc::DistributionSpec build_spec(const DistFlags& flags) {
    using Spec = ptc::DistributionSpec;
    if (flags.family == "uniform")
        return Spec::uniform(std::vector<std::pair<double, double>>(
            flags.dim, {flags.box_min, flags.box_max}));
    if (flags.family == "gaussian") {
        ptc::Matrix cov = ptc::Matrix::identity(flags.dim);
        if (flags.cov == "equicorr")
            for (std::size_t i = 0; i < flags.dim; ++i)
                for (std::size_t j = 0; j < flags.dim; ++j)
                    cov(i, j) = i == j ? 1.0 : 0.5;
        return Spec::gaussian(std::vector<double>(flags.dim, 0.0), std::move(cov));
    }
    if (flags.family == "student-t") return Spec::student_t(flags.dim, flags.dof);
    return ptc::equidistant_mixture(flags.components, flags.dim, flags.separation);
}

std::vector<std::size_t> parse_columns(const std::string& spec) {
    std::vector<std::size_t> columns;
    std::string token;
    std::stringstream stream(spec);
    while (std::getline(stream, token, ','))
        if (!token.empty()) columns.push_back(std::stoul(token));
    return columns;
}

ptc::Matrix load_input(const std::string& path, const std::string& columns_spec,
                       json* ingest_info) {
    if (columns_spec.empty()) {
        return ptc::read_samples_csv(path);
    }
    const auto report = ptc::ingest_csv(path, parse_columns(columns_spec));
    if (ingest_info)
        *ingest_info = {{"rows", report.total_rows},
                        {"used", report.samples.rows()},
                        {"dropped", report.dropped_rows},
                        {"header_skipped", report.header_skipped}};
    return report.samples;
}

int cmd_sample(const DistFlags& flags, std::int64_t s, std::uint64_t seed,
               const std::string& out) {
    const ptc::Matrix samples = ptc::sample(build_spec(flags), s, seed);
    ptc::write_samples_csv(out, samples);
    return 0;
}

struct EstimateFlags {
    std::string method = "ptc";
    std::string input;
    std::string columns;
    std::int64_t s = 2500;
    std::uint64_t seed = 0;
    std::optional<ptc::Coord> bins;
    std::optional<double> width_c;
    std::size_t rank = 5;
    int k = 5;
    std::optional<double> tau;
    ptc::Index budget = ptc::kDefaultEnumerationBudget;
    ptc::FitConfig fit;
};

int cmd_estimate(const DistFlags& dist_flags, const EstimateFlags& flags) {
    json record;
    record["method"] = flags.method;
    record["seed"] = flags.seed;

    ptc::Matrix samples;
    std::optional<double> truth;
    if (!flags.input.empty()) {
        json ingest_info;
        samples = load_input(flags.input, flags.columns, &ingest_info);
        if (!ingest_info.is_null()) record["ingest"] = ingest_info;
    } else {
        const auto spec = build_spec(dist_flags);
        samples = ptc::sample(spec, flags.s, flags.seed);
        truth = ptc::true_entropy(spec);
        record["dist"] = spec.family_name();
    }
    record["s"] = samples.rows();
    record["d"] = samples.cols();

    const auto make_grid = [&](ptc::Coord default_bins) {
        if (flags.width_c) {
            const double width =
                ptc::scott_width(static_cast<std::int64_t>(samples.rows()),
                                 samples.cols(), *flags.width_c);
            record["width"] = width;
            return ptc::grid_from_width(samples, width);
        }
        const ptc::Coord bins = flags.bins.value_or(default_bins);
        record["bins_per_dim"] = bins;
        return ptc::grid_from_samples(samples, bins);
    };

    if (flags.method == "hist") {
        // Histogram baseline defaults to the width rule with c = 3.5.
        const auto histogram = [&] {
            if (!flags.bins && !flags.width_c) {
                const double width = ptc::scott_width(
                    static_cast<std::int64_t>(samples.rows()), samples.cols(), 3.5);
                record["width"] = width;
                return ptc::build_histogram(samples, ptc::grid_from_width(samples, width));
            }
            return ptc::build_histogram(samples, make_grid(20));
        }();
        record["estimate"] = ptc::histogram_entropy(histogram);
        record["occupancy"] = ptc::occupancy(histogram);
        record["nnz_bins"] = histogram.counts.nnz();
        record["total_bins"] = static_cast<double>(histogram.grid.shape().size());
        record["outside"] = histogram.outside;
    } else if (flags.method == "ptc") {
        const auto histogram = ptc::build_histogram(samples, make_grid(20));
        ptc::FitConfig fit_config = flags.fit;
        fit_config.rank = flags.rank;
        fit_config.rng_seed = flags.seed;
        const ptc::FitResult fitted = ptc::fit(histogram.counts, fit_config);
        const ptc::PtcDensity density = ptc::make_ptc_density(fitted.model, histogram.grid);
        record["rank"] = flags.rank;
        record["fit"] = {{"outer_iterations", fitted.outer_iterations},
                         {"converged", fitted.converged},
                         {"final_kkt_violation", fitted.final_kkt_violation},
                         {"loglik_first", fitted.loglik_trace.front()},
                         {"loglik_final", fitted.loglik_trace.back()}};
        if (flags.tau) {
            const auto report = ptc::ptc_entropy_thresholded(density, *flags.tau);
            record["estimate"] = report.entropy_estimate;
            record["threshold"] = {{"tau", report.tau},
                                   {"retained_terms", report.retained_terms},
                                   {"total_terms", report.total_terms},
                                   {"retained_mass_fraction", report.retained_mass_fraction},
                                   {"everything_pruned", report.everything_pruned}};
        } else {
            try {
                record["estimate"] = ptc::ptc_entropy(density, flags.budget);
            } catch (const ptc::CapacityError& e) {
                throw ptc::CapacityError(std::string(e.what()) +
                                         "; pass --tau to use the thresholded estimator");
            }
        }
        record["occupancy"] = ptc::occupancy(histogram);
        record["nnz_bins"] = histogram.counts.nnz();
        record["total_bins"] = static_cast<double>(histogram.grid.shape().size());
    } else {  // knn
        const auto result = ptc::knn_entropy_detail(samples, flags.k);
        record["k"] = flags.k;
        record["estimate"] = result.entropy;
        record["floored_distances"] = result.floored_distances;
    }

    if (truth) {
        record["truth"] = *truth;
        const double abs_error = std::abs(record["estimate"].get<double>() - *truth);
        record["abs_error"] = abs_error;
        if (*truth != 0.0) record["rel_error"] = abs_error / std::abs(*truth);
    }
    std::cout << record.dump() << "\n";
    return 0;
}

struct ExperimentFlags {
    std::string input;
    std::string columns;
    std::vector<std::int64_t> sample_sizes{2500};
    int trials = 25;
    ptc::Coord bins = 20;
    std::vector<double> width_c{3.5};
    std::string ptc_binning = "bins";
    std::vector<std::size_t> ranks{1, 2, 3, 4, 5};
    std::vector<int> ks{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 25, 50, 100, 200};
    std::vector<double> taus;
    std::uint64_t seed = 0;
    std::vector<std::string> methods{"hist", "ptc", "knn"};
    std::string select = "report-all";
    bool no_reference = false;
    std::int64_t reference_samples = 1'000'000;
    int jobs = 1;
    std::string out = "results.csv";
    std::string summary;
};

int cmd_experiment(const DistFlags& dist_flags, const ExperimentFlags& flags) {
    ptc::ExperimentConfig config;
    if (!flags.input.empty()) {
        config.input_samples = load_input(flags.input, flags.columns, nullptr);
    } else {
        config.dist = build_spec(dist_flags);
    }
    config.sample_sizes = flags.sample_sizes;
    config.trials = flags.trials;
    config.bins_per_dim = flags.bins;
    config.width_c = flags.width_c;
    config.ptc_binning = flags.ptc_binning == "width" ? ptc::PtcBinning::WidthRule
                                                      : ptc::PtcBinning::BinsPerDim;
    config.ranks = flags.ranks;
    config.ks = flags.ks;
    config.taus = flags.taus;
    config.seed = flags.seed;
    config.methods.clear();
    for (const auto& name : flags.methods) {
        if (name == "hist") config.methods.push_back(ptc::Method::Hist);
        else if (name == "ptc") config.methods.push_back(ptc::Method::Ptc);
        else if (name == "knn") config.methods.push_back(ptc::Method::Knn);
        else throw ptc::ArgumentError("unknown method " + name);
    }
    config.oracle_best = flags.select == "oracle-best";
    config.mixture_reference = !flags.no_reference;
    config.reference_samples = flags.reference_samples;
    config.jobs = flags.jobs;

    const ptc::ExperimentOutput output = ptc::run_experiment(config);
    ptc::write_results_csv(flags.out, output.rows);
    const std::string summary_path =
        flags.summary.empty() ? flags.out + ".summary.json" : flags.summary;
    {
        std::ofstream summary_out(summary_path);
        if (!summary_out) throw ptc::IoError("cannot open " + summary_path);
        summary_out << output.summary.dump(2) << "\n";
    }

    std::size_t failed = 0;
    for (const auto& row : output.rows)
        if (!row.error_tag.empty()) ++failed;
    std::cerr << "wrote " << output.rows.size() << " rows (" << failed << " failed) to "
              << flags.out << "\n";
    return failed == output.rows.size() ? 3 : 0;
}

/// Expands `--config FILE` into ordinary option tokens. Each non-empty,
/// non-comment line is `key=value` and becomes `--key value`, injected right
/// after the subcommand name; keys already present on the command line are
/// skipped, so flags win over the config file.
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string config_path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ptc::ArgumentError("--config needs a file path");
            config_path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (config_path.empty()) return args;

    std::ifstream in(config_path);
    if (!in) throw ptc::IoError("cannot open config file " + config_path);
    std::vector<std::string> injected;
    std::string line;
    while (std::getline(in, line)) {
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        const auto eq = line.find('=', start);
        if (eq == std::string::npos)
            throw ptc::ArgumentError("config line is not key=value: " + line);
        const auto key_end = line.find_last_not_of(" \t\r", eq - 1);
        std::string key = line.substr(start, key_end - start + 1);
        const auto value_start = line.find_first_not_of(" \t\r", eq + 1);
        std::string value =
            value_start == std::string::npos ? "" : line.substr(value_start);
        while (!value.empty() && (value.back() == ' ' || value.back() == '\r' ||
                                  value.back() == '\t'))
            value.pop_back();
        const std::string flag = "--" + key;
        bool already_given = false;
        for (const auto& arg : args)
            if (arg == flag || arg.rfind(flag + "=", 0) == 0) already_given = true;
        if (already_given) continue;
        injected.push_back(flag + "=" + value);  // works for options and flags alike
    }
    // insert after the subcommand token (the first non-flag argument)
    std::size_t anchor = args.size();
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (!args[i].empty() && args[i][0] != '-') {
            anchor = i + 1;
            break;
        }
    }
    args.insert(args.begin() + anchor, injected.begin(), injected.end());
    return args;
}

int cmd_ingest_check(const std::string& input, const std::string& columns,
                     const std::string& out) {
    const auto report = ptc::ingest_csv(
        input, columns.empty() ? std::vector<std::size_t>{} : parse_columns(columns));
    json record = {{"rows", report.total_rows},
                   {"used", report.samples.rows()},
                   {"dropped", report.dropped_rows},
                   {"header_skipped", report.header_skipped},
                   {"d", report.samples.cols()}};
    if (!out.empty()) {
        ptc::write_samples_csv(out, report.samples);
        record["out"] = out;
    }
    std::cout << record.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Poisson tensor completion density and entropy estimation"};
    app.require_subcommand(1);

    DistFlags dist_flags;

    auto* sample_cmd = app.add_subcommand("sample", "draw samples and write a CSV");
    std::int64_t sample_s = 2500;
    std::uint64_t sample_seed = 0;
    std::string sample_out = "samples.csv";
    add_dist_flags(sample_cmd, dist_flags);
    sample_cmd->add_option("--s", sample_s, "number of samples");
    sample_cmd->add_option("--seed", sample_seed, "rng seed");
    sample_cmd->add_option("--out", sample_out, "output CSV path")->required();

    auto* estimate_cmd =
        app.add_subcommand("estimate", "one entropy estimate, printed as one-line JSON");
    EstimateFlags est;
    add_dist_flags(estimate_cmd, dist_flags);
    estimate_cmd->add_option("--method", est.method, "hist | ptc | knn")
        ->check(CLI::IsMember({"hist", "ptc", "knn"}));
    estimate_cmd->add_option("--input", est.input, "input samples CSV (instead of --dist)");
    estimate_cmd->add_option("--columns", est.columns,
                             "comma-separated zero-based feature columns of --input");
    estimate_cmd->add_option("--s", est.s, "number of samples to draw");
    estimate_cmd->add_option("--seed", est.seed, "rng seed");
    ptc::Coord est_bins = 0;
    auto* est_bins_opt = estimate_cmd->add_option("--bins", est_bins, "bins per dimension");
    double est_width_c = 0.0;
    auto* est_width_opt = estimate_cmd->add_option(
        "--width-c", est_width_c, "width-rule constant c (bins of width c*s^{-1/(d+2)})");
    estimate_cmd->add_option("--rank", est.rank, "CP rank for method=ptc");
    estimate_cmd->add_option("--k", est.k, "neighbor count for method=knn");
    double est_tau = -1.0;
    auto* est_tau_opt = estimate_cmd->add_option(
        "--tau", est_tau, "thresholded PTC entropy with this factor threshold");
    estimate_cmd->add_option("--budget", est.budget, "full-enumeration bin budget");
    estimate_cmd->add_option("--max-outer", est.fit.max_outer_iters, "fit outer iterations");
    estimate_cmd->add_option("--max-inner", est.fit.max_inner_iters, "fit inner iterations");
    estimate_cmd->add_option("--kkt-tol", est.fit.kkt_tol, "fit KKT tolerance");

    auto* experiment_cmd =
        app.add_subcommand("experiment", "multi-trial sweep; writes a results CSV + summary JSON");
    ExperimentFlags exp;
    add_dist_flags(experiment_cmd, dist_flags);
    experiment_cmd->add_option("--input", exp.input, "input samples CSV (instead of --dist)");
    experiment_cmd->add_option("--columns", exp.columns, "feature columns of --input");
    experiment_cmd->add_option("--s", exp.sample_sizes, "sample sizes")->delimiter(',');
    experiment_cmd->add_option("--trials", exp.trials, "trials per cell");
    experiment_cmd->add_option("--bins", exp.bins, "tensor bins per dimension");
    experiment_cmd->add_option("--width-c", exp.width_c, "histogram width-rule c values")
        ->delimiter(',');
    experiment_cmd
        ->add_option("--ptc-binning", exp.ptc_binning,
                     "bins: fixed tensor grid | width: same width-rule grids as hist")
        ->check(CLI::IsMember({"bins", "width"}));
    experiment_cmd->add_option("--ranks", exp.ranks, "CP ranks")->delimiter(',');
    experiment_cmd->add_option("--ks", exp.ks, "k-NN neighbor counts")->delimiter(',');
    experiment_cmd->add_option("--taus", exp.taus, "thresholded-entropy taus")->delimiter(',');
    experiment_cmd->add_option("--seed", exp.seed, "base seed; trial i uses seed+i");
    experiment_cmd->add_option("--methods", exp.methods, "hist,ptc,knn")->delimiter(',');
    experiment_cmd->add_option("--select", exp.select, "report-all | oracle-best")
        ->check(CLI::IsMember({"report-all", "oracle-best"}));
    experiment_cmd->add_flag("--no-reference", exp.no_reference,
                             "skip large-sample reference rows for truthless distributions");
    experiment_cmd->add_option("--reference-samples", exp.reference_samples,
                               "sample size of the reference histogram");
    experiment_cmd->add_option("--jobs", exp.jobs, "concurrent trials");
    experiment_cmd->add_option("--out", exp.out, "results CSV path")->required();
    experiment_cmd->add_option("--summary", exp.summary,
                               "summary JSON path (default: <out>.summary.json)");

    auto* ingest_cmd =
        app.add_subcommand("ingest-check", "parse a CSV, report usable rows as JSON");
    std::string ingest_input, ingest_columns, ingest_out;
    ingest_cmd->add_option("--input", ingest_input, "CSV path")->required();
    ingest_cmd->add_option("--columns", ingest_columns, "feature columns (default: all)");
    ingest_cmd->add_option("--out", ingest_out, "write the cleaned sample matrix here");

    try {
        std::vector<std::string> args = expand_config_args(argc, argv);
        args.erase(args.begin());            // drop the program name
        std::reverse(args.begin(), args.end());  // CLI11 consumes reversed args
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors exit 1; --help exits 0
    } catch (const ptc::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 2;
    } catch (const ptc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (sample_cmd->parsed()) return cmd_sample(dist_flags, sample_s, sample_seed, sample_out);
        if (estimate_cmd->parsed()) {
            if (est_bins_opt->count()) est.bins = est_bins;
            if (est_width_opt->count()) est.width_c = est_width_c;
            if (est_tau_opt->count()) est.tau = est_tau;
            return cmd_estimate(dist_flags, est);
        }
        if (experiment_cmd->parsed()) return cmd_experiment(dist_flags, exp);
        if (ingest_cmd->parsed())
            return cmd_ingest_check(ingest_input, ingest_columns, ingest_out);
    } catch (const ptc::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const ptc::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 2;
    } catch (const ptc::IngestError& e) {
        std::cerr << "ingest error: " << e.what() << "\n";
        return 2;
    } catch (const ptc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
