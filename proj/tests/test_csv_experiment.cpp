#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ptc/csv.hpp"
#include "ptc/experiment.hpp"

using namespace ptc;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("samples csv round trip") {
    const auto spec = DistributionSpec::gaussian({0.0, 0.0, 0.0}, Matrix::identity(3));
    const Matrix samples = sample(spec, 50, 3);
    const auto path = temp_file("ptc_roundtrip.csv");
    write_samples_csv(path, samples);
    const Matrix back = read_samples_csv(path);
    CHECK(back == samples);

    const auto path2 = temp_file("ptc_roundtrip2.csv");
    write_samples_csv(path2, samples);
    CHECK(slurp(path) == slurp(path2));
    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("ingest_csv") {
    const auto path = temp_file("ptc_ingest.csv");
    SUBCASE("plain numeric rows") {
        std::ofstream(path) << "1,2\n3,4\n5,6\n";
        const auto report = ingest_csv(path, {0, 1});
        CHECK(report.samples.rows() == 3);
        CHECK(report.samples.cols() == 2);
        CHECK(report.dropped_rows == 0);
        CHECK(!report.header_skipped);
        CHECK(report.samples(2, 1) == 6.0);
    }
    SUBCASE("missing field dropped and counted") {
        std::ofstream(path) << "1,2\n3,\n5,6\n";
        const auto report = ingest_csv(path, {0, 1});
        CHECK(report.samples.rows() == 2);
        CHECK(report.dropped_rows == 1);
    }
    SUBCASE("header auto-detected") {
        std::ofstream(path) << "x,y\n1,2\n3,4\n";
        const auto report = ingest_csv(path, {0, 1});
        CHECK(report.header_skipped);
        CHECK(report.samples.rows() == 2);
        CHECK(report.total_rows == 2);
    }
    SUBCASE("column subset") {
        std::ofstream(path) << "a,b,c\n1,hello,3\n4,world,6\n";
        const auto report = ingest_csv(path, {0, 2});
        CHECK(report.samples.cols() == 2);
        CHECK(report.samples(1, 1) == 6.0);
    }
    SUBCASE("no usable rows") {
        std::ofstream(path) << "a,b\nx,y\n";
        CHECK_THROWS_AS(ingest_csv(path, {0, 1}), IngestError);
    }
    SUBCASE("nan and inf fields are dropped") {
        std::ofstream(path) << "1,2\nnan,4\n5,inf\n7,8\n";
        const auto report = ingest_csv(path, {0, 1});
        CHECK(report.samples.rows() == 2);
        CHECK(report.dropped_rows == 2);
    }
    std::filesystem::remove(path);
}

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig config;
    config.dist = DistributionSpec::gaussian({0.0, 0.0}, Matrix::identity(2));
    config.sample_sizes = {200};
    config.trials = 1;
    config.bins_per_dim = 6;
    config.methods = {Method::Hist};
    config.width_c = {3.5};
    return config;
}

}  // namespace

TEST_CASE("experiment row accounting") {
    SUBCASE("single cell, single row") {
        const auto output = run_experiment(tiny_config());
        REQUIRE(output.rows.size() == 1);
        CHECK(output.rows[0].method == "hist");
        CHECK(output.rows[0].param_name == "c");
        CHECK(output.rows[0].error_tag.empty());
        CHECK(output.rows[0].truth.has_value());
        CHECK(output.rows[0].rel_error.has_value());
    }
    SUBCASE("full cross product") {
        ExperimentConfig config = tiny_config();
        config.trials = 3;
        config.methods = {Method::Hist, Method::Ptc, Method::Knn};
        config.width_c = {2.0, 3.5};
        config.ranks = {1, 2};
        config.ks = {1, 5};
        config.sample_sizes = {100, 200};
        const auto output = run_experiment(config);
        // per (s, trial): 2 hist + 2 ptc + 2 knn rows
        CHECK(output.rows.size() == 2 * 3 * 6);
        for (const auto& row : output.rows) CHECK(row.error_tag.empty());
    }
}

TEST_CASE("experiment determinism and parallel equivalence") {
    ExperimentConfig config = tiny_config();
    config.trials = 4;
    config.methods = {Method::Hist, Method::Ptc};
    config.ranks = {1, 2};
    const auto serial = run_experiment(config);
    config.jobs = 4;
    const auto parallel = run_experiment(config);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].method == parallel.rows[i].method);
        CHECK(serial.rows[i].trial == parallel.rows[i].trial);
        CHECK(serial.rows[i].estimate == parallel.rows[i].estimate);
        CHECK(serial.rows[i].seed == parallel.rows[i].seed);
    }
}

TEST_CASE("per-trial seeds allow row re-runs") {
    ExperimentConfig config = tiny_config();
    config.trials = 3;
    const auto output = run_experiment(config);
    const auto& row = output.rows[1];
    // re-run that trial in isolation
    ExperimentConfig rerun = config;
    rerun.trials = 1;
    rerun.seed = row.seed;
    const auto single = run_experiment(rerun);
    CHECK(single.rows[0].estimate == row.estimate);
}

TEST_CASE("mixture reference rows") {
    ExperimentConfig config;
    config.dist = equidistant_mixture(2, 1, 10.0);
    config.sample_sizes = {150};
    config.trials = 2;
    config.methods = {Method::Hist};
    config.reference_samples = 2000;  // desk-scale for the unit test
    const auto output = run_experiment(config);

    std::size_t reference_rows = 0;
    for (const auto& row : output.rows) {
        if (row.method == "hist-ref") {
            ++reference_rows;
            CHECK(row.s == 2000);
            CHECK(row.error_tag.empty());
        } else {
            CHECK(!row.truth.has_value());
            CHECK(!row.abs_error.has_value());
        }
    }
    CHECK(reference_rows == 2);
    CHECK(output.summary.contains("reference"));
    CHECK(output.summary["reference"]["reference"] == true);

    SUBCASE("reference can be disabled") {
        config.mixture_reference = false;
        const auto without = run_experiment(config);
        for (const auto& row : without.rows) CHECK(row.method != "hist-ref");
    }
}

TEST_CASE("oracle-best summary") {
    ExperimentConfig config = tiny_config();
    config.trials = 2;
    config.methods = {Method::Knn};
    config.ks = {1, 3, 5};
    config.oracle_best = true;
    const auto output = run_experiment(config);
    REQUIRE(output.summary.contains("oracle_best"));
    const auto& knn = output.summary["oracle_best"]["knn"]["s=200"];
    CHECK(knn["trials"].size() == 2);
    CHECK(knn.contains("median_best_abs_error"));
    CHECK(knn.contains("median_best_rel_error"));
}

TEST_CASE("tau sweep rows ride on the largest requested rank") {
    ExperimentConfig config = tiny_config();
    config.methods = {Method::Ptc};
    config.ranks = {1, 2};
    config.taus = {1e-2, 1e-4};
    const auto output = run_experiment(config);
    std::size_t rank_rows = 0, tau_rows = 0;
    for (const auto& row : output.rows) {
        CHECK(row.method == "ptc");
        if (row.param_name == "R") ++rank_rows;
        if (row.param_name == "tau") {
            ++tau_rows;
            CHECK(row.error_tag.empty());
        }
    }
    CHECK(rank_rows == 2);
    CHECK(tau_rows == 2);
}

TEST_CASE("input-samples mode reports the actual row count") {
    ExperimentConfig config = tiny_config();
    config.input_samples =
        sample(DistributionSpec::gaussian({0.0, 0.0}, Matrix::identity(2)), 123, 9);
    config.sample_sizes = {2500};  // ignored: the input matrix fixes s
    const auto output = run_experiment(config);
    REQUIRE(output.rows.size() == 1);
    CHECK(output.rows[0].s == 123);
    CHECK(!output.rows[0].truth.has_value());
}

TEST_CASE("failed rows carry an error tag") {
    ExperimentConfig config = tiny_config();
    config.methods = {Method::Knn};
    config.ks = {500};  // k >= s
    const auto output = run_experiment(config);
    REQUIRE(output.rows.size() == 1);
    CHECK(!output.rows[0].error_tag.empty());
}

TEST_CASE("results csv format") {
    ExperimentConfig config = tiny_config();
    const auto output = run_experiment(config);
    const auto path = temp_file("ptc_results.csv");
    write_results_csv(path, output.rows);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# ptc-results v1");
    std::getline(in, line);
    CHECK(line ==
          "trial,method,param_name,param_value,s,d,bins_per_dim_or_width,estimate,truth,"
          "abs_error,rel_error,occupancy,nnz_bins,total_bins,seed,runtime_ms,error_tag");
    std::size_t data_lines = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++data_lines;
    CHECK(data_lines == output.rows.size());
    std::filesystem::remove(path);
}

TEST_CASE("median helper") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(std::isnan(median({})));
}
