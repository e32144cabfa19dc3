#include "ptc/histogram.hpp"

#include <cmath>

namespace ptc {

double HistogramDensity::value(std::span<const double> x) const {
    const auto bin = grid.bin_point(x);
    if (!bin) return 0.0;
    const std::int64_t c = counts.at(*bin);
    if (c == 0) return 0.0;
    return static_cast<double>(c) /
           (static_cast<double>(total_samples) * grid.bin_volume(*bin));
}

HistogramDensity build_histogram(const Matrix& samples, BinningGrid grid) {
    if (samples.cols() != grid.ndim())
        throw ArgumentError("sample dimension does not match grid dimension");
    std::map<Index, std::int64_t> entries;
    std::int64_t outside = 0;
    for (std::size_t i = 0; i < samples.rows(); ++i) {
        const auto bin = grid.bin_point(std::span<const double>(samples.row(i), samples.cols()));
        if (!bin) {
            ++outside;
            continue;
        }
        ++entries[linearize(*bin, grid.shape())];
    }
    SparseCountTensor counts(grid.shape(), entries);
    return HistogramDensity{std::move(grid), std::move(counts),
                            static_cast<std::int64_t>(samples.rows()), outside};
}

double histogram_entropy(const HistogramDensity& histogram) {
    const double s = static_cast<double>(histogram.binned_samples());
    if (s <= 0) return 0.0;
    double entropy = 0.0;
    const auto& counts = histogram.counts;
    for (std::size_t e = 0; e < counts.nnz(); ++e) {
        const double p = static_cast<double>(counts.counts()[e]) / s;
        const MultiIndex mi(counts.coordinates().begin() + e * counts.shape().ndim(),
                            counts.coordinates().begin() + (e + 1) * counts.shape().ndim());
        entropy += -p * std::log(p) + p * histogram.grid.log_bin_volume(mi);
    }
    return entropy;
}

double occupancy(const HistogramDensity& histogram) {
    return static_cast<double>(histogram.counts.nnz()) /
           static_cast<double>(histogram.grid.shape().size());
}

}  // namespace ptc
