#include "ptc/mean_measure.hpp"

#include <string>

#include "ptc/special.hpp"

namespace ptc {

Margin Margin::uniform(double a, double b) {
    if (!(b > a)) throw ArgumentError("uniform margin needs a < b");
    Margin m;
    m.family = Family::Uniform;
    m.a = a;
    m.b = b;
    return m;
}

Margin Margin::normal(double mean, double sd) {
    if (!(sd > 0)) throw ArgumentError("normal margin needs sd > 0");
    Margin m;
    m.family = Family::Normal;
    m.mean = mean;
    m.sd = sd;
    return m;
}

Margin Margin::student_t(double dof) {
    if (!(dof > 0)) throw ArgumentError("student-t margin needs dof > 0");
    Margin m;
    m.family = Family::StudentT;
    m.dof = dof;
    return m;
}

double Margin::cdf(double x) const {
    switch (family) {
        case Family::Uniform:
            if (x <= a) return 0.0;
            if (x >= b) return 1.0;
            return (x - a) / (b - a);
        case Family::Normal:
            return normal_cdf((x - mean) / sd);
        case Family::StudentT:
            return student_t_cdf(x, dof);
    }
    throw ArgumentError("unsupported margin family");
}

std::vector<double> true_mean_measure(const BinningGrid& grid,
                                      const std::vector<Margin>& margins,
                                      std::int64_t samples, Index budget) {
    const std::size_t d = grid.ndim();
    if (margins.size() != d)
        throw ArgumentError("need one margin per grid dimension");
    const Index n = grid.shape().size();
    if (n > budget)
        throw CapacityError("mean-measure enumeration of " + std::to_string(n) +
                            " bins exceeds the budget");

    // Per-dimension CDF increments across the bin edges.
    std::vector<std::vector<double>> probs(d);
    for (std::size_t k = 0; k < d; ++k) {
        const auto& edges = grid.edges(k);
        probs[k].resize(edges.size() - 1);
        double prev = margins[k].cdf(edges[0]);
        for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
            const double next = margins[k].cdf(edges[j + 1]);
            probs[k][j] = next - prev;
            prev = next;
        }
    }

    std::vector<double> measure(n);
    MultiIndex index(d, 0);
    for (Index linear = 0; linear < n; ++linear) {
        double p = 1.0;
        for (std::size_t k = 0; k < d; ++k) p *= probs[k][index[k]];
        measure[linear] = static_cast<double>(samples) * p;
        for (std::size_t k = 0; k < d; ++k) {
            if (++index[k] < grid.shape().dim(k)) break;
            index[k] = 0;
        }
    }
    return measure;
}

}  // namespace ptc
