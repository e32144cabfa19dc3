#include "ptc/density.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace ptc {

namespace {

std::vector<std::vector<double>> log_widths(const BinningGrid& grid) {
    std::vector<std::vector<double>> lw(grid.ndim());
    for (std::size_t k = 0; k < grid.ndim(); ++k) {
        lw[k].resize(grid.shape().dim(k));
        for (Coord i = 0; i < grid.shape().dim(k); ++i)
            lw[k][i] = std::log(grid.width(k, i));
    }
    return lw;
}

/// Depth-first enumeration of every bin in ascending linear order (mode 0
/// fastest). Maintains per-level partial CP products so a leaf costs O(R).
/// Callback: (linear index, log bin volume, model value).
template <typename Callback>
void enumerate_dense(const KruskalModel& model, const BinningGrid& grid, Callback&& cb) {
    const std::size_t d = model.ndim();
    const std::size_t rank = model.rank;
    const auto lw = log_widths(grid);
    const auto strides = strides_of(model.shape);

    std::vector<double> prods((d + 1) * rank);
    for (std::size_t r = 0; r < rank; ++r) prods[r] = model.weights[r];

    // level l fixes mode d-1-l; the innermost level walks mode 0.
    auto descend = [&](auto&& self, std::size_t level, Index linear, double log_vol) -> void {
        const std::size_t mode = d - 1 - level;
        const Matrix& factor = model.factors[mode];
        const double* parent = prods.data() + level * rank;
        double* child = prods.data() + (level + 1) * rank;
        for (Coord i = 0; i < model.shape.dim(mode); ++i) {
            const double* row = factor.row(i);
            const Index child_linear = linear + strides[mode] * i;
            const double child_log_vol = log_vol + lw[mode][i];
            if (level + 1 == d) {
                double value = 0.0;
                for (std::size_t r = 0; r < rank; ++r) value += parent[r] * row[r];
                cb(child_linear, child_log_vol, value);
            } else {
                for (std::size_t r = 0; r < rank; ++r) child[r] = parent[r] * row[r];
                self(self, level + 1, child_linear, child_log_vol);
            }
        }
    };
    descend(descend, 0, 0, 0.0);
}

void check_budget(const PtcDensity& density, Index budget) {
    if (density.grid.shape().size() > budget)
        throw CapacityError("full enumeration of " +
                            std::to_string(density.grid.shape().size()) +
                            " bins exceeds the budget of " + std::to_string(budget) +
                            "; use ptc_entropy_thresholded");
}

}  // namespace

PtcDensity make_ptc_density(KruskalModel model, BinningGrid grid) {
    if (model.shape != grid.shape())
        throw ArgumentError("model shape does not match grid shape");
    const double mass = kruskal_total_mass(model);
    if (!(mass > 0)) throw ArgumentError("model has no mass");
    return PtcDensity{std::move(model), std::move(grid), mass};
}

double ptc_density_eval(const PtcDensity& density, std::span<const double> x) {
    const auto bin = density.grid.bin_point(x);
    if (!bin) return 0.0;
    const double value = kruskal_entry(density.model, *bin);
    return value / (density.total_mass * density.grid.bin_volume(*bin));
}

double plug_in_expectation(const PtcDensity& density,
                           const std::function<double(Index)>& bin_average,
                           Index budget) {
    check_budget(density, budget);
    double sum = 0.0;
    enumerate_dense(density.model, density.grid, [&](Index linear, double, double value) {
        if (value > 0.0) sum += value * bin_average(linear);
    });
    return sum / density.total_mass;
}

double plug_in_expectation(const PtcDensity& density,
                           const std::unordered_map<Index, double>& bin_average,
                           Index budget) {
    return plug_in_expectation(
        density,
        [&](Index linear) {
            const auto it = bin_average.find(linear);
            if (it == bin_average.end())
                throw ArgumentError("no bin average supplied for bin " +
                                    std::to_string(linear));
            return it->second;
        },
        budget);
}

double ptc_entropy(const PtcDensity& density, Index budget) {
    check_budget(density, budget);
    const double mass = density.total_mass;
    const double log_mass = std::log(mass);
    double entropy = 0.0;
    enumerate_dense(density.model, density.grid, [&](Index, double log_vol, double value) {
        if (value <= 0.0) return;
        entropy -= (value / mass) * (std::log(value) - log_mass - log_vol);
    });
    return entropy;
}

ThresholdReport ptc_entropy_thresholded(const PtcDensity& density, double tau) {
    if (tau < 0.0 || tau >= 1.0)
        throw ArgumentError("threshold tau must lie in [0, 1)");

    const KruskalModel& model = density.model;
    const std::size_t d = model.ndim();
    const std::size_t rank = model.rank;
    const Index n = model.shape.size();

    ThresholdReport report;
    report.tau = tau;
    report.total_terms = static_cast<Index>(rank) * n;

    if (tau == 0.0) {
        report.retained_terms = report.total_terms;
        report.retained_mass_fraction = 1.0;
        report.entropy_estimate = ptc_entropy(density, kUnlimitedEnumeration);
        return report;
    }
    if (rank > 64)
        throw ArgumentError("thresholded entropy supports rank <= 64");

    // Per-mode retained index sets per component, plus their union for the
    // enumeration order.
    std::vector<std::vector<Coord>> union_sets(d);
    Index retained_terms = 0;
    for (std::size_t r = 0; r < rank; ++r) {
        Index box = 1;
        for (std::size_t k = 0; k < d; ++k) {
            Index kept = 0;
            for (Coord i = 0; i < model.shape.dim(k); ++i)
                if (model.factors[k](i, r) >= tau) ++kept;
            box *= kept;
        }
        retained_terms += box;
    }
    for (std::size_t k = 0; k < d; ++k) {
        for (Coord i = 0; i < model.shape.dim(k); ++i) {
            bool any = false;
            for (std::size_t r = 0; r < rank && !any; ++r)
                any = model.factors[k](i, r) >= tau;
            if (any) union_sets[k].push_back(i);
        }
    }
    report.retained_terms = retained_terms;
    if (retained_terms == 0) {
        report.everything_pruned = true;
        return report;
    }

    const auto lw = log_widths(density.grid);
    const double mass = density.total_mass;
    const double log_mass = std::log(mass);

    std::vector<double> prods((d + 1) * rank);
    for (std::size_t r = 0; r < rank; ++r) prods[r] = model.weights[r];
    const std::uint64_t full_mask =
        rank == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rank) - 1;

    double entropy = 0.0;
    double retained_mass = 0.0;

    auto descend = [&](auto&& self, std::size_t level, std::uint64_t mask,
                       double log_vol) -> void {
        const std::size_t mode = d - 1 - level;
        const Matrix& factor = model.factors[mode];
        const double* parent = prods.data() + level * rank;
        double* child = prods.data() + (level + 1) * rank;
        for (const Coord i : union_sets[mode]) {
            const double* row = factor.row(i);
            std::uint64_t child_mask = 0;
            for (std::uint64_t bits = mask; bits;) {
                const std::size_t r = static_cast<std::size_t>(std::countr_zero(bits));
                bits &= bits - 1;
                const double v = row[r];
                if (v >= tau) {
                    child[r] = parent[r] * v;
                    child_mask |= std::uint64_t{1} << r;
                }
            }
            if (!child_mask) continue;
            const double child_log_vol = log_vol + lw[mode][i];
            if (level + 1 == d) {
                double value = 0.0;
                for (std::uint64_t bits = child_mask; bits;) {
                    const std::size_t r = static_cast<std::size_t>(std::countr_zero(bits));
                    bits &= bits - 1;
                    value += child[r];
                }
                if (value > 0.0) {
                    retained_mass += value;
                    entropy -= (value / mass) * (std::log(value) - log_mass - child_log_vol);
                }
            } else {
                // each level owns its prods row and masked reads never touch
                // entries outside child_mask, so nothing to save/restore
                self(self, level + 1, child_mask, child_log_vol);
            }
        }
    };
    descend(descend, 0, full_mask, 0.0);

    report.entropy_estimate = entropy;
    report.retained_mass_fraction = retained_mass / mass;
    return report;
}

std::optional<double> pick_threshold(const KruskalModel& model,
                                     std::span<const double> candidates,
                                     Index node_budget) {
    constexpr double kHuge = 1e30;
    for (const double tau : candidates) {
        // Two upper bounds on the bins the masked enumeration visits: the
        // union box across components, and the sum of per-component boxes.
        double union_box = 1.0;
        for (std::size_t k = 0; k < model.ndim(); ++k) {
            Index kept = 0;
            for (Coord i = 0; i < model.shape.dim(k); ++i) {
                for (std::size_t r = 0; r < model.rank; ++r) {
                    if (model.factors[k](i, r) >= tau) {
                        ++kept;
                        break;
                    }
                }
            }
            union_box = std::min(kHuge, union_box * static_cast<double>(kept));
        }
        double component_sum = 0.0;
        for (std::size_t r = 0; r < model.rank; ++r) {
            double box = 1.0;
            for (std::size_t k = 0; k < model.ndim(); ++k) {
                Index kept = 0;
                for (Coord i = 0; i < model.shape.dim(k); ++i)
                    if (model.factors[k](i, r) >= tau) ++kept;
                box = std::min(kHuge, box * static_cast<double>(kept));
            }
            component_sum = std::min(kHuge, component_sum + box);
        }
        if (std::min(union_box, component_sum) <= static_cast<double>(node_budget))
            return tau;
    }
    return std::nullopt;
}

}  // namespace ptc
