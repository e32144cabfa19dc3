#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "ptc/grid.hpp"
#include "ptc/kruskal.hpp"

namespace ptc {

/// Bins to enumerate before a full-tensor evaluation refuses to run.
inline constexpr Index kDefaultEnumerationBudget = 100'000'000;
inline constexpr Index kUnlimitedEnumeration = std::numeric_limits<Index>::max();

/// Fitted model + grid, normalized into a piecewise-constant density over
/// the box B: p(x) = m_bin(x) / (total_mass * |B_bin(x)|), zero off B.
struct PtcDensity {
    KruskalModel model;
    BinningGrid grid;
    double total_mass = 0.0;
};

/// Validates that model and grid shapes agree and caches the total mass.
PtcDensity make_ptc_density(KruskalModel model, BinningGrid grid);

double ptc_density_eval(const PtcDensity& density, std::span<const double> x);

/// Plug-in expectation (1/total_mass) sum_j m_j * fbar(j) with fbar the
/// bin average of the integrand, keyed by linear bin index. Bins with
/// m_j = 0 contribute nothing and fbar is not consulted there.
double plug_in_expectation(const PtcDensity& density,
                           const std::function<double(Index)>& bin_average,
                           Index budget = kDefaultEnumerationBudget);

/// Same, with an explicit table; a missing entry for a bin with m_j > 0
/// raises ArgumentError.
double plug_in_expectation(const PtcDensity& density,
                           const std::unordered_map<Index, double>& bin_average,
                           Index budget = kDefaultEnumerationBudget);

/// Full-enumeration differential entropy
///   -sum_j (m_j/|M|) log(m_j / (|M| |B_j|)),
/// in nats; bins with m_j = 0 contribute zero. Raises CapacityError when
/// the grid has more than `budget` bins (use the thresholded variant).
double ptc_entropy(const PtcDensity& density, Index budget = kDefaultEnumerationBudget);

struct ThresholdReport {
    double tau = 0.0;
    Index retained_terms = 0;       // sum_r prod_i |{a_r^{(i)} >= tau}|
    Index total_terms = 0;          // R * n
    double retained_mass_fraction = 0.0;
    double entropy_estimate = 0.0;
    bool everything_pruned = false;
};

/// Entropy over the sub-tensor that survives factor-entry thresholding:
/// component r contributes only at multi-indices whose every coordinate has
/// factor entry >= tau, and bins retained by several components merge their
/// contributions before the log is taken. tau = 0 reproduces ptc_entropy
/// exactly. Requires rank <= 64 for tau > 0.
ThresholdReport ptc_entropy_thresholded(const PtcDensity& density, double tau);

/// Smallest threshold from `candidates` (ascending) whose retained
/// enumeration is estimated to fit `node_budget`; nullopt if none does.
std::optional<double> pick_threshold(const KruskalModel& model,
                                     std::span<const double> candidates,
                                     Index node_budget);

}  // namespace ptc
