#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "oamch/ch_test.hpp"
#include "oamch/rng.hpp"

// Data-parallel inner loops. Every kernel has a plain serial reference in
// oamch::serial and an OpenMP version in oamch::parallel; both must produce
// bit-identical results for any thread count.

namespace oamch {

/// Probabilities on a lattice of splitter angles for one plate pair.
/// joint[i * n + j] = P(angles[i], angles[j]).
struct ThetaTable {
    std::vector<double> angles;
    std::vector<double> joint;
    std::vector<double> marg_a; // P(angles[i], inf)
    std::vector<double> marg_b; // P(inf, angles[j])
    double total = 0.0;

    std::size_t size() const { return angles.size(); }
    double at(std::size_t i, std::size_t j) const { return joint[i * angles.size() + j]; }
};

/// Lattice indices (a, a', b, b') of the largest S on a table.
struct TableOptimum {
    std::array<std::size_t, 4> index{};
    double s = 0.0;
};

/// Outcome counts for one run: 11, 12, 21, 22, none.
using OutcomeCounts = std::array<std::uint64_t, 5>;

/// Cumulative outcome thresholds in [0, 1]; a uniform u lands in the first
/// slot whose threshold exceeds it, or in "none".
using OutcomeThresholds = std::array<double, 4>;

// Trials handled per parallel work item.
inline constexpr std::uint64_t kTrialBlock = 1u << 16;

namespace serial {

ThetaTable theta_table(const ChEvaluator& eval, std::span<const double> angles);
TableOptimum best_on_table(const ThetaTable& table);
OutcomeCounts count_outcomes(const OutcomeThresholds& thresholds, const CounterRng& rng, std::uint64_t trials);

} // namespace serial

namespace parallel {

ThetaTable theta_table(const ChEvaluator& eval, std::span<const double> angles);
TableOptimum best_on_table(const ThetaTable& table);
OutcomeCounts count_outcomes(const OutcomeThresholds& thresholds, const CounterRng& rng, std::uint64_t trials);

} // namespace parallel

/// Threads OpenMP would use for a parallel region (1 without OpenMP).
int max_threads();

} // namespace oamch
