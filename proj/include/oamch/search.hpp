#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "oamch/ch_test.hpp"

namespace oamch {

enum class ThetaPolicy { fixed_canonical, optimize_per_point };

/// Plate-orientation scan over [0, 2pi)^2. Grid point (i, j) sits at
/// alpha = alpha_origin + 2pi i / alpha_steps, beta = beta_origin + 2pi j / beta_steps.
struct ScanGrid {
    int alpha_steps = 17;
    int beta_steps = 17;
    ThetaPolicy theta_policy = ThetaPolicy::fixed_canonical;
    double threshold = 0.204;
    double tolerance = 1e-9;  // optimizer stopping tolerance on S
    int coarse_points = 16;   // splitter lattice per axis for the optimizer
    double alpha_origin = 0.0;
    double beta_origin = 0.0;

    void validate() const;
};

struct ScanRow {
    std::size_t alpha_index = 0;
    std::size_t beta_index = 0;
    double alpha = 0.0;
    double beta = 0.0;
    ThetaQuad thetas;
    double s = 0.0;
    bool exceeds_threshold = false;
};

struct ScanResult {
    std::vector<ScanRow> rows; // ordered by (alpha_index, beta_index)
    ScanRow best;
};

struct OptimizeOptions {
    int coarse_points = 16;
    int max_sweeps = 400;
};

struct OptimizeResult {
    ThetaQuad thetas;
    double s = 0.0;
    double coarse_s = 0.0; // S at the best lattice point, before refinement
    int sweeps = 0;
};

/// Maximizes f on [lo, hi] by golden-section search; returns the abscissa.
/// f is assumed unimodal on the bracket. Stops when the bracket is below x_tol.
double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi, double x_tol = 1e-11);

/// Maximizes S over the four splitter angles for fixed plates: exhaustive
/// lattice search, then coordinate-wise golden-section refinement until a
/// full sweep improves S by less than `tol`. Deterministic, and never returns
/// less than the lattice optimum.
OptimizeResult optimize_thetas(Orientation alpha, Orientation beta, StepIndex step, double tol,
                               const OptimizeOptions& options = {});

ScanResult scan_alpha_beta(const ScanGrid& grid, StepIndex step);

namespace serial {
OptimizeResult optimize_thetas(Orientation alpha, Orientation beta, StepIndex step, double tol,
                               const OptimizeOptions& options = {});
ScanResult scan_alpha_beta(const ScanGrid& grid, StepIndex step);
} // namespace serial

} // namespace oamch
