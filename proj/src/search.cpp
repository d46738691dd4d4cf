#include "oamch/search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "oamch/errors.hpp"
#include "oamch/kernels.hpp"

namespace oamch {

namespace {

using TableFn = ThetaTable (*)(const ChEvaluator&, std::span<const double>);
using BestFn = TableOptimum (*)(const ThetaTable&);

double& coordinate(ThetaQuad& q, int c)
{
    switch (c) {
    case 0: return q.theta_a;
    case 1: return q.theta_a_prime;
    case 2: return q.theta_b;
    default: return q.theta_b_prime;
    }
}

OptimizeResult optimize_with(TableFn table_fn, BestFn best_fn, Orientation alpha, Orientation beta, StepIndex step,
                             double tol, const OptimizeOptions& options)
{
    if (!(tol > 0.0)) throw InvalidArgument("optimizer tolerance must be positive");
    if (options.coarse_points < 9) throw InvalidArgument("coarse lattice needs at least 9 points per axis");

    const ChEvaluator eval(alpha, beta, step);
    const double spacing = kTwoPi / options.coarse_points;
    std::vector<double> lattice(static_cast<std::size_t>(options.coarse_points));
    for (std::size_t k = 0; k < lattice.size(); ++k) lattice[k] = spacing * static_cast<double>(k);

    const TableOptimum coarse = best_fn(table_fn(eval, lattice));
    ThetaQuad quad{lattice[coarse.index[0]], lattice[coarse.index[1]], lattice[coarse.index[2]],
                   lattice[coarse.index[3]]};

    OptimizeResult out;
    out.coarse_s = eval.s(quad);
    double current = out.coarse_s;
    for (out.sweeps = 0; out.sweeps < options.max_sweeps;) {
        const double sweep_start = current;
        for (int c = 0; c < 4; ++c) {
            ThetaQuad trial = quad;
            auto along = [&](double x) {
                coordinate(trial, c) = x;
                return eval.s(trial);
            };
            const double centre = coordinate(quad, c);
            const double x = golden_section_maximize(along, centre - spacing, centre + spacing);
            const double value = along(x);
            if (value > current) {
                current = value;
                coordinate(quad, c) = x;
            }
        }
        ++out.sweeps;
        if (current - sweep_start < tol) break;
    }

    const ThetaQuad lattice_quad{lattice[coarse.index[0]], lattice[coarse.index[1]], lattice[coarse.index[2]],
                                 lattice[coarse.index[3]]};
    for (int c = 0; c < 4; ++c) coordinate(quad, c) = wrap_angle(coordinate(quad, c)).angle();
    out.thetas = quad;
    out.s = eval.s(quad);
    // wrapping can cost an ulp; never report less than the lattice optimum
    if (out.s < out.coarse_s) {
        out.thetas = lattice_quad;
        out.s = out.coarse_s;
    }
    return out;
}

ScanRow scan_point(const ScanGrid& grid, StepIndex step, std::size_t i, std::size_t j)
{
    ScanRow row;
    row.alpha_index = i;
    row.beta_index = j;
    const Orientation alpha = wrap_angle(grid.alpha_origin + kTwoPi * static_cast<double>(i) / grid.alpha_steps);
    const Orientation beta = wrap_angle(grid.beta_origin + kTwoPi * static_cast<double>(j) / grid.beta_steps);
    row.alpha = alpha.angle();
    row.beta = beta.angle();
    if (grid.theta_policy == ThetaPolicy::fixed_canonical) {
        row.thetas = canonical_settings(alpha, step).thetas;
        row.s = ChEvaluator(alpha, beta, step).s(row.thetas);
    } else {
        const OptimizeOptions options{grid.coarse_points, OptimizeOptions{}.max_sweeps};
        // Rows are already spread over threads; keep each point's work serial.
        const auto opt = serial::optimize_thetas(alpha, beta, step, grid.tolerance, options);
        row.thetas = opt.thetas;
        row.s = opt.s;
    }
    row.exceeds_threshold = row.s > grid.threshold;
    return row;
}

ScanRow pick_best(const std::vector<ScanRow>& rows)
{
    ScanRow best = rows.front();
    for (const auto& r : rows) {
        if (r.s > best.s) best = r;
    }
    return best;
}

} // namespace

void ScanGrid::validate() const
{
    if (alpha_steps < 2 || beta_steps < 2) throw InvalidArgument("scan grid needs at least 2 steps per axis");
    if (!std::isfinite(threshold)) throw InvalidArgument("scan threshold must be finite");
    if (!(tolerance > 0.0)) throw InvalidArgument("scan tolerance must be positive");
    if (coarse_points < 9) throw InvalidArgument("coarse lattice needs at least 9 points per axis");
    if (!std::isfinite(alpha_origin) || !std::isfinite(beta_origin)) {
        throw InvalidArgument("scan origin must be finite");
    }
}

double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi, double x_tol)
{
    constexpr double inv_phi = 0.6180339887498948482;
    double a = lo;
    double b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > x_tol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 >= f2 ? x1 : x2;
}

OptimizeResult optimize_thetas(Orientation alpha, Orientation beta, StepIndex step, double tol,
                               const OptimizeOptions& options)
{
    return optimize_with(parallel::theta_table, parallel::best_on_table, alpha, beta, step, tol, options);
}

ScanResult scan_alpha_beta(const ScanGrid& grid, StepIndex step)
{
    grid.validate();
    const auto nb = static_cast<std::size_t>(grid.beta_steps);
    const auto count = static_cast<std::int64_t>(grid.alpha_steps) * grid.beta_steps;
    ScanResult result;
    result.rows.resize(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < count; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        result.rows[idx] = scan_point(grid, step, idx / nb, idx % nb);
    }
    result.best = pick_best(result.rows);
    return result;
}

namespace serial {

OptimizeResult optimize_thetas(Orientation alpha, Orientation beta, StepIndex step, double tol,
                               const OptimizeOptions& options)
{
    return optimize_with(serial::theta_table, serial::best_on_table, alpha, beta, step, tol, options);
}

ScanResult scan_alpha_beta(const ScanGrid& grid, StepIndex step)
{
    grid.validate();
    const auto nb = static_cast<std::size_t>(grid.beta_steps);
    ScanResult result;
    for (std::size_t i = 0; i < static_cast<std::size_t>(grid.alpha_steps); ++i) {
        for (std::size_t j = 0; j < nb; ++j) result.rows.push_back(scan_point(grid, step, i, j));
    }
    result.best = pick_best(result.rows);
    return result;
}

} // namespace serial

} // namespace oamch
