#pragma once

#include <array>

#include "oamch/azimuthal.hpp"
#include "oamch/interferometer.hpp"

namespace oamch {

/// One full apparatus configuration: both plate orientations, both output
/// splitters and the four azimuth-independent phases (a1, a2, b1, b2).
struct ExperimentSettings {
    Orientation alpha;
    Orientation beta;
    BeamSplitterAngle theta_a;
    BeamSplitterAngle theta_b;
    StepIndex step_index = StepIndex::half_integer(0);
    std::array<double, 4> aux_phases{0.0, 0.0, 0.0, 0.0};

    /// alpha - beta wrapped to (-pi, pi].
    double delta() const;
    bool has_aux_phases() const;

    MzConfig analyzer_a() const;
    MzConfig analyzer_b() const;
};

using ComplexMatrix2x2 = std::array<std::array<Complex, 2>, 2>;
using RealMatrix2x2 = std::array<std::array<double, 2>, 2>;

/// Coincidence amplitudes C_ij (radial constant omitted) and p_ij = |C_ij|^2.
/// Indices are zero-based: c[0][1] is C_12.
struct AmplitudeMatrix {
    ComplexMatrix2x2 c{};
    RealMatrix2x2 p{};

    static AmplitudeMatrix from_amplitudes(const ComplexMatrix2x2& c);
    double total() const { return p[0][0] + p[0][1] + p[1][0] + p[1][1]; }
};

struct NormalizedState {
    ComplexMatrix2x2 lambda{};

    double norm_squared() const;
};

/// The phase convention factor (3 - i - j) + i(3i + 3j - 2ij - 4), i, j in {1, 2}.
Complex sigma_coeff(int i, int j);

/// The four plate overlaps I(alpha_k, beta_m) / 2 entering every amplitude.
/// Depends only on the plates, so it can be reused across splitter settings.
struct PlateOverlaps {
    ComplexMatrix2x2 half_overlap{};

    static PlateOverlaps compute(Orientation alpha, Orientation beta, StepIndex step);
};

/// Analytic amplitudes from precomputed plate overlaps and the two analyzer
/// unitaries.
AmplitudeMatrix amplitude_matrix(const PlateOverlaps& overlaps, const Matrix2& ua, const Matrix2& ub);

/// Analytic amplitudes via the closed-form overlap integral.
AmplitudeMatrix amplitude_matrix(const ExperimentSettings& settings);

/// Amplitudes by direct quadrature of A_i(phi) B_j(phi), split at the four
/// dislocation angles.
AmplitudeMatrix amplitude_matrix_quadrature(const ExperimentSettings& settings);

/// lambda_ij = C_ij / sqrt(sum |C|^2). Throws DegenerateState when all C vanish.
NormalizedState normalized_amplitudes(const AmplitudeMatrix& m);

/// The four unnormalized probabilities in closed form, valid for half-integer
/// step index and zero auxiliary phases.
struct ClosedFormProbabilities {
    double joint = 0.0;      // P(theta_a, theta_b)   = p11
    double marginal_a = 0.0; // P(theta_a, inf)       = p11 + p12
    double marginal_b = 0.0; // P(inf, theta_b)       = p11 + p21
    double total = 0.0;      // P(inf, inf)           = sum p
};

/// Throws DomainError when delta lies outside [-pi, pi]; the caller must wrap.
ClosedFormProbabilities closed_form_probabilities(double delta, double theta_a, double theta_b);

/// Validates the closed-form preconditions (throws InvalidArgument for
/// nonzero aux phases or a non half-integer step index), then evaluates at the
/// wrapped delta.
ClosedFormProbabilities closed_form_probabilities(const ExperimentSettings& settings);

} // namespace oamch
