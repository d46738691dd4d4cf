#include "oamch/coincidence.hpp"

#include <cmath>
#include <string>

#include "oamch/errors.hpp"
#include "oamch/quadrature.hpp"

namespace oamch {

double ExperimentSettings::delta() const
{
    double d = alpha.angle() - beta.angle();
    if (d > kPi) d -= kTwoPi;
    if (d <= -kPi) d += kTwoPi;
    return d;
}

bool ExperimentSettings::has_aux_phases() const
{
    for (double p : aux_phases) {
        if (p != 0.0) return true;
    }
    return false;
}

MzConfig ExperimentSettings::analyzer_a() const
{
    return {alpha, theta_a, aux_phases[0], aux_phases[1], false, step_index};
}

MzConfig ExperimentSettings::analyzer_b() const
{
    return {beta, theta_b, aux_phases[2], aux_phases[3], true, step_index};
}

AmplitudeMatrix AmplitudeMatrix::from_amplitudes(const ComplexMatrix2x2& c)
{
    AmplitudeMatrix m;
    m.c = c;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) m.p[i][j] = std::norm(c[i][j]);
    }
    return m;
}

double NormalizedState::norm_squared() const
{
    double sum = 0.0;
    for (const auto& row : lambda) {
        for (const auto& v : row) sum += std::norm(v);
    }
    return sum;
}

Complex sigma_coeff(int i, int j)
{
    if (i < 1 || i > 2 || j < 1 || j > 2) throw InvalidArgument("sigma_coeff indices must be 1 or 2");
    return {static_cast<double>(3 - i - j), static_cast<double>(3 * i + 3 * j - 2 * i * j - 4)};
}

PlateOverlaps PlateOverlaps::compute(Orientation alpha, Orientation beta, StepIndex step)
{
    const std::array<Orientation, 2> a{alpha, alpha.opposite()};
    const std::array<Orientation, 2> b{beta, beta.opposite()};
    PlateOverlaps out;
    for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t m = 0; m < 2; ++m) out.half_overlap[k][m] = 0.5 * overlap_integral(a[k], b[m], step);
    }
    return out;
}

AmplitudeMatrix amplitude_matrix(const PlateOverlaps& overlaps, const Matrix2& ua, const Matrix2& ub)
{
    const auto& g = overlaps.half_overlap;
    ComplexMatrix2x2 c{};
    for (int i = 1; i <= 2; ++i) {
        for (int j = 1; j <= 2; ++j) {
            Complex sum = 0.0;
            for (int k = 1; k <= 2; ++k) {
                for (int m = 1; m <= 2; ++m) sum += ua.at(i, k) * ub.at(j, m) * g[k - 1][m - 1];
            }
            c[i - 1][j - 1] = sigma_coeff(i, j) * sum;
        }
    }
    return AmplitudeMatrix::from_amplitudes(c);
}

AmplitudeMatrix amplitude_matrix(const ExperimentSettings& settings)
{
    const auto overlaps = PlateOverlaps::compute(settings.alpha, settings.beta, settings.step_index);
    const auto& ph = settings.aux_phases;
    return amplitude_matrix(overlaps, mz_unitary(settings.theta_a, ph[0], ph[1]),
                            mz_unitary(settings.theta_b, ph[2], ph[3]));
}

AmplitudeMatrix amplitude_matrix_quadrature(const ExperimentSettings& settings)
{
    const MzConfig a = settings.analyzer_a();
    const MzConfig b = settings.analyzer_b();
    const std::array<double, 4> breaks{a.plate_orientation.angle(), a.second_plate().angle(),
                                       b.plate_orientation.angle(), b.second_plate().angle()};
    ComplexMatrix2x2 c{};
    for (int i = 1; i <= 2; ++i) {
        for (int j = 1; j <= 2; ++j) {
            const Complex integral = quadrature::integrate_piecewise(
                [&](double phi) { return arm_amplitude(a, i, phi) * arm_amplitude(b, j, phi); }, 0.0, kTwoPi,
                breaks);
            c[i - 1][j - 1] = sigma_coeff(i, j) * integral;
        }
    }
    return AmplitudeMatrix::from_amplitudes(c);
}

NormalizedState normalized_amplitudes(const AmplitudeMatrix& m)
{
    double total = 0.0;
    for (const auto& row : m.c) {
        for (const auto& v : row) total += std::norm(v);
    }
    if (!(total > 0.0)) throw DegenerateState("all coincidence amplitudes vanish");
    const double scale = 1.0 / std::sqrt(total);
    NormalizedState s;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) s.lambda[i][j] = m.c[i][j] * scale;
    }
    return s;
}

ClosedFormProbabilities closed_form_probabilities(double delta, double theta_a, double theta_b)
{
    if (!(delta >= -kPi && delta <= kPi)) {
        throw DomainError("closed form needs delta in [-pi, pi], got " + std::to_string(delta) +
                          "; wrap alpha - beta first");
    }
    const double pi = kPi;
    const double pi2 = pi * pi;
    const double d = delta;
    const double d2 = d * d;
    const double ad = std::abs(d);
    const double plus = std::abs(pi + d);
    const double minus = std::abs(pi - d);

    const double ca2 = std::cos(theta_a) * std::cos(theta_a);
    const double sa2 = std::sin(theta_a) * std::sin(theta_a);
    const double cb2 = std::cos(theta_b) * std::cos(theta_b);
    const double sb2 = std::sin(theta_b) * std::sin(theta_b);
    const double cdiff2 = std::cos(theta_a - theta_b) * std::cos(theta_a - theta_b);

    ClosedFormProbabilities out;
    out.joint = d2 * cdiff2 - 2.0 * pi * ad * cdiff2 +
                sa2 * (pi2 * sb2 + cb2 * (2.0 * pi2 + d2 - 2.0 * pi * (d + minus))) +
                ca2 * (pi2 * cb2 + sb2 * (2.0 * pi2 + d2 - 2.0 * pi * (-d + plus))) +
                0.5 * std::sin(2.0 * theta_a) * std::sin(2.0 * theta_b) * (pi * (plus + minus) - plus * minus);

    const double base = 3.0 * pi2 + 2.0 * d2 - pi * (plus + 2.0 * ad + minus);
    const double swing = pi * (2.0 * d - plus + minus);
    out.marginal_a = base + swing * std::cos(2.0 * theta_a);
    out.marginal_b = base + swing * std::cos(2.0 * theta_b);
    out.total = 6.0 * pi2 + 4.0 * d2 - 2.0 * pi * (plus + 2.0 * ad + minus);
    return out;
}

ClosedFormProbabilities closed_form_probabilities(const ExperimentSettings& settings)
{
    if (settings.has_aux_phases()) throw InvalidArgument("closed form requires zero auxiliary phases");
    if (!settings.step_index.is_half_integer()) {
        throw InvalidArgument("closed form requires a half-integer step index");
    }
    return closed_form_probabilities(settings.delta(), settings.theta_a.theta(), settings.theta_b.theta());
}

} // namespace oamch
