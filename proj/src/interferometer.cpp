#include "oamch/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oamch/errors.hpp"

namespace oamch {

namespace {
constexpr double kInvSqrt2 = 0.5 * std::numbers::sqrt2;
}

Complex Matrix2::at(int row, int col) const
{
    if (row == 1 && col == 1) return u11;
    if (row == 1 && col == 2) return u12;
    if (row == 2 && col == 1) return u21;
    if (row == 2 && col == 2) return u22;
    throw InvalidArgument("matrix index out of range");
}

double unitarity_defect(const Matrix2& m)
{
    const Matrix2 p = m * m.adjoint();
    return std::max({std::abs(p.u11 - 1.0), std::abs(p.u12), std::abs(p.u21), std::abs(p.u22 - 1.0)});
}

Matrix2 rotation_matrix(BeamSplitterAngle theta)
{
    return mz_unitary(theta, 0.0, 0.0);
}

Matrix2 mz_unitary(BeamSplitterAngle theta, double aux_phase_1, double aux_phase_2)
{
    const double c = std::cos(theta.theta());
    const double s = std::sin(theta.theta());
    const Complex e1 = std::polar(1.0, aux_phase_1);
    const Complex e2 = std::polar(1.0, aux_phase_2);
    return {e1 * c, -e2 * s, e1 * s, e2 * c};
}

Complex arm_amplitude(const MzConfig& cfg, int arm, double phi)
{
    if (arm != 1 && arm != 2) throw InvalidArgument("arm must be 1 or 2");
    Complex first = spp_phase(cfg.plate_orientation, phi, cfg.step_index);
    Complex second = spp_phase(cfg.second_plate(), phi, cfg.step_index);
    if (cfg.conjugate_plates) {
        first = std::conj(first);
        second = std::conj(second);
    }
    const Matrix2 u = mz_unitary(cfg.theta, cfg.aux_phase_1, cfg.aux_phase_2);
    const auto out = u.apply({first * kInvSqrt2, second * kInvSqrt2});
    return out[static_cast<std::size_t>(arm - 1)];
}

} // namespace oamch
