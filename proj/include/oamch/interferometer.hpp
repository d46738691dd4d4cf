#pragma once

#include <array>
#include <cmath>

#include "oamch/azimuthal.hpp"

namespace oamch {

/// Output splitter setting: t = cos(theta), r = i sin(theta).
class BeamSplitterAngle {
public:
    BeamSplitterAngle() = default;
    explicit BeamSplitterAngle(double theta) : theta_(wrap_angle(theta).angle()) {}

    double theta() const { return theta_; }
    Complex transmission() const { return {std::cos(theta_), 0.0}; }
    Complex reflection() const { return {0.0, std::sin(theta_)}; }

private:
    double theta_ = 0.0;
};

struct Matrix2 {
    Complex u11, u12, u21, u22;

    static Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Matrix2 adjoint() const
    {
        return {std::conj(u11), std::conj(u21), std::conj(u12), std::conj(u22)};
    }

    Complex at(int row, int col) const;

    friend Matrix2 operator*(const Matrix2& a, const Matrix2& b)
    {
        return {a.u11 * b.u11 + a.u12 * b.u21, a.u11 * b.u12 + a.u12 * b.u22,
                a.u21 * b.u11 + a.u22 * b.u21, a.u21 * b.u12 + a.u22 * b.u22};
    }

    std::array<Complex, 2> apply(const std::array<Complex, 2>& v) const
    {
        return {u11 * v[0] + u12 * v[1], u21 * v[0] + u22 * v[1]};
    }
};

// Largest entrywise deviation of m * m^dagger from the identity.
double unitarity_defect(const Matrix2& m);

/// One Mach-Zehnder analyzer. The second plate is always at
/// plate_orientation + pi; conjugate_plates selects the complementary plates
/// used on the photon-b side.
struct MzConfig {
    Orientation plate_orientation;
    BeamSplitterAngle theta;
    double aux_phase_1 = 0.0;
    double aux_phase_2 = 0.0;
    bool conjugate_plates = false;
    StepIndex step_index = StepIndex::half_integer(0);

    Orientation second_plate() const { return plate_orientation.opposite(); }
};

/// [[cos, -sin], [sin, cos]]
Matrix2 rotation_matrix(BeamSplitterAngle theta);

/// Rotation with the azimuth-independent phases applied column-wise.
Matrix2 mz_unitary(BeamSplitterAngle theta, double aux_phase_1, double aux_phase_2);

/// Azimuthal amplitude in output arm 1 or 2 at azimuth phi.
Complex arm_amplitude(const MzConfig& cfg, int arm, double phi);

} // namespace oamch
