#pragma once

#include <complex>
#include <numbers>
#include <optional>

namespace oamch {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Phase shift per unit azimuthal angle of a spiral phase plate.
///
/// Any positive real value is accepted. When the value is exactly l + 1/2 for
/// a nonnegative integer l, `half_integer_l()` reports l; the closed-form
/// probability expressions are only valid in that case.
class StepIndex {
public:
    explicit StepIndex(double value);

    static StepIndex half_integer(unsigned l);

    double value() const { return value_; }
    std::optional<unsigned> half_integer_l() const { return half_integer_l_; }
    bool is_half_integer() const { return half_integer_l_.has_value(); }

    friend bool operator==(const StepIndex&, const StepIndex&) = default;

private:
    double value_;
    std::optional<unsigned> half_integer_l_;
};

/// Plate rotation angle, always stored in [0, 2pi).
class Orientation {
public:
    Orientation() = default;

    double angle() const { return angle_; }
    // The partner plate of each analyzer sits half a turn away.
    Orientation opposite() const;

    friend bool operator==(const Orientation&, const Orientation&) = default;

private:
    friend Orientation wrap_angle(double raw);
    explicit Orientation(double canonical) : angle_(canonical) {}

    double angle_ = 0.0;
};

/// Reduces `raw` modulo 2pi into [0, 2pi). Throws InvalidArgument on NaN/inf.
Orientation wrap_angle(double raw);

/// e^{i f(chi, phi)}: the phase a plate at orientation `chi` imprints at
/// azimuth `phi`. At phi == chi the phi > chi branch is used, so the result is
/// unit-modulus everywhere.
Complex spp_phase(Orientation chi, double phi, StepIndex step);

/// Closed form of the integral over [0, 2pi) of e^{i[f(mu, phi) - f(nu, phi)]}.
Complex overlap_integral(Orientation mu, Orientation nu, StepIndex step);

/// Same integral by piecewise Gauss-Legendre quadrature, split at mu and nu.
Complex overlap_integral_quadrature(Orientation mu, Orientation nu, StepIndex step);

/// <S(a)|S(b)>, the normalized overlap of two plate-imprinted azimuthal states.
Complex spp_state_overlap(Orientation a, Orientation b, StepIndex step);

} // namespace oamch
