#include "oamch/azimuthal.hpp"

#include <array>
#include <cmath>
#include <string>

#include "oamch/errors.hpp"
#include "oamch/quadrature.hpp"

namespace oamch {

StepIndex::StepIndex(double value) : value_(value)
{
    if (!std::isfinite(value) || value <= 0.0) {
        throw InvalidArgument("step index must be finite and positive, got " + std::to_string(value));
    }
    const double l = value - 0.5;
    if (l >= 0.0 && l == std::floor(l) && l < 4.0e9) {
        half_integer_l_ = static_cast<unsigned>(l);
    }
}

StepIndex StepIndex::half_integer(unsigned l)
{
    return StepIndex(static_cast<double>(l) + 0.5);
}

Orientation wrap_angle(double raw)
{
    if (!std::isfinite(raw)) throw InvalidArgument("angle must be finite");
    double r = std::fmod(raw, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // -tiny + 2pi rounds to 2pi
    if (r >= kTwoPi) r = 0.0;
    return Orientation(r);
}

Orientation Orientation::opposite() const
{
    return wrap_angle(angle_ + kPi);
}

Complex spp_phase(Orientation chi, double phi, StepIndex step)
{
    const double l = step.value();
    Complex phase = std::polar(1.0, l * (phi - chi.angle()));
    if (phi < chi.angle()) phase *= std::polar(1.0, kTwoPi * l);
    return phase;
}

Complex overlap_integral(Orientation mu, Orientation nu, StepIndex step)
{
    if (mu.angle() < nu.angle()) return std::conj(overlap_integral(nu, mu, step));
    const double l = step.value();
    const double gap = mu.angle() - nu.angle();
    // The two plates disagree by the 2pi*L step on [nu, mu) only.
    const Complex jump = 1.0 - std::polar(1.0, kTwoPi * l);
    return std::polar(1.0, -l * gap) * (kTwoPi - jump * gap);
}

Complex overlap_integral_quadrature(Orientation mu, Orientation nu, StepIndex step)
{
    const std::array<double, 2> breaks{mu.angle(), nu.angle()};
    return quadrature::integrate_piecewise(
        [&](double phi) { return spp_phase(mu, phi, step) * std::conj(spp_phase(nu, phi, step)); },
        0.0, kTwoPi, breaks);
}

Complex spp_state_overlap(Orientation a, Orientation b, StepIndex step)
{
    // bra is conjugated: integrand is conj(e^{i f(a)}) e^{i f(b)}
    return overlap_integral(b, a, step) / kTwoPi;
}

} // namespace oamch
