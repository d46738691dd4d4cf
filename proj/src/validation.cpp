#include "oamch/validation.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>

#include "oamch/coincidence.hpp"
#include "oamch/errors.hpp"
#include "oamch/rng.hpp"

namespace oamch {

namespace {

constexpr std::array<std::string_view, 4> kSuites{"azimuthal", "sign", "coincidence", "appendix-a"};

constexpr double kOverlapTol = 1e-9;
constexpr double kAmplitudeTol = 1e-8;
constexpr double kClosedFormTol = 1e-8;
// The rejected sign must miss by at least this much for the sign suite to pass.
constexpr double kSignSeparation = 1e-3;

class Draws {
public:
    Draws(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(counter_++); }
    unsigned pick(unsigned n) { return static_cast<unsigned>(rng_.bits(counter_++) % n); }

private:
    CounterRng rng_;
    std::uint64_t counter_ = 0;
};

using OverlapFn = std::function<Complex(Orientation, Orientation, StepIndex)>;

OverlapFn library_overlap(const ValidationOptions& opts)
{
    if (opts.flip_integral_sign) return overlap_integral_opposite_sign;
    return overlap_integral;
}

double worst_overlap_error(const OverlapFn& fn, const ValidationOptions& opts, std::uint64_t stream)
{
    Draws d(opts.seed, stream);
    double worst = 0.0;
    for (int k = 0; k < opts.samples; ++k) {
        const auto mu = wrap_angle(d.uniform(0.0, kTwoPi));
        const auto nu = wrap_angle(d.uniform(0.0, kTwoPi));
        const auto step = StepIndex::half_integer(d.pick(4));
        worst = std::max(worst, std::abs(fn(mu, nu, step) - overlap_integral_quadrature(mu, nu, step)));
    }
    return worst;
}

SuiteResult azimuthal_suite(const ValidationOptions& opts)
{
    SuiteResult r{"azimuthal", false, worst_overlap_error(library_overlap(opts), opts, 1), kOverlapTol,
                  opts.samples, "overlap integral vs quadrature"};
    r.passed = r.worst < r.tolerance;
    return r;
}

SuiteResult sign_suite(const ValidationOptions& opts)
{
    const OverlapFn chosen = library_overlap(opts);
    const OverlapFn rejected = opts.flip_integral_sign ? OverlapFn(overlap_integral) : overlap_integral_opposite_sign;
    const double chosen_err = worst_overlap_error(chosen, opts, 2);
    const double rejected_err = worst_overlap_error(rejected, opts, 2);
    SuiteResult r{"sign", false, chosen_err, kOverlapTol, opts.samples, {}};
    r.passed = chosen_err < kOverlapTol && rejected_err > kSignSeparation;
    char buf[32];
    const auto end = std::to_chars(buf, buf + sizeof buf, rejected_err, std::chars_format::general, 6).ptr;
    r.detail = "rejected sign misses by " + std::string(buf, end);
    return r;
}

ExperimentSettings random_settings(Draws& d, bool aux, double delta)
{
    ExperimentSettings s;
    const double alpha = d.uniform(0.0, kTwoPi);
    s.alpha = wrap_angle(alpha);
    s.beta = wrap_angle(alpha - delta);
    s.theta_a = BeamSplitterAngle(d.uniform(0.0, kTwoPi));
    s.theta_b = BeamSplitterAngle(d.uniform(0.0, kTwoPi));
    s.step_index = StepIndex::half_integer(d.pick(3));
    if (aux) {
        for (auto& p : s.aux_phases) p = d.uniform(-kPi, kPi);
    }
    return s;
}

SuiteResult coincidence_suite(const ValidationOptions& opts)
{
    const OverlapFn fn = library_overlap(opts);
    Draws d(opts.seed, 3);
    double worst = 0.0;
    for (int k = 0; k < opts.samples; ++k) {
        const auto s = random_settings(d, k % 2 == 1, d.uniform(-kPi, kPi));
        const std::array<Orientation, 2> a{s.alpha, s.alpha.opposite()};
        const std::array<Orientation, 2> b{s.beta, s.beta.opposite()};
        PlateOverlaps ov;
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) ov.half_overlap[i][j] = 0.5 * fn(a[i], b[j], s.step_index);
        }
        const auto& ph = s.aux_phases;
        const auto analytic = amplitude_matrix(ov, mz_unitary(s.theta_a, ph[0], ph[1]), mz_unitary(s.theta_b, ph[2], ph[3]));
        const auto quad = amplitude_matrix_quadrature(s);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) worst = std::max(worst, std::abs(analytic.c[i][j] - quad.c[i][j]));
        }
    }
    SuiteResult r{"coincidence", worst < kAmplitudeTol, worst, kAmplitudeTol, opts.samples,
                  "amplitudes vs quadrature"};
    return r;
}

SuiteResult appendix_a_suite(const ValidationOptions& opts)
{
    Draws d(opts.seed, 4);
    double worst = 0.0;
    for (int k = 0; k < opts.samples; ++k) {
        // delta drawn from (-pi, pi]
        const double delta = -d.uniform(-kPi, kPi);
        const auto s = random_settings(d, false, delta);
        const auto cf = closed_form_probabilities(s);
        const auto q = amplitude_matrix_quadrature(s);
        const double total = q.total();
        const std::array<double, 4> ref{q.p[0][0], q.p[0][0] + q.p[0][1], q.p[0][0] + q.p[1][0], total};
        const std::array<double, 4> got{cf.joint, cf.marginal_a, cf.marginal_b, cf.total};
        for (std::size_t t = 0; t < 4; ++t) {
            // relative error, floored so an exact zero does not divide by zero
            const double scale = std::max(std::abs(ref[t]), 1e-12 * total);
            worst = std::max(worst, std::abs(got[t] - ref[t]) / scale);
        }
    }
    return SuiteResult{"appendix-a", worst < kClosedFormTol, worst, kClosedFormTol, opts.samples,
                       "closed-form probabilities vs quadrature (relative)"};
}

} // namespace

std::span<const std::string_view> suite_names() { return kSuites; }

Complex overlap_integral_opposite_sign(Orientation mu, Orientation nu, StepIndex step)
{
    if (mu.angle() < nu.angle()) return std::conj(overlap_integral_opposite_sign(nu, mu, step));
    const double gap = mu.angle() - nu.angle();
    const double l = step.value();
    return std::polar(1.0, l * gap) * (kTwoPi - (1.0 - std::polar(1.0, kTwoPi * l)) * gap);
}

SuiteResult run_suite(std::string_view name, const ValidationOptions& opts)
{
    if (opts.samples < 1) throw InvalidArgument("validation needs at least one sample");
    if (name == "azimuthal") return azimuthal_suite(opts);
    if (name == "sign") return sign_suite(opts);
    if (name == "coincidence") return coincidence_suite(opts);
    if (name == "appendix-a") return appendix_a_suite(opts);
    throw InvalidArgument("unknown validation suite: " + std::string(name));
}

std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, const ValidationOptions& opts)
{
    std::vector<std::string> chosen = names;
    if (chosen.empty()) chosen.assign(kSuites.begin(), kSuites.end());
    for (const auto& n : chosen) {
        if (std::find(kSuites.begin(), kSuites.end(), n) == kSuites.end()) {
            throw InvalidArgument("unknown validation suite: " + n);
        }
    }
    std::vector<SuiteResult> out;
    for (const auto& n : chosen) out.push_back(run_suite(n, opts));
    return out;
}

} // namespace oamch
