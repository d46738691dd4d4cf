#pragma once

#include <array>

#include "oamch/coincidence.hpp"

namespace oamch {

/// Alice's two splitter angles and Bob's two.
struct ThetaQuad {
    double theta_a = 0.0;
    double theta_a_prime = 0.0;
    double theta_b = 0.0;
    double theta_b_prime = 0.0;

    friend bool operator==(const ThetaQuad&, const ThetaQuad&) = default;
};

struct ChSettings {
    ThetaQuad thetas;
    Orientation alpha;
    Orientation beta;
    StepIndex step_index = StepIndex::half_integer(0);
};

/// The six unnormalized probabilities entering S, and S itself.
/// p_joint is ordered (a,b), (a,b'), (a',b), (a',b').
struct ChResult {
    double s = 0.0;
    std::array<double, 4> p_joint{};
    double p_marg_a = 0.0; // P(theta_a', inf)
    double p_marg_b = 0.0; // P(inf, theta_b)
    double p_total = 0.0;  // P(inf, inf)
};

enum class ProbabilityPath { analytic, quadrature, closed_form };

struct Marginals {
    double a = 0.0;     // P(theta_a, inf) = p11 + p12
    double b = 0.0;     // P(inf, theta_b) = p11 + p21
    double total = 0.0; // P(inf, inf)
};

Marginals marginal_probabilities(const ExperimentSettings& settings);

/// CH combination of six probabilities:
/// [P(a,b) - P(a,b') + P(a',b) + P(a',b') - P(a',inf) - P(inf,b)] / P(inf,inf).
double ch_combination(const std::array<double, 4>& joint, double marg_a_prime, double marg_b, double total);

ChResult ch_parameter(const ChSettings& cfg, ProbabilityPath path = ProbabilityPath::analytic);

/// theta_a = 0, theta_a' = pi/4, theta_b = pi/8, theta_b' = 3pi/8, beta = alpha.
ChSettings canonical_settings(Orientation alpha, StepIndex step = StepIndex::half_integer(0));

struct ViolationVerdict {
    bool violated = false;
    double margin = 0.0; // S itself; local theories require S <= 0
};

ViolationVerdict ch_violated(const ChResult& r);

/// Analytic S for a fixed plate pair, reusing the plate overlaps across
/// splitter settings. This is what the optimizer and grid kernels call.
class ChEvaluator {
public:
    ChEvaluator(Orientation alpha, Orientation beta, StepIndex step);

    AmplitudeMatrix amplitudes(double theta_a, double theta_b) const;
    ChResult evaluate(const ThetaQuad& q) const;
    double s(const ThetaQuad& q) const { return evaluate(q).s; }

private:
    PlateOverlaps overlaps_;
};

} // namespace oamch
