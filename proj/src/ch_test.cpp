#include "oamch/ch_test.hpp"

#include <cmath>

#include "oamch/errors.hpp"

namespace oamch {

namespace {

// The three probabilities a single (theta_a, theta_b) run contributes.
struct RunProbabilities {
    double joint;
    double marg_a;
    double marg_b;
    double total;
};

RunProbabilities from_matrix(const AmplitudeMatrix& m)
{
    return {m.p[0][0], m.p[0][0] + m.p[0][1], m.p[0][0] + m.p[1][0], m.total()};
}

RunProbabilities run_probabilities(const ChSettings& cfg, double theta_a, double theta_b, ProbabilityPath path)
{
    ExperimentSettings s;
    s.alpha = cfg.alpha;
    s.beta = cfg.beta;
    s.theta_a = BeamSplitterAngle(theta_a);
    s.theta_b = BeamSplitterAngle(theta_b);
    s.step_index = cfg.step_index;
    switch (path) {
    case ProbabilityPath::analytic:
        return from_matrix(amplitude_matrix(s));
    case ProbabilityPath::quadrature:
        return from_matrix(amplitude_matrix_quadrature(s));
    case ProbabilityPath::closed_form: {
        const auto cf = closed_form_probabilities(s);
        return {cf.joint, cf.marginal_a, cf.marginal_b, cf.total};
    }
    }
    throw InvalidArgument("unknown probability path");
}

ChResult assemble(const std::array<RunProbabilities, 4>& runs)
{
    // runs: (a,b), (a,b'), (a',b), (a',b')
    ChResult r;
    for (std::size_t k = 0; k < 4; ++k) r.p_joint[k] = runs[k].joint;
    r.p_marg_a = runs[2].marg_a;
    r.p_marg_b = runs[0].marg_b;
    r.p_total = runs[0].total;
    r.s = ch_combination(r.p_joint, r.p_marg_a, r.p_marg_b, r.p_total);
    return r;
}

} // namespace

Marginals marginal_probabilities(const ExperimentSettings& settings)
{
    const auto m = amplitude_matrix(settings);
    return {m.p[0][0] + m.p[0][1], m.p[0][0] + m.p[1][0], m.total()};
}

double ch_combination(const std::array<double, 4>& joint, double marg_a_prime, double marg_b, double total)
{
    return (joint[0] - joint[1] + joint[2] + joint[3] - marg_a_prime - marg_b) / total;
}

ChResult ch_parameter(const ChSettings& cfg, ProbabilityPath path)
{
    const auto& q = cfg.thetas;
    for (double t : {q.theta_a, q.theta_a_prime, q.theta_b, q.theta_b_prime}) {
        if (!std::isfinite(t)) throw InvalidArgument("splitter angles must be finite");
    }
    return assemble({run_probabilities(cfg, q.theta_a, q.theta_b, path),
                     run_probabilities(cfg, q.theta_a, q.theta_b_prime, path),
                     run_probabilities(cfg, q.theta_a_prime, q.theta_b, path),
                     run_probabilities(cfg, q.theta_a_prime, q.theta_b_prime, path)});
}

ChSettings canonical_settings(Orientation alpha, StepIndex step)
{
    ChSettings cfg;
    cfg.thetas = {0.0, kPi / 4.0, kPi / 8.0, 3.0 * kPi / 8.0};
    cfg.alpha = alpha;
    cfg.beta = alpha;
    cfg.step_index = step;
    return cfg;
}

ViolationVerdict ch_violated(const ChResult& r)
{
    return {r.s > 0.0, r.s};
}

ChEvaluator::ChEvaluator(Orientation alpha, Orientation beta, StepIndex step)
    : overlaps_(PlateOverlaps::compute(alpha, beta, step))
{
}

AmplitudeMatrix ChEvaluator::amplitudes(double theta_a, double theta_b) const
{
    return amplitude_matrix(overlaps_, rotation_matrix(BeamSplitterAngle(theta_a)),
                            rotation_matrix(BeamSplitterAngle(theta_b)));
}

ChResult ChEvaluator::evaluate(const ThetaQuad& q) const
{
    return assemble({from_matrix(amplitudes(q.theta_a, q.theta_b)),
                     from_matrix(amplitudes(q.theta_a, q.theta_b_prime)),
                     from_matrix(amplitudes(q.theta_a_prime, q.theta_b)),
                     from_matrix(amplitudes(q.theta_a_prime, q.theta_b_prime))});
}

} // namespace oamch
