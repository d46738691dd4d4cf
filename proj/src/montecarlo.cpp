#include "oamch/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "oamch/errors.hpp"
#include "oamch/kernels.hpp"

namespace oamch {

namespace {

constexpr std::array<SettingLabel, 4> kRunOrder{SettingLabel::ab, SettingLabel::ab_prime, SettingLabel::a_prime_b,
                                                SettingLabel::a_prime_b_prime};

OutcomeThresholds thresholds_for(const ExperimentSettings& settings, const McConfig& mc)
{
    const auto m = amplitude_matrix(settings);
    const double total = m.total();
    if (!(total > 0.0)) throw DegenerateState("no coincidence probability for this setting");
    const double eta = mc.efficiency_a * mc.efficiency_b;
    OutcomeThresholds th{};
    double cumulative = 0.0;
    const std::array<double, 4> p{m.p[0][0], m.p[0][1], m.p[1][0], m.p[1][1]};
    for (std::size_t k = 0; k < 4; ++k) {
        cumulative += p[k];
        th[k] = eta * cumulative / total;
    }
    return th;
}

CountRecord to_record(const OutcomeCounts& counts, const McConfig& mc, SettingLabel label)
{
    CountRecord rec;
    rec.label = label;
    rec.n = {{{counts[0], counts[1]}, {counts[2], counts[3]}}};
    rec.trials = mc.trials;
    rec.no_coincidence = counts[4];
    return rec;
}

ExperimentSettings run_settings(const ChSettings& cfg, SettingLabel label)
{
    const auto& q = cfg.thetas;
    const bool a_prime = label == SettingLabel::a_prime_b || label == SettingLabel::a_prime_b_prime;
    const bool b_prime = label == SettingLabel::ab_prime || label == SettingLabel::a_prime_b_prime;
    ExperimentSettings s;
    s.alpha = cfg.alpha;
    s.beta = cfg.beta;
    s.theta_a = BeamSplitterAngle(a_prime ? q.theta_a_prime : q.theta_a);
    s.theta_b = BeamSplitterAngle(b_prime ? q.theta_b_prime : q.theta_b);
    s.step_index = cfg.step_index;
    return s;
}

} // namespace

void McConfig::validate() const
{
    if (trials < 1) throw InvalidArgument("trials must be at least 1");
    if (!(efficiency_a > 0.0 && efficiency_a <= 1.0) || !(efficiency_b > 0.0 && efficiency_b <= 1.0)) {
        throw InvalidArgument("detector efficiencies must lie in (0, 1]");
    }
}

std::string_view label_name(SettingLabel label)
{
    switch (label) {
    case SettingLabel::ab: return "a,b";
    case SettingLabel::ab_prime: return "a,b'";
    case SettingLabel::a_prime_b: return "a',b";
    case SettingLabel::a_prime_b_prime: return "a',b'";
    }
    return "?";
}

CountRecord sample_run(const ExperimentSettings& settings, const McConfig& mc, SettingLabel label)
{
    mc.validate();
    const CounterRng rng(mc.seed, static_cast<std::uint64_t>(label));
    return to_record(parallel::count_outcomes(thresholds_for(settings, mc), rng, mc.trials), mc, label);
}

namespace serial {

CountRecord sample_run(const ExperimentSettings& settings, const McConfig& mc, SettingLabel label)
{
    mc.validate();
    const CounterRng rng(mc.seed, static_cast<std::uint64_t>(label));
    return to_record(serial::count_outcomes(thresholds_for(settings, mc), rng, mc.trials), mc, label);
}

} // namespace serial

std::array<CountRecord, 4> sample_ch_runs(const ChSettings& cfg, const McConfig& mc)
{
    std::array<CountRecord, 4> runs;
    for (std::size_t k = 0; k < 4; ++k) runs[k] = sample_run(run_settings(cfg, kRunOrder[k]), mc, kRunOrder[k]);
    return runs;
}

RealMatrix2x2 frequency(const CountRecord& rec)
{
    if (rec.trials == 0) throw InvalidArgument("frequency of a run with zero trials");
    const double n = static_cast<double>(rec.trials);
    RealMatrix2x2 f{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) f[i][j] = static_cast<double>(rec.n[i][j]) / n;
    }
    return f;
}

ChEstimate estimate_S(const std::array<CountRecord, 4>& runs)
{
    for (std::size_t k = 0; k < 4; ++k) {
        if (runs[k].label != kRunOrder[k]) {
            throw InvalidArgument("runs must be ordered (a,b), (a,b'), (a',b), (a',b')");
        }
        if (runs[k].trials == 0) throw InvalidArgument("run with zero trials");
    }

    ChEstimate est;
    std::array<double, 4> trials{};
    std::uint64_t all_trials = 0;
    std::uint64_t all_coincidences = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        est.frequencies[k] = frequency(runs[k]);
        est.joint[k] = est.frequencies[k][0][0];
        trials[k] = static_cast<double>(runs[k].trials);
        all_trials += runs[k].trials;
        all_coincidences += runs[k].coincidences();
    }
    if (all_coincidences == 0) throw InsufficientStatistics("no coincidences recorded in any run");

    // P(a', inf) pooled over the two a' runs, P(inf, b) over the two b runs.
    const auto& r0 = runs[0];
    const auto& r2 = runs[2];
    const auto& r3 = runs[3];
    const double trials_a_prime = trials[2] + trials[3];
    const double trials_b = trials[0] + trials[2];
    const double total_trials = static_cast<double>(all_trials);
    est.marg_a_prime = static_cast<double>(r2.n[0][0] + r2.n[0][1] + r3.n[0][0] + r3.n[0][1]) / trials_a_prime;
    est.marg_b = static_cast<double>(r0.n[0][0] + r0.n[1][0] + r2.n[0][0] + r2.n[1][0]) / trials_b;
    est.total = static_cast<double>(all_coincidences) / total_trials;
    est.s_hat = ch_combination(est.joint, est.marg_a_prime, est.marg_b, est.total);

    // Delta method: gradient of S with respect to each run's counts, combined
    // with the multinomial covariance of that run.
    constexpr std::array<double, 4> joint_sign{1.0, -1.0, 1.0, 1.0};
    double variance = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const bool is_a_prime = k == 2 || k == 3;
        const bool is_b = k == 0 || k == 2;
        // categories 11, 12, 21, 22 (no-coincidence has zero gradient)
        std::array<double, 4> dnum{};
        dnum[0] += joint_sign[k] / trials[k];
        if (is_a_prime) {
            dnum[0] -= 1.0 / trials_a_prime;
            dnum[1] -= 1.0 / trials_a_prime;
        }
        if (is_b) {
            dnum[0] -= 1.0 / trials_b;
            dnum[2] -= 1.0 / trials_b;
        }
        const std::array<double, 4> p{static_cast<double>(runs[k].n[0][0]) / trials[k],
                                      static_cast<double>(runs[k].n[0][1]) / trials[k],
                                      static_cast<double>(runs[k].n[1][0]) / trials[k],
                                      static_cast<double>(runs[k].n[1][1]) / trials[k]};
        double mean = 0.0;
        double second = 0.0;
        for (std::size_t c = 0; c < 4; ++c) {
            const double h = (dnum[c] - est.s_hat / total_trials) / est.total;
            mean += h * p[c];
            second += h * h * p[c];
        }
        variance += trials[k] * (second - mean * mean);
    }
    est.std_error = std::sqrt(std::max(variance, 0.0));
    return est;
}

} // namespace oamch
