#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "oamch/ch_test.hpp"
#include "oamch/coincidence.hpp"

namespace oamch {

/// Counting-run parameters. Detector losses are modelled as one uniform,
/// setting-independent Bernoulli thinning of each pair with probability
/// efficiency_a * efficiency_b of being recorded.
struct McConfig {
    std::uint64_t trials = 100000;
    double efficiency_a = 1.0;
    double efficiency_b = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Which of the four splitter combinations a run used.
enum class SettingLabel : std::uint8_t { ab = 0, ab_prime = 1, a_prime_b = 2, a_prime_b_prime = 3 };

std::string_view label_name(SettingLabel label);

using CountMatrix = std::array<std::array<std::uint64_t, 2>, 2>;

struct CountRecord {
    SettingLabel label = SettingLabel::ab;
    CountMatrix n{};
    std::uint64_t trials = 0;
    std::uint64_t no_coincidence = 0;

    std::uint64_t coincidences() const { return n[0][0] + n[0][1] + n[1][0] + n[1][1]; }
    friend bool operator==(const CountRecord&, const CountRecord&) = default;
};

/// Estimated CH parameter with its first-order (delta method) standard error.
/// Pooled terms follow the CH combination: joint[k] from run k, marginals and
/// total pooled over the runs that share the relevant setting.
struct ChEstimate {
    double s_hat = 0.0;
    double std_error = 0.0;
    std::array<RealMatrix2x2, 4> frequencies{};
    std::array<double, 4> joint{};
    double marg_a_prime = 0.0;
    double marg_b = 0.0;
    double total = 0.0;
};

/// Draws `mc.trials` pairs for one setting. The random stream is selected by
/// (mc.seed, label), so the four runs of an experiment are independent and
/// each is reproducible on its own.
CountRecord sample_run(const ExperimentSettings& settings, const McConfig& mc,
                       SettingLabel label = SettingLabel::ab);

namespace serial {
CountRecord sample_run(const ExperimentSettings& settings, const McConfig& mc, SettingLabel label = SettingLabel::ab);
}

/// The four runs (a,b), (a,b'), (a',b), (a',b') of a CH experiment.
std::array<CountRecord, 4> sample_ch_runs(const ChSettings& cfg, const McConfig& mc);

/// F_ij = N_ij / trials. Throws InvalidArgument for zero trials.
RealMatrix2x2 frequency(const CountRecord& rec);

/// Throws InvalidArgument if the runs are not labelled (a,b), (a,b'), (a',b),
/// (a',b') in that order, InsufficientStatistics if no coincidence was seen.
ChEstimate estimate_S(const std::array<CountRecord, 4>& runs);

} // namespace oamch
