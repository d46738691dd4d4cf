#include "oamch/kernels.hpp"

#include <algorithm>

#include "oamch/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace oamch {

namespace {

struct RowCells {
    double joint;
    double marg_a;
    double marg_b;
    double total;
};

RowCells cell(const ChEvaluator& eval, double ta, double tb)
{
    const auto m = eval.amplitudes(ta, tb);
    return {m.p[0][0], m.p[0][0] + m.p[0][1], m.p[0][0] + m.p[1][0], m.total()};
}

ThetaTable empty_table(std::span<const double> angles)
{
    ThetaTable t;
    const std::size_t n = angles.size();
    t.angles.assign(angles.begin(), angles.end());
    t.joint.assign(n * n, 0.0);
    t.marg_a.assign(n, 0.0);
    t.marg_b.assign(n, 0.0);
    return t;
}

void fill_row(const ChEvaluator& eval, ThetaTable& t, std::size_t i)
{
    const std::size_t n = t.angles.size();
    for (std::size_t j = 0; j < n; ++j) {
        const RowCells c = cell(eval, t.angles[i], t.angles[j]);
        t.joint[i * n + j] = c.joint;
        if (j == 0) t.marg_a[i] = c.marg_a;
        if (i == 0) t.marg_b[j] = c.marg_b;
        if (i == 0 && j == 0) t.total = c.total;
    }
}

// Best S with first index fixed to `a`; ties keep the lexicographically
// smallest (a', b, b').
TableOptimum best_for_first(const ThetaTable& t, std::size_t a)
{
    const std::size_t n = t.size();
    TableOptimum best;
    bool have = false;
    for (std::size_t ap = 0; ap < n; ++ap) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t bp = 0; bp < n; ++bp) {
                const double s = ch_combination({t.at(a, b), t.at(a, bp), t.at(ap, b), t.at(ap, bp)}, t.marg_a[ap],
                                                t.marg_b[b], t.total);
                if (!have || s > best.s) {
                    best = {{a, ap, b, bp}, s};
                    have = true;
                }
            }
        }
    }
    return best;
}

TableOptimum reduce(const std::vector<TableOptimum>& per_first)
{
    if (per_first.empty()) throw InvalidArgument("theta table is empty");
    TableOptimum best = per_first.front();
    for (const auto& candidate : per_first) {
        if (candidate.s > best.s) best = candidate;
    }
    return best;
}

std::size_t slot_of(const OutcomeThresholds& th, double u)
{
    std::size_t k = 0;
    while (k < th.size() && u >= th[k]) ++k;
    return k;
}

} // namespace

int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace serial {

ThetaTable theta_table(const ChEvaluator& eval, std::span<const double> angles)
{
    ThetaTable t = empty_table(angles);
    for (std::size_t i = 0; i < t.size(); ++i) fill_row(eval, t, i);
    return t;
}

TableOptimum best_on_table(const ThetaTable& table)
{
    std::vector<TableOptimum> per_first;
    for (std::size_t a = 0; a < table.size(); ++a) per_first.push_back(best_for_first(table, a));
    return reduce(per_first);
}

OutcomeCounts count_outcomes(const OutcomeThresholds& thresholds, const CounterRng& rng, std::uint64_t trials)
{
    OutcomeCounts counts{};
    for (std::uint64_t k = 0; k < trials; ++k) ++counts[slot_of(thresholds, rng.uniform(k))];
    return counts;
}

} // namespace serial

namespace parallel {

ThetaTable theta_table(const ChEvaluator& eval, std::span<const double> angles)
{
    ThetaTable t = empty_table(angles);
    const auto n = static_cast<std::ptrdiff_t>(t.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) fill_row(eval, t, static_cast<std::size_t>(i));
    return t;
}

TableOptimum best_on_table(const ThetaTable& table)
{
    const auto n = static_cast<std::ptrdiff_t>(table.size());
    std::vector<TableOptimum> per_first(table.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t a = 0; a < n; ++a) {
        per_first[static_cast<std::size_t>(a)] = best_for_first(table, static_cast<std::size_t>(a));
    }
    return reduce(per_first);
}

OutcomeCounts count_outcomes(const OutcomeThresholds& thresholds, const CounterRng& rng, std::uint64_t trials)
{
    const std::uint64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<OutcomeCounts> per_block(blocks);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        const std::uint64_t begin = static_cast<std::uint64_t>(b) * kTrialBlock;
        const std::uint64_t end = std::min(trials, begin + kTrialBlock);
        OutcomeCounts local{};
        for (std::uint64_t k = begin; k < end; ++k) ++local[slot_of(thresholds, rng.uniform(k))];
        per_block[static_cast<std::size_t>(b)] = local;
    }
    OutcomeCounts counts{};
    for (const auto& block : per_block) {
        for (std::size_t s = 0; s < counts.size(); ++s) counts[s] += block[s];
    }
    return counts;
}

} // namespace parallel

} // namespace oamch
