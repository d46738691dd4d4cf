#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace oamch::quadrature {

struct GaussLegendreRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

/// Nodes and weights of the n-point Gauss-Legendre rule, computed by Newton
/// iteration on P_n. Results are cached per order.
const GaussLegendreRule& gauss_legendre(std::size_t order);

inline constexpr std::size_t kDefaultOrder = 64;

/// Integrates `fn` over [lo, hi] with one fixed-order rule per smooth piece.
/// `breaks` may be unsorted and may contain points outside [lo, hi]; those are
/// ignored.
template <class Fn>
auto integrate_piecewise(Fn&& fn, double lo, double hi, std::span<const double> breaks,
                         std::size_t order = kDefaultOrder)
{
    std::vector<double> cuts{lo, hi};
    for (double b : breaks) {
        if (b > lo && b < hi) cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const auto& rule = gauss_legendre(order);
    using Result = decltype(fn(lo));
    Result total{};
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
        const double half = 0.5 * (cuts[s + 1] - cuts[s]);
        Result segment{};
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            segment += rule.weights[k] * fn(mid + half * rule.nodes[k]);
        }
        total += half * segment;
    }
    return total;
}

} // namespace oamch::quadrature
