#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oamch/azimuthal.hpp"

namespace oamch {

/// Oracle suites comparing the analytic paths against direct quadrature.
struct ValidationOptions {
    int samples = 500;
    std::uint64_t seed = 20240601;
    /// Swap the library overlap integral for the opposite exponent sign.
    /// Exists so the suites can be shown to detect that error.
    bool flip_integral_sign = false;
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;     // worst discrepancy of the checked path
    double tolerance = 0.0; // pass iff worst < tolerance
    int samples = 0;
    std::string detail;
};

/// "azimuthal", "sign", "coincidence", "appendix-a", in run order.
std::span<const std::string_view> suite_names();

/// Overlap integral with the exponent sign e^{+iL(mu-nu)}; the rejected variant.
Complex overlap_integral_opposite_sign(Orientation mu, Orientation nu, StepIndex step);

/// Throws InvalidArgument for an unknown suite name or samples < 1.
SuiteResult run_suite(std::string_view name, const ValidationOptions& opts = {});

/// Runs the named suites in the given order; an empty list runs all suites.
std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, const ValidationOptions& opts = {});

} // namespace oamch
