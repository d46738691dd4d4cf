#include <doctest.h>

#include <cmath>

#include "oamch/errors.hpp"
#include "oamch/interferometer.hpp"
#include "oracles.hpp"

using namespace oamch;

namespace {

double max_entry_diff(const Matrix2& a, const Matrix2& b)
{
    return std::max({std::abs(a.u11 - b.u11), std::abs(a.u12 - b.u12), std::abs(a.u21 - b.u21),
                     std::abs(a.u22 - b.u22)});
}

MzConfig random_config(std::mt19937_64& g)
{
    MzConfig cfg;
    cfg.plate_orientation = wrap_angle(oracle::uniform(g, 0.0, kTwoPi));
    cfg.theta = BeamSplitterAngle(oracle::uniform(g, 0.0, kTwoPi));
    cfg.aux_phase_1 = oracle::uniform(g, -kPi, kPi);
    cfg.aux_phase_2 = oracle::uniform(g, -kPi, kPi);
    cfg.conjugate_plates = oracle::uniform(g, 0.0, 1.0) < 0.5;
    cfg.step_index = StepIndex::half_integer(static_cast<unsigned>(oracle::uniform(g, 0.0, 4.0)));
    return cfg;
}

} // namespace

TEST_CASE("beam splitter coefficients")
{
    for (double theta : {0.0, 0.3, kPi / 4, 2.0, 5.5}) {
        const BeamSplitterAngle b(theta);
        CHECK(std::norm(b.transmission()) + std::norm(b.reflection()) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(b.reflection().real() == 0.0);
    }
}

TEST_CASE("rotation_matrix examples")
{
    CHECK(max_entry_diff(rotation_matrix(BeamSplitterAngle(0.0)), Matrix2::identity()) == 0.0);
    const double h = 1.0 / std::sqrt(2.0);
    CHECK(max_entry_diff(rotation_matrix(BeamSplitterAngle(kPi / 4)), Matrix2{h, -h, h, h}) < 1e-15);
    CHECK(max_entry_diff(rotation_matrix(BeamSplitterAngle(kPi / 2)), Matrix2{0.0, -1.0, 1.0, 0.0}) < 1e-15);
}

TEST_CASE("mz_unitary examples")
{
    CHECK(max_entry_diff(mz_unitary(BeamSplitterAngle(kPi / 6), 0.0, 0.0), rotation_matrix(BeamSplitterAngle(kPi / 6))) ==
          0.0);
    CHECK(max_entry_diff(mz_unitary(BeamSplitterAngle(0.0), kPi, 0.0), Matrix2{-1.0, 0.0, 0.0, 1.0}) < 1e-15);

    auto g = oracle::rng(5);
    for (int k = 0; k < 1000; ++k) {
        const Matrix2 u = mz_unitary(BeamSplitterAngle(oracle::uniform(g, 0.0, kTwoPi)),
                                     oracle::uniform(g, -10.0, 10.0), oracle::uniform(g, -10.0, 10.0));
        REQUIRE(unitarity_defect(u) < 1e-12);
    }
}

TEST_CASE("Matrix2::at rejects bad indices")
{
    CHECK_THROWS_AS(Matrix2::identity().at(0, 1), InvalidArgument);
    CHECK_THROWS_AS(Matrix2::identity().at(1, 3), InvalidArgument);
}

TEST_CASE("arm_amplitude examples")
{
    MzConfig cfg;
    cfg.plate_orientation = wrap_angle(0.8);
    cfg.step_index = StepIndex(1.5);
    const double s2 = std::sqrt(2.0);
    for (double phi : {0.1, 0.8, 2.0, 4.5, 6.2}) {
        CHECK(std::abs(arm_amplitude(cfg, 1, phi) - oracle::plate(0.8, phi, 1.5) / s2) < 1e-15);
    }
    cfg.conjugate_plates = true;
    for (double phi : {0.1, 0.8, 2.0, 4.5, 6.2}) {
        CHECK(std::abs(arm_amplitude(cfg, 1, phi) - std::conj(oracle::plate(0.8, phi, 1.5)) / s2) < 1e-15);
    }
    CHECK_THROWS_AS(arm_amplitude(cfg, 0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(arm_amplitude(cfg, 3, 1.0), InvalidArgument);
}

TEST_CASE("arm norm is conserved")
{
    auto g = oracle::rng(99);
    for (int k = 0; k < 2000; ++k) {
        const MzConfig cfg = random_config(g);
        const double phi = oracle::uniform(g, 0.0, kTwoPi);
        const double norm = std::norm(arm_amplitude(cfg, 1, phi)) + std::norm(arm_amplitude(cfg, 2, phi));
        REQUIRE(std::abs(norm - 1.0) < 1e-12);
    }
}

TEST_CASE("theta periodicity and quarter-turn column swap")
{
    auto g = oracle::rng(17);
    for (int k = 0; k < 200; ++k) {
        MzConfig cfg = random_config(g);
        cfg.aux_phase_1 = cfg.aux_phase_2 = 0.0;
        const double theta = cfg.theta.theta();
        const double phi = oracle::uniform(g, 0.0, kTwoPi);
        MzConfig shifted = cfg;
        shifted.theta = BeamSplitterAngle(theta + kTwoPi);
        for (int arm : {1, 2}) {
            REQUIRE(std::abs(arm_amplitude(cfg, arm, phi) - arm_amplitude(shifted, arm, phi)) < 1e-14);
        }

        MzConfig zero = cfg;
        zero.theta = BeamSplitterAngle(0.0);
        MzConfig quarter = cfg;
        quarter.theta = BeamSplitterAngle(kPi / 2);
        REQUIRE(std::abs(arm_amplitude(quarter, 1, phi) + arm_amplitude(zero, 2, phi)) < 1e-15);
    }
}

TEST_CASE("second plate is always half a turn away")
{
    MzConfig cfg;
    cfg.plate_orientation = wrap_angle(5.0);
    CHECK(cfg.second_plate().angle() == doctest::Approx(5.0 + kPi - kTwoPi).epsilon(1e-15));
}
