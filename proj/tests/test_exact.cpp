#include <gtest/gtest.h>

#include <salpeter/evolve.hpp>
#include <salpeter/exact.hpp>
#include <salpeter/observables.hpp>
#include <salpeter/quadrature.hpp>

#include <cmath>
#include <limits>
#include <numbers>

using namespace salpeter;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

const Grid1D wide(4096, 400.0, -200.0);

} // namespace

TEST(Lorentzian, PointValues)
{
    const auto origin = lorentzian_massless(0.0, 0.0, 1.0);
    EXPECT_NEAR(origin.psi.real(), std::sqrt(2.0 / pi), 1e-15);
    EXPECT_NEAR(origin.rho, 2.0 / pi, 1e-15);
    EXPECT_EQ(origin.j, 0.0);
    const auto mover = lorentzian_massless(1.0, 1.0, 1.0, Mover::plus);
    EXPECT_NEAR(mover.rho, 1.0 / pi, 1e-15);
    EXPECT_NEAR(mover.j, 1.0 / pi, 1e-15);
    EXPECT_EQ(lorentzian_massless(0.0, 2.0, 1.0).j, 0.0);
    for (double x : {-3.0, 0.1, 7.0}) EXPECT_EQ(lorentzian_massless(x, 0.0, 1.0).j, 0.0);
    EXPECT_THROW(lorentzian_massless(0.0, 0.0, 0.0), std::invalid_argument);
}

TEST(Lorentzian, NormalizedAndConsistent)
{
    for (double t : {0.0, 1.0, 4.0}) {
        const double total = integrate_adaptive([t](double x) { return lorentzian_massless(x, t, 1.0).rho; }, -inf, inf);
        EXPECT_NEAR(total, 1.0, 1e-8) << t;
    }
    for (double x : {-2.0, 0.3, 1.5})
        for (double t : {0.0, 0.5, 2.0}) {
            const auto v = lorentzian_massless(x, t, 1.3);
            EXPECT_NEAR(v.rho, std::norm(v.psi), 1e-15);
            EXPECT_GE(v.rho, 0.0);
        }
}

TEST(Lorentzian, CurrentSatisfiesContinuity)
{
    const double h = 1e-4;
    for (double x : {-2.0, 0.0, 0.7, 3.0})
        for (double t : {1e-7, 0.5, 2.0}) {
            const double drho = (lorentzian_massless(x, t + h, 1.0).rho - lorentzian_massless(x, t - h, 1.0).rho) / (2 * h);
            const double dj = (lorentzian_massless(x + h, t, 1.0).j - lorentzian_massless(x - h, t, 1.0).j) / (2 * h);
            EXPECT_NEAR(drho + dj, 0.0, 1e-8) << x << " " << t;
        }
}

TEST(Lorentzian, MoversTranslateRigidly)
{
    for (double x : {-1.0, 0.0, 2.5})
        for (double t : {0.5, 3.0}) {
            EXPECT_EQ(lorentzian_massless(x, t, 1.0, Mover::plus).rho, lorentzian_massless(x - t, 0.0, 1.0, Mover::plus).rho);
            EXPECT_EQ(lorentzian_massless(x, t, 1.0, Mover::minus).rho, lorentzian_massless(x + t, 0.0, 1.0, Mover::minus).rho);
            EXPECT_EQ(lorentzian_massless(x, t, 1.0, Mover::minus).j, -lorentzian_massless(x, t, 1.0, Mover::minus).rho);
        }
}

TEST(Lorentzian, PeriodicFormApproachesOpenForm)
{
    for (double length : {100.0, 1000.0, 10000.0}) {
        const cplx periodic = lorentzian_massless_periodic(0.4, 1.0, 1.0, length);
        const cplx open = lorentzian_massless(0.4, 1.0, 1.0).psi;
        EXPECT_LE(std::abs(periodic - open), 10.0 / (length * length)) << length;
    }
}

TEST(Massive, PointValueAndMasslessLimit)
{
    const auto k = PhysicalConstants::natural(0.5);
    const double want = std::sqrt(0.5 / (pi * 0.60190723019723457)) * 1.65644112000330089;
    EXPECT_NEAR(std::abs(massive_packet(0.0, 0.0, 1.0, k)), want, 1e-14);
    const cplx tiny = massive_packet(1.0, 2.0, 1.0, PhysicalConstants::natural(1e-6));
    const cplx massless = lorentzian_massless(1.0, 2.0, 1.0).psi;
    EXPECT_LE(std::abs(tiny - massless) / std::abs(massless), 1e-5);
}

TEST(Massive, NormalizedMomentumProfile)
{
    const auto k = PhysicalConstants::natural(0.5);
    const double total = integrate_adaptive([&](double p) { return std::norm(massive_packet_momentum(p, 1.0, 1.0, k)); }, -inf, inf);
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Massive, SatisfiesSalpeterEquationOnTheGrid)
{
    // i d_t psi = T psi with T spectral and a centered time difference.
    const auto k = PhysicalConstants::natural(0.5);
    const double t = 1.0, dt = 1e-4;
    auto at = [&](double s) { return sample(wide, [&](double x) { return massive_packet(x, s, 1.0, k); }, s); };
    const auto now = at(t), after = at(t + dt), before = at(t - dt);
    const auto tpsi = apply_sqrt_spectral(now, k);
    double residual = 0.0;
    for (std::size_t i = 0; i < wide.size(); ++i) {
        const cplx lhs = cplx(0.0, 1.0) * (after.samples[i] - before.samples[i]) / (2.0 * dt);
        residual += std::norm(lhs - tpsi.samples[i]) * wide.dx();
    }
    EXPECT_LE(std::sqrt(residual), 1e-5);
}

TEST(Massive, CurrentValues)
{
    const auto k = PhysicalConstants::natural(0.5);
    EXPECT_EQ(massive_packet_current(0.0, 1.3, 1.0, k), 0.0);
    for (double x : {-2.0, 0.5, 3.0}) EXPECT_NEAR(massive_packet_current(x, 0.0, 1.0, k), 0.0, 1e-14);

    const auto phi = sample_momentum(wide, [&](double p) { return massive_packet_momentum(p, 1.0, 1.0, k); }, 1.0);
    const std::vector<double> xs{1.0};
    const double spectral = current_spectral_1d(phi, k, xs).values[0];
    EXPECT_NEAR(massive_packet_current(1.0, 1.0, 1.0, k), spectral, 1e-3);
}

TEST(Massive, SweepMatchesPointwiseQuadrature)
{
    const auto k = PhysicalConstants::natural(0.5);
    const std::vector<double> xs{-6.0, -1.0, -0.25, 0.0, 0.4, 2.0, 9.0};
    const auto sweep = massive_packet_current_sweep(xs, 2.0, 1.0, k);
    for (std::size_t i = 0; i < xs.size(); ++i)
        EXPECT_NEAR(sweep[i], massive_packet_current(xs[i], 2.0, 1.0, k), 1e-8) << xs[i];
}

TEST(LinearPotential, PositionFormMatchesTransformedMomentumForm)
{
    // The p = 0 phase kink gives a 1/x^3 tail, so periodic images fall off as 1/L^3.
    const Grid1D g(4096, 1000.0, -500.0);
    for (double t : {0.0, 1.0}) {
        const auto psi = inverse_transform(
            sample_momentum(g, [t](double p) { return linear_potential_momentum(p, t, 1.0, 1.0); }));
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(psi.samples[i] - linear_potential_solution(g.x(i), t, 1.0, 1.0)));
        EXPECT_LE(worst, 1e-8) << t;
    }
}

TEST(LinearPotential, NormalizedAndRealAtTimeZero)
{
    for (double t : {0.0, 2.0}) {
        const double total = integrate_adaptive([t](double x) { return std::norm(linear_potential_solution(x, t, 1.0, 1.0)); }, -inf, inf);
        EXPECT_NEAR(total, 1.0, 1e-8);
    }
    const cplx phase = linear_potential_solution(0.0, 0.0, 1.0, 1.0) / std::abs(linear_potential_solution(0.0, 0.0, 1.0, 1.0));
    for (double x : {-4.0, -1.0, 0.5, 3.0}) {
        const cplx v = linear_potential_solution(x, 0.0, 1.0, 1.0) * std::conj(phase);
        EXPECT_NEAR(v.imag(), 0.0, 1e-14 * std::abs(v) + 1e-300) << x;
    }
}

TEST(LinearPotential, MeanPositionAndVelocity)
{
    EXPECT_NEAR(linear_potential_mean_x(0.0, 1.0, 1.0), -1.0 / std::sqrt(pi), 1e-15);
    EXPECT_EQ(linear_potential_mean_v(0.0, 1.0, 1.0), 0.0);
    EXPECT_NEAR(linear_potential_mean_x(5.0, 1.0, 1.0), -5.0, 1e-10);
    EXPECT_NEAR(linear_potential_mean_x(-5.0, 1.0, 1.0), -5.0, 1e-10);
    const double h = 1e-5;
    for (double t : {-2.0, 0.3, 1.0, 4.0}) {
        EXPECT_LT(std::abs(linear_potential_mean_v(t, 2.0, 0.5)), 1.0);
        const double slope = (linear_potential_mean_x(t + h, 2.0, 0.5) - linear_potential_mean_x(t - h, 2.0, 0.5)) / (2 * h);
        EXPECT_NEAR(slope, linear_potential_mean_v(t, 2.0, 0.5), 1e-9) << t;
    }
}

TEST(LinearPotential, MeanPositionMatchesEvolvedState)
{
    const Grid1D g(16384, 4096.0, -2048.0);
    const auto k = PhysicalConstants::natural(0.0);
    auto chi = [](double p) { return linear_potential_profile(p, 1.0, 1.0); };
    for (double t : {0.5, 1.0, 2.0}) {
        const auto psi = inverse_transform(evolve_linear_potential(g, chi, t, 1.0, k));
        EXPECT_NEAR(mean_position(psi), linear_potential_mean_x(t, 1.0, 1.0), 1e-6) << t;
    }
}

TEST(ClassicalTrajectory, LambdaShape)
{
    EXPECT_EQ(classical_lambda_trajectory(2.0, 0.0, 0.0, 1.0), -2.0);
    EXPECT_EQ(classical_lambda_trajectory(-2.0, 0.0, 0.0, 1.0), -2.0);
    EXPECT_EQ(classical_lambda_trajectory(0.0, 3.0, -1.5, 0.7), 3.0);
    EXPECT_EQ(classical_lambda_trajectory(1.0, 0.0, 2.0, 1.0), 1.0);
}

TEST(PlaneWave, CurrentIsDensityTimesVelocity)
{
    EXPECT_EQ(plane_wave(0.3, 1.0, 0.0, 1.0, PhysicalConstants::natural(2.0)).j[0], 0.0);
    const auto massless = plane_wave(0.3, 1.0, 2.0, cplx(0.0, 2.0), PhysicalConstants::natural(0.0));
    EXPECT_EQ(massless.rho, 4.0);
    EXPECT_EQ(massless.j[0], 4.0);
    EXPECT_DOUBLE_EQ(std::abs(plane_wave(0.0, 0.0, -3.0, 1.0, PhysicalConstants::natural(4.0)).j[0]), 0.6);
    const auto v3 = plane_wave<3>({0.1, 0.2, 0.3}, 0.5, {3.0, 0.0, 4.0}, 1.0, PhysicalConstants::natural(0.0));
    EXPECT_DOUBLE_EQ(v3.j[0], 0.6);
    EXPECT_DOUBLE_EQ(v3.j[2], 0.8);
    EXPECT_NEAR(std::abs(v3.psi), 1.0, 1e-15);
}

TEST(Massless3D, PointValuesAndLimits)
{
    const auto origin = massless_3d(0.0, 0.0, 1.0);
    EXPECT_NEAR(origin.rho, 8.0 / (pi * pi), 1e-15);
    EXPECT_NEAR(origin.rho, std::norm(origin.psi), 1e-15);
    for (double r : {0.0, 0.5, 3.0, 40.0}) EXPECT_EQ(massless_3d(r, 0.0, 1.0).j, 0.0);
    EXPECT_EQ(massless_3d(0.0, 2.0, 1.0).j, 0.0);
    for (double r : {1e-9, 0.2, 2.0})
        for (double t : {1e-9, 0.8, 3.0}) {
            const auto v = massless_3d(r, t, 1.0);
            EXPECT_NEAR(v.rho, std::norm(v.psi), 1e-13 * v.rho);
            EXPECT_GE(v.j, 0.0);
        }
    EXPECT_THROW(massless_3d(-1.0, 0.0, 1.0), std::invalid_argument);
}

TEST(Massless3D, NormalizedAtAllTimes)
{
    for (double t : {0.0, 1.0, 3.0}) {
        const double total = integrate_adaptive(
            [t](double r) { return 4.0 * pi * r * r * massless_3d(r, t, 1.0).rho; }, 0.0, inf);
        EXPECT_NEAR(total, 1.0, 1e-8) << t;
    }
}

TEST(Massless3D, ContinuityResidual)
{
    EXPECT_LE(std::abs(massless_3d_continuity_residual(1.3, 0.7, 1.0)), 1e-6);
    for (double r : {0.0, 0.01, 2.0, 6.0})
        for (double t : {0.0, 0.05, 1.5, 4.0})
            EXPECT_LE(std::abs(massless_3d_continuity_residual(r, t, 1.0)), 1e-6) << r << " " << t;
}
