#include <gtest/gtest.h>

#include <salpeter/exact.hpp>
#include <salpeter/grid.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace salpeter;

namespace {

WaveFunction random_state(const Grid1D& g, std::mt19937_64& rng)
{
    std::normal_distribution<double> d;
    WaveFunction psi{g, std::vector<cplx>(g.size())};
    for (auto& v : psi.samples) v = cplx(d(rng), d(rng));
    return psi;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST(Grid1D, SmallLadder)
{
    const Grid1D g = make_grid(8, 8.0, -4.0);
    EXPECT_DOUBLE_EQ(g.dx(), 1.0);
    EXPECT_DOUBLE_EQ(g.x(0), -4.0);
    EXPECT_DOUBLE_EQ(g.x(7), 3.0);
    EXPECT_DOUBLE_EQ(g.dp(), std::numbers::pi / 4.0);
    EXPECT_DOUBLE_EQ(g.p_max(), std::numbers::pi);
    double largest = 0.0;
    for (double p : g.momenta()) largest = std::max(largest, std::abs(p));
    EXPECT_DOUBLE_EQ(largest, std::numbers::pi);
    // Nyquist mode sits at +p_max.
    EXPECT_DOUBLE_EQ(g.p(4), std::numbers::pi);
    EXPECT_DOUBLE_EQ(g.p(5), -3.0 * std::numbers::pi / 4.0);
    EXPECT_DOUBLE_EQ(make_grid(16, 1.0, 0.0).dx(), 1.0 / 16.0);
}

TEST(Grid1D, RejectsInvalidShapes)
{
    EXPECT_THROW(make_grid(12, 1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(make_grid(4, 1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(make_grid(16, 0.0, 0.0), std::invalid_argument);
    EXPECT_THROW(make_grid(16, -1.0, 0.0), std::invalid_argument);
}

TEST(Transform, ImpulseHasFlatSpectrum)
{
    const Grid1D g(64, 16.0, -8.0);
    WaveFunction psi{g, std::vector<cplx>(64)};
    psi.samples[20] = 1.0;
    const auto phi = forward_transform(psi);
    const double level = std::abs(phi.samples[0]);
    for (const cplx& v : phi.samples) EXPECT_NEAR(std::abs(v), level, 1e-15);
}

TEST(Transform, LadderPlaneWaveIsSingleMode)
{
    const Grid1D g(128, 20.0, -10.0);
    const double k = 5.0 * g.dp();
    const auto psi = sample(g, [k](double x) { return std::polar(1.0, k * x); });
    const auto phi = forward_transform(psi);
    for (std::size_t n = 0; n < g.size(); ++n) {
        if (g.wavenumber(n) == 5)
            EXPECT_GT(std::abs(phi.samples[n]), 1.0);
        else
            EXPECT_LT(std::abs(phi.samples[n]), 1e-12);
    }
}

TEST(Transform, GaussianMatchesAnalyticTransform)
{
    const Grid1D g(256, 40.0, -20.0);
    const auto psi = sample(g, [](double x) { return std::exp(-x * x / 2.0); });
    const auto phi = forward_transform(psi);
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double p = g.p(n);
        EXPECT_NEAR(std::abs(phi.samples[n] - std::exp(-p * p / 2.0)), 0.0, 1e-10) << p;
    }
}

TEST(Transform, RoundTripParsevalAndLinearity)
{
    std::mt19937_64 rng(3);
    const Grid1D g(256, 30.0, -12.0, 0.7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto psi = random_state(g, rng);
        const auto phi = forward_transform(psi);
        EXPECT_NEAR(norm(phi) / norm(psi), 1.0, 1e-12);
        EXPECT_LE(max_diff(inverse_transform(phi).samples, psi.samples), 1e-12 * norm(psi));
    }
    const auto a = random_state(g, rng), b = random_state(g, rng);
    const cplx alpha(0.3, -1.2), beta(2.0, 0.5);
    WaveFunction mix{g, std::vector<cplx>(g.size())};
    for (std::size_t i = 0; i < g.size(); ++i) mix.samples[i] = alpha * a.samples[i] + beta * b.samples[i];
    const auto fa = forward_transform(a), fb = forward_transform(b), fm = forward_transform(mix);
    std::vector<cplx> combined(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) combined[i] = alpha * fa.samples[i] + beta * fb.samples[i];
    EXPECT_LE(max_diff(fm.samples, combined), 1e-12 * norm(fm));
}

TEST(Norm, LorentzianAndScaling)
{
    const Grid1D g(4096, 400.0, -200.0);
    const auto psi = sample(g, [](double x) { return lorentzian_massless(x, 0.0, 1.0).psi; });
    EXPECT_NEAR(norm(psi), 1.0, 1e-6);
    WaveFunction twice = psi;
    for (auto& v : twice.samples) v *= 2.0;
    EXPECT_NEAR(norm(twice), 2.0 * norm(psi), 1e-14);
    EXPECT_NEAR(norm(normalize(twice)), 1.0, 1e-14);
}

TEST(Norm, ZeroStateCannotBeNormalized)
{
    const Grid1D g(16, 1.0, 0.0);
    EXPECT_THROW(normalize(WaveFunction{g, std::vector<cplx>(16)}), std::invalid_argument);
}

TEST(Norm, StableUnderRefinement)
{
    auto packet = [](double x) { return std::exp(-x * x / 4.0) * std::polar(1.0, 1.5 * x); };
    const double coarse = norm(sample(Grid1D(512, 60.0, -30.0), packet));
    const double fine = norm(sample(Grid1D(1024, 60.0, -30.0), packet));
    EXPECT_NEAR(coarse, fine, 1e-10 * fine);
}

TEST(Boundary, WarnsWhenEdgeIsLoud)
{
    Diagnostics diag;
    const Grid1D g(256, 20.0, -10.0);
    EXPECT_TRUE(check_boundary(sample(g, [](double x) { return std::exp(-x * x); }), &diag));
    EXPECT_EQ(diag.count(), 0u);
    EXPECT_FALSE(check_boundary(sample(g, [](double x) { return 1.0 / (1.0 + x * x); }), &diag));
    EXPECT_EQ(diag.count(), 1u);
}

TEST(RadialGrid, WeightsAndNormalization)
{
    const RadialGrid r(20001, 400.0);
    EXPECT_EQ(r.weight(0), 0.0);
    for (std::size_t k = 1; k < r.size(); k += 997) EXPECT_GT(r.weight(k), 0.0);
    for (double t : {0.0, 1.0, 3.0})
        EXPECT_NEAR(r.integrate_function([t](double rr) { return massless_3d(rr, t, 1.0).rho; }), 1.0, 1e-8);
    EXPECT_THROW(RadialGrid(1, 1.0), std::invalid_argument);
}
