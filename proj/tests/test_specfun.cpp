#include <gtest/gtest.h>

#include <salpeter/io.hpp>
#include <salpeter/specfun.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

using namespace salpeter;

namespace {

const std::string fixtures = SALPETER_FIXTURE_DIR;

double rel(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

} // namespace

// Reference values from 50-digit mpmath evaluations.
TEST(BesselK, ReferenceValuesAtOne)
{
    EXPECT_NEAR(bessel_k(1, 1.0), 0.60190723019723457473754, 1e-15);
    EXPECT_NEAR(bessel_k(0, 1.0), 0.42102443824070833333562, 1e-15);
    EXPECT_NEAR(bessel_k(2, 1.0), 1.62483889863517748281071, 1e-14);
    EXPECT_NEAR(bessel_k(1, 0.5), 1.65644112000330089, 1e-14);
    EXPECT_NEAR(bessel_k(2, 2.0), 0.25375975456605586, 1e-15);
}

TEST(BesselK, SmallArgumentAsymptotics)
{
    const double z = 1e-6;
    EXPECT_NEAR(bessel_k(2, z) / (2.0 / (z * z)), 1.0, 1e-6);
    EXPECT_NEAR(bessel_k(1, z) * z, 1.0, 1e-6);
    for (double s : {1e-3, 1e-5}) {
        EXPECT_NEAR(s * s * bessel_k(2, s) / 2.0, 1.0, 1e-5) << s;
        EXPECT_NEAR(s * bessel_k(1, s), 1.0, 1e-5) << s;
    }
}

TEST(BesselK, RecurrenceOnLogGrid)
{
    const double z0 = 1.7;
    EXPECT_NEAR(bessel_k(2, z0), bessel_k(0, z0) + 2.0 * bessel_k(1, z0) / z0, 1e-12 * bessel_k(2, z0));
    for (int i = 0; i <= 200; ++i) {
        const double z = 1e-4 * std::pow(3e5, i / 200.0);
        const double k2 = bessel_k(2, z);
        EXPECT_LE(std::abs(k2 - bessel_k(0, z) - 2.0 * bessel_k(1, z) / z), 1e-12 * k2) << z;
    }
}

TEST(BesselK, ConjugationSymmetry)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(0.01, 30.0), im(-30.0, 30.0);
    for (int i = 0; i < 200; ++i) {
        const cplx z(re(rng), im(rng));
        for (int nu = 0; nu <= 2; ++nu) {
            const cplx a = bessel_k(nu, std::conj(z));
            const cplx b = std::conj(bessel_k(nu, z));
            EXPECT_LE(std::abs(a - b), 1e-13 * std::abs(b)) << z;
        }
    }
}

TEST(BesselK, ContinuousAcrossRegimeSeam)
{
    for (double phase : {0.0, 0.7, 1.4}) {
        const cplx inside = std::polar(2.0 - 1e-9, phase), outside = std::polar(2.0 + 1e-9, phase);
        for (int nu = 0; nu <= 2; ++nu) EXPECT_LE(rel(bessel_k(nu, inside), bessel_k(nu, outside)), 1e-8);
    }
}

TEST(BesselK, DomainAndRangeErrors)
{
    EXPECT_THROW(bessel_k(1, 0.0), DomainError);
    EXPECT_THROW(bessel_k(1, -1.0), DomainError);
    EXPECT_THROW(bessel_k(0, cplx(0.0, 2.0)), DomainError);
    EXPECT_THROW(bessel_k(3, 1.0), DomainError);
    EXPECT_THROW(bessel_k(1, 800.0), RangeError);
    EXPECT_GT(bessel_k_scaled(1, cplx(800.0)).real(), 0.0);
}

TEST(BesselK, MatchesRealFixtureTable)
{
    const Table t = read_csv(fixtures + "/bessel_k_real.csv");
    const auto& order = t.column("order");
    const auto& z = t.column("z");
    const auto& value = t.column("value");
    ASSERT_GT(t.rows(), 100u);
    for (std::size_t i = 0; i < t.rows(); ++i)
        EXPECT_LE(std::abs(bessel_k(int(order[i]), z[i]) / value[i] - 1.0), 1e-12) << order[i] << " " << z[i];
}

TEST(BesselK, MatchesComplexFixtureTable)
{
    const Table t = read_csv(fixtures + "/bessel_k_complex.csv");
    ASSERT_GT(t.rows(), 100u);
    for (std::size_t i = 0; i < t.rows(); ++i) {
        const cplx z(t.column("re")[i], t.column("im")[i]);
        const cplx want(t.column("value_re")[i], t.column("value_im")[i]);
        EXPECT_LE(rel(bessel_k(int(t.column("order")[i]), z), want), 1e-9) << z;
    }
}

TEST(Erfc, ReferenceValues)
{
    EXPECT_EQ(erfc_complex(cplx(0.0)), cplx(1.0));
    EXPECT_NEAR(erfc_complex(cplx(1.0)).real(), 0.15729920705028513066, 1e-15);
    EXPECT_NEAR(erfc_complex(cplx(1.0)).imag(), 0.0, 1e-16);
    const cplx z(0.3, 0.4);
    EXPECT_LE(std::abs(erfc_complex(-z) - (2.0 - erfc_complex(z))), 1e-12);
}

TEST(Erfc, ReflectionForRandomArguments)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> radius(0.0, 5.0), angle(-std::numbers::pi, std::numbers::pi);
    for (int i = 0; i < 100; ++i) {
        const cplx z = std::polar(radius(rng), angle(rng));
        EXPECT_LE(std::abs(erfc_complex(z) + erfc_complex(-z) - 2.0), 1e-12) << z;
    }
}

TEST(Erfc, MatchesComplexFixtureTable)
{
    const Table t = read_csv(fixtures + "/erfc_complex.csv");
    ASSERT_GT(t.rows(), 100u);
    for (std::size_t i = 0; i < t.rows(); ++i) {
        const cplx z(t.column("re")[i], t.column("im")[i]);
        const cplx want(t.column("value_re")[i], t.column("value_im")[i]);
        EXPECT_LE(rel(erfc_complex(z), want), 1e-10) << z;
    }
}

TEST(Erfc, ScaledFormCoversOverflowRange)
{
    EXPECT_THROW(erfc_complex(cplx(0.0, 30.0)), RangeError);
    const cplx z(20.0, 3.0);
    EXPECT_LE(rel(erfcx_complex(z) * std::exp(-z * z), erfc_complex(z)), 1e-12);
}

TEST(Erf, RealValues)
{
    EXPECT_EQ(erf_real(0.0), 0.0);
    EXPECT_NEAR(erf_real(10.0), 1.0, 1e-14);
    EXPECT_NEAR(erf_real(1.0), 0.84270079294971486934, 1e-15);
    const Table t = read_csv(fixtures + "/erf_real.csv");
    for (std::size_t i = 0; i < t.rows(); ++i)
        EXPECT_NEAR(erf_real(t.column("t")[i]), t.column("value")[i], 1e-14);
}

TEST(SignStep, Conventions)
{
    EXPECT_EQ(sign(-3.2), -1.0);
    EXPECT_EQ(sign(0.0), 0.0);
    EXPECT_EQ(sign(4.0), 1.0);
    EXPECT_EQ(step(0.0), 0.5);
    EXPECT_EQ(step(2.0), 1.0);
    EXPECT_EQ(step(-1e-300), 0.0);
}
