#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "massart/geometry.hpp"
#include "oracles.hpp"

namespace massart {
namespace {

TEST(SampleUnitBall, RadiusLawInThePlane) {
    Rng rng = make_rng(11);
    const int n = 1'000'000;
    int inside = 0;
    for (int i = 0; i < n; ++i) {
        const auto x = sample_unit_ball(2, rng);
        if (norm(x.coords()) <= 0.5) ++inside;
    }
    EXPECT_NEAR(inside / double(n), 0.25, oracle::three_sigma(0.25, n));
}

TEST(SampleUnitBall, CoordinatesAreCentered) {
    Rng rng = make_rng(12);
    const int n = 1'000'000;
    const std::size_t d = 5;
    std::vector<double> sum(d, 0.0);
    Vec x(d);
    for (int i = 0; i < n; ++i) {
        sample_unit_ball_into(x, rng);
        for (std::size_t j = 0; j < d; ++j) sum[j] += x[j];
    }
    // Var(x_j) = 1/(d + 2) for the uniform d-ball.
    const double sigma = std::sqrt(1.0 / (d + 2.0) / n);
    for (std::size_t j = 0; j < d; ++j) EXPECT_NEAR(sum[j] / n, 0.0, 3.0 * sigma) << "coordinate " << j;
}

TEST(SampleUnitBall, RadiusCdfAcrossDimensions) {
    const int n = 1'000'000;
    for (std::size_t d : {2u, 5u, 10u, 25u}) {
        Rng rng = make_rng(13, d);
        int below[3] = {0, 0, 0};
        const double radii[3] = {0.25, 0.5, 0.75};
        Vec x(d);
        for (int i = 0; i < n; ++i) {
            sample_unit_ball_into(x, rng);
            const double r = norm(x);
            ASSERT_LE(r, 1.0 + kBallTolerance);
            for (int k = 0; k < 3; ++k) below[k] += r <= radii[k];
        }
        for (int k = 0; k < 3; ++k) {
            const double p = std::pow(radii[k], double(d));
            // Floor the width for tiny p where the normal approximation is too tight.
            const double tol = std::max(oracle::three_sigma(p, n), 3.0 / n);
            EXPECT_NEAR(below[k] / double(n), p, tol) << "d=" << d << " r=" << radii[k];
        }
    }
}

TEST(SampleUnitBall, RejectsDegenerateDimension) {
    Rng rng = make_rng(1);
    EXPECT_THROW(sample_unit_ball(1, rng), InvalidDimension);
    EXPECT_THROW(sample_unit_ball(0, rng), InvalidDimension);
}

TEST(SampleUnitBall, SameSeedSamePoints) {
    Rng a = make_rng(99), b = make_rng(99);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_unit_ball(7, a), sample_unit_ball(7, b));
}

TEST(Angle, Examples) {
    const auto e1 = UnitVector::axis(3, 0), e2 = UnitVector::axis(3, 1);
    EXPECT_EQ(angle(e1, e1), 0.0);
    EXPECT_NEAR(angle(e1, e2), std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(angle(e1, UnitVector::planar(3, 0.1)), 0.1, 1e-9);
    EXPECT_NEAR(angle(e1, UnitVector::planar(3, std::numbers::pi)), std::numbers::pi, 1e-9);
}

TEST(Angle, DimensionMismatch) {
    EXPECT_THROW(angle(UnitVector::axis(2, 0), UnitVector::axis(3, 0)), DimensionMismatch);
}

TEST(UnitVector, RejectsNonUnitInput) {
    EXPECT_THROW(UnitVector(Vec{1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(UnitVector(Vec{1.0}), InvalidDimension);
    EXPECT_THROW(UnitVector::normalized(Vec{0.0, 0.0}), std::invalid_argument);
    EXPECT_NO_THROW(UnitVector::normalized(Vec{3.0, 4.0}));
}

TEST(SampleInBand, WholeBallNeverRejects) {
    Rng rng = make_rng(2);
    for (std::size_t d : {2u, 7u}) {
        const Band band(UnitVector::axis(d, 0), 1.0);
        for (int i = 0; i < 10'000; ++i) EXPECT_EQ(sample_in_band(band, d, rng).rejected, 0u);
    }
}

TEST(SampleInBand, AcceptedPointsLieInBand) {
    Rng rng = make_rng(3);
    const Band band(UnitVector::axis(2, 0), 0.1);
    for (int i = 0; i < 100'000; ++i) {
        const auto draw = sample_in_band(band, 2, rng);
        ASSERT_LT(std::fabs(draw.point[0]), 0.1);
    }
}

TEST(SampleInBand, AcceptanceRateMatchesBandMass) {
    const std::size_t d = 10;
    const double b = 0.3 / std::sqrt(10.0);
    const Band band(UnitVector::axis(d, 0), b);
    const auto bounds = band_mass_bounds(d, -b, b, 0.3);
    Rng rng = make_rng(4);
    Vec x(d);
    std::uint64_t draws = 0;
    const int accepts = 200'000;
    for (int i = 0; i < accepts; ++i) draws += 1 + sample_in_band_into(band, x, rng);
    const double rate = accepts / double(draws);
    EXPECT_GE(rate, bounds.lower);
    EXPECT_LE(rate, bounds.upper);
    EXPECT_NEAR(rate, bounds.exact, oracle::three_sigma(bounds.exact, double(draws)));
}

TEST(Band, RejectsInvalidWidth) {
    EXPECT_THROW(Band(UnitVector::axis(2, 0), 0.0), std::invalid_argument);
    EXPECT_THROW(Band(UnitVector::axis(2, 0), 1.5), std::invalid_argument);
}

TEST(VolumeRatio, SmallDimensions) {
    EXPECT_NEAR(volume_ratio(2), 2.0 / std::numbers::pi, 1e-14);  // V1 = 2, V2 = pi
    EXPECT_NEAR(volume_ratio(3), 0.75, 1e-14);                    // V2 = pi, V3 = 4 pi / 3
}

TEST(VolumeRatio, BorgwardtBracketAndRecurrence) {
    for (std::size_t d = 2; d <= 200; ++d) {
        const double r = volume_ratio(d);
        EXPECT_GE(r, std::sqrt(d / (2.0 * std::numbers::pi))) << d;
        EXPECT_LE(r, std::sqrt((d + 1.0) / (2.0 * std::numbers::pi))) << d;
        if (d >= 3) {
            // V_{d-2}/V_d = d / (2 pi)
            EXPECT_NEAR(volume_ratio(d - 1) * r, d / (2.0 * std::numbers::pi), 1e-9) << d;
        }
    }
}

TEST(BandMassBounds, BracketAtModerateDimension) {
    const double b = 0.3 / std::sqrt(10.0);
    const auto r = band_mass_bounds(10, -b, b, 0.3);
    EXPECT_LE(r.lower, r.exact);
    EXPECT_LE(r.exact, r.upper);
    // Independent high-order quadrature of the same marginal density.
    const double ref = volume_ratio(10) *
                       oracle::gauss_legendre([](double z) { return std::pow(1 - z * z, 4.5); }, -b, b);
    EXPECT_NEAR(r.exact, ref, 1e-10);
}

TEST(BandMassBounds, EmptyInterval) {
    const auto r = band_mass_bounds(5, 0.1, 0.1, 1.0);
    EXPECT_EQ(r.lower, 0.0);
    EXPECT_EQ(r.upper, 0.0);
    EXPECT_EQ(r.exact, 0.0);
}

TEST(BandMassBounds, PlanarClosedForm) {
    const auto r = band_mass_bounds(2, 0.0, 0.1, 0.5);
    auto antiderivative = [](double z) { return 0.5 * (z * std::sqrt(1 - z * z) + std::asin(z)); };
    const double expected = 2.0 / std::numbers::pi * (antiderivative(0.1) - antiderivative(0.0));
    EXPECT_NEAR(r.exact, expected, 1e-12);
}

TEST(BandMassBounds, GridBracket) {
    for (std::size_t d : {5u, 10u, 25u, 100u}) {
        for (double C : {0.3, 1.0, 2.3463}) {
            const double lim = C / std::sqrt(double(d));
            for (auto [a, b] : {std::pair{-lim, lim}, std::pair{0.0, lim}, std::pair{-lim, 0.3 * lim}}) {
                const auto r = band_mass_bounds(d, a, b, C);
                EXPECT_LE(r.lower, r.exact) << d << " " << C;
                EXPECT_LE(r.exact, r.upper) << d << " " << C;
            }
        }
    }
}

TEST(BandMassBounds, PreconditionViolations) {
    EXPECT_THROW(band_mass_bounds(10, -0.5, 0.5, 0.3), std::domain_error);  // outside C/sqrt(d)
    EXPECT_THROW(band_mass_bounds(4, -0.1, 0.1, 2.0), std::domain_error);   // C >= d/2
    EXPECT_THROW(band_mass_bounds(10, 0.05, -0.05, 0.3), std::domain_error);
}

TEST(DisagreementOutsideBand, Limits) {
    EXPECT_EQ(disagreement_outside_band_bound(10, 0.0, 2.0), 0.0);
    EXPECT_NEAR(disagreement_outside_band_bound(10, 0.3, 1e3), 0.0, 1e-300);
    const double expected = 0.1216 / std::numbers::pi * std::exp(-2.3463 * 2.3463 * 20.0 / 44.0);
    EXPECT_NEAR(disagreement_outside_band_bound(22, 0.1216, 2.3463), expected, 1e-15);
    EXPECT_THROW(disagreement_outside_band_bound(2, 0.1, 2.0), InvalidDimension);
    EXPECT_THROW(disagreement_outside_band_bound(10, 0.1, 0.5), std::domain_error);
}

TEST(DisagreementOutsideBand, MonteCarloStaysBelowBound) {
    const std::size_t d = 22;
    const double alpha = 0.1216, c = 2.3463;
    const auto u = UnitVector::axis(d, 0);
    const auto w = UnitVector::planar(d, alpha);
    const double cut = c * alpha / std::sqrt(double(d));
    Rng rng = make_rng(5);
    Vec x(d);
    const int n = 1'000'000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        sample_unit_ball_into(x, rng);
        const double ux = dot(u.coords(), x);
        if (sign_of(ux) != sign_of(dot(w.coords(), x)) && std::fabs(ux) > cut) ++hits;
    }
    const double p = hits / double(n);
    EXPECT_LE(p, disagreement_outside_band_bound(d, alpha, c) + oracle::three_sigma(p, n));
}

}  // namespace
}  // namespace massart
