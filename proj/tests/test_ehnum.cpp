#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "alevol/ehnum.hpp"

using namespace alevol;

namespace {

const double pi2 = std::numbers::pi * std::numbers::pi;

/// Independent long-double root of H(R) = 3/rho by plain bisection on the spec formula.
long double reference_radius(long double a, long double rho) {
    auto H = [a](long double R) {
        const long double f = 1 - std::pow(a / R, 4.0L);
        return std::sqrt(f) * 3 / R + 4 * std::pow(a, 4.0L) / std::pow(R, 5.0L) / (2 * std::sqrt(f));
    };
    long double lo = std::max(a, rho), hi = 2 * lo + 1;
    for (int i = 0; i < 200; ++i) {
        const long double mid = (lo + hi) / 2;
        (H(mid) > 3 / rho ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

TensorField diagonal_field(const RadialFn& f) {
    return TensorField::sym2([&](int i, int j) { return i == j ? f : RadialFn(); });
}

} // namespace

TEST(MeanCurvature, Examples) {
    EXPECT_DOUBLE_EQ(eh_mean_curvature(EHConfig(0.0), 2.0), 1.5);
    const double s = std::sqrt(15.0 / 16.0);
    EXPECT_NEAR(eh_mean_curvature(EHConfig(1.0), 2.0), s * 1.5 + (4.0 / 32.0) / (2 * s), 1e-15);
    EXPECT_THROW(eh_mean_curvature(EHConfig(1.0), 1.0), OutOfDomain);
    EXPECT_THROW(eh_mean_curvature(EHConfig(1.0), 0.5), OutOfDomain);
    EXPECT_THROW(EHConfig(-1.0), OutOfDomain);
}

TEST(MeanCurvature, DecreasingAndBlowsUpAtBolt) {
    const EHConfig cfg(1.0);
    double prev = eh_mean_curvature(cfg, 1.0 + 1e-9);
    EXPECT_GT(prev, 1e3);
    for (double R = 1.001; R < 50; R *= 1.05) {
        const double h = eh_mean_curvature(cfg, R);
        EXPECT_LT(h, prev);
        EXPECT_GT(h, 3.0 / R);
        prev = h;
    }
}

TEST(CmcRadius, FlatAndSeries) {
    EXPECT_EQ(cmc_radius(EHConfig(0.0), 7.0), 7.0);
    const EHConfig cfg(1.0);
    for (double rho : {2.0, 10.0, 100.0, 1e3}) {
        const double R = cmc_radius(cfg, rho);
        const double u = 1.0 / std::pow(R, 4);
        EXPECT_NEAR(std::pow(R, 4) * (1 - u) * (1 - u) / std::pow(1 - u / 3, 4), std::pow(rho, 4),
                    1e-13 * std::pow(rho, 4));
        EXPECT_NEAR(eh_mean_curvature(cfg, R), 3.0 / rho, 1e-14 * 3.0 / rho);
    }
    const double R10 = cmc_radius(cfg, 10.0);
    EXPECT_NEAR(std::pow(R10, 4), 1e4 + 2.0 / 3.0, 1e4 * 1e-8);
}

TEST(CmcRadius, MatchesReferenceToTolerance) {
    for (double a : {0.5, 1.0, 2.0})
        for (double rho : {1.0, 3.0, 10.0, 250.0, 1e4}) {
            if (rho < a) continue;
            const double R = cmc_radius(EHConfig(a), rho);
            const long double ref = reference_radius(a, rho);
            const double tol = std::max(1e-12, 4 * std::numeric_limits<double>::epsilon() * R);
            EXPECT_NEAR(R, static_cast<double>(ref), tol) << a << " " << rho;
        }
    EXPECT_THROW(cmc_radius(EHConfig(1.0), 0.0), NoBracket);
    EXPECT_THROW(cmc_radius(EHConfig(1.0), -2.0), NoBracket);
}

TEST(Volume, DensityMatchesFlatAnnulus) {
    // sqrt(det g) = f^-1/2 (r/2)^3 f^1/2 on the frame dr, s1, s2, s3; quotient volume of the s-frame is 8 pi^2
    const EHConfig cfg(1.0);
    const double lo = 1.2, hi = 3.0;
    const int n = 2000;
    auto density = [&](double r) {
        const double f = cfg.f(r);
        return std::pow(f, -0.5) * std::pow(r / 2, 3) * std::sqrt(f) * 8 * pi2;
    };
    double s = density(lo) + density(hi);
    const double h = (hi - lo) / n;
    for (int i = 1; i < n; ++i) s += density(lo + i * h) * (i % 2 ? 4 : 2);
    EXPECT_NEAR(s * h / 3, pi2 * (std::pow(hi, 4) - std::pow(lo, 4)) / 4, 1e-9);
}

TEST(Profile, RecordsAndStableDifference) {
    const EHConfig cfg(1.0);
    const auto grid = geometric_grid(10, 1e4, 32);
    ASSERT_EQ(grid.size(), 32u);
    EXPECT_DOUBLE_EQ(grid.front(), 10);
    EXPECT_DOUBLE_EQ(grid.back(), 1e4);
    const CMCProfile p = cmc_profile(cfg, grid);
    const double limit = -pi2 / 12;
    double prev = 0;
    for (const auto& r : p.records) {
        EXPECT_GT(r.R, cfg.a);
        EXPECT_LT(r.V_rho, 0.0);
        // decreasing toward the limit from above; flat once the remainder drops below an ulp
        EXPECT_LE(r.V_rho, prev);
        EXPECT_GE(r.V_rho, limit - 4 * std::numeric_limits<double>::epsilon());
        prev = r.V_rho;
    }
    EXPECT_LT(p.records[1].V_rho, p.records[0].V_rho);
    const auto& first = p.records.front();
    EXPECT_NEAR(first.V_rho, first.vol_g - first.vol_flat, 1e-9 * std::abs(first.V_rho));
    EXPECT_EQ(p.to_csv().substr(0, 26), "rho,R,vol_g,vol_flat,V_rho");
    EXPECT_THROW(geometric_grid(10, 5, 8), GridTooSmall);
}

TEST(Profile, RemainderDecaysLikeRhoToMinusFour) {
    const EHConfig cfg(1.0);
    const double limit = -pi2 / 12;
    std::vector<double> lr, ld;
    for (double rho : geometric_grid(10, 100, 17)) {
        lr.push_back(std::log(rho));
        ld.push_back(std::log(cmc_record(cfg, rho).V_rho - limit));
    }
    EXPECT_NEAR(-fit_line(lr, ld).coefficient, 4.0, 0.2);
}

TEST(Renvol, EguchiHanson) {
    double v1 = 0;
    for (double a : {0.5, 1.0, 2.0}) {
        const auto r = renvol_estimate(EHConfig(a), geometric_grid(10 * a, 1e4 * a, 32));
        const double expected = -pi2 * std::pow(a, 4) / 12;
        EXPECT_NEAR(r.value, expected, 1e-6 * std::abs(expected));
        EXPECT_LT(r.value, 0.0);
        EXPECT_LT(r.residual, 1e-8);
        if (a == 1.0) v1 = r.value;
    }
    const auto r2 = renvol_estimate(EHConfig(2.0), geometric_grid(20, 2e4, 32));
    EXPECT_NEAR(r2.value / v1, 16.0, 16.0 * 1e-9);
    const auto flat = renvol_estimate(EHConfig(0.0), geometric_grid(10, 1e4, 32));
    EXPECT_EQ(flat.value, 0.0);
}

TEST(Renvol, GridChecks) {
    EXPECT_THROW(renvol_estimate(EHConfig(1.0), geometric_grid(5, 1e4, 32)), GridTooSmall);
    const std::vector<double> two{10, 20};
    EXPECT_THROW(renvol_estimate(EHConfig(1.0), two), GridTooSmall);
    const std::vector<double> unsorted{10, 30, 20};
    EXPECT_THROW(u_expansion_b(EHConfig(1.0), unsorted), GridTooSmall);
}

TEST(BCoefficient, Relation) {
    for (double a : {0.5, 1.0, 2.0}) {
        const auto grid = geometric_grid(10 * a, 1e4 * a, 32);
        const auto b = u_expansion_b(EHConfig(a), grid);
        const auto v = renvol_estimate(EHConfig(a), grid);
        EXPECT_NEAR(b.b, std::pow(a, 4) / 3, 1e-6 * std::pow(a, 4) / 3);
        EXPECT_NEAR(b.b_times_area, -4 * v.value, 1e-6 * std::abs(4 * v.value));
    }
    EXPECT_EQ(u_expansion_b(EHConfig(0.0), geometric_grid(10, 1e4, 32)).b, 0.0);
}

TEST(Ros, Inequality) {
    const auto flat = ros_check(EHConfig(0.0), 10.0);
    EXPECT_TRUE(flat.ok);
    EXPECT_NEAR(flat.lhs, flat.rhs, 1e-12 * flat.rhs);
    const auto bolt = ros_check(EHConfig(1.0), 10.0);
    EXPECT_TRUE(bolt.ok);
    EXPECT_LT(bolt.lhs, bolt.rhs);
    // relative gap ~ c rho^-4
    auto scaled_gap = [](double rho) {
        const auto r = ros_check(EHConfig(1.0), rho);
        return (r.rhs - r.lhs) / r.rhs * std::pow(rho, 4);
    };
    EXPECT_NEAR(scaled_gap(100.0) / scaled_gap(30.0), 1.0, 0.01);
}

TEST(SphereDeviation, ConformalOracle) {
    // g = (1 + c r^-4) g0: H(unit sphere) = (1+c)^-1/2 (3 - 6c/(1+c))
    for (long double c : {0.01L, 0.1L, 0.5L}) {
        const JetEvaluator jet(diagonal_field(RadialFn(Poly4(1), 2)));
        const long double expected = (3 - 6 * c / (1 + c)) / std::sqrt(1 + c) - 3;
        for (const auto& d : sample_directions(5))
            EXPECT_NEAR(static_cast<double>(unit_sphere_deviation<long double>(jet, d, c)), static_cast<double>(expected),
                        1e-15);
    }
}

TEST(SphereDeviation, RadialStretchOracle) {
    // h = c x x^T / r^2 stretches only the normal direction: H = 3 / sqrt(1 + c)
    const TensorField h = TensorField::sym2([](int i, int j) {
        return RadialFn(Poly4::variable(i) * Poly4::variable(j), 1);
    });
    const JetEvaluator jet(h);
    for (long double c : {0.02L, 0.3L}) {
        const long double expected = 3 / std::sqrt(1 + c) - 3;
        for (const auto& d : sample_directions(5))
            EXPECT_NEAR(static_cast<double>(unit_sphere_deviation<long double>(jet, d, c)), static_cast<double>(expected),
                        1e-15);
    }
}

TEST(Decay, Exponents) {
    const auto& K = structured_kernel();
    const auto grid = geometric_grid(10, 1e4, 25);
    const auto dirs = sample_directions(24);
    std::vector<double> reduced, u3;
    for (std::size_t n = 0; n < 5; ++n)
        reduced.push_back(perturbed_H_decay(K.tensors[StructuredKernel::plus_offset + n], grid, dirs).exponent);
    for (std::size_t n = 0; n < 9; ++n)
        u3.push_back(perturbed_H_decay(K.tensors[StructuredKernel::u3_offset + n], grid, dirs).exponent);
    for (double e : reduced) EXPECT_GE(e, 4.8);
    for (double e : u3) EXPECT_NEAR(e, 4.0, 0.2);
    for (double r : reduced)
        for (double u : u3) EXPECT_GE(r - u, 0.6);
}

TEST(Decay, ZeroPerturbation) {
    const auto fit = perturbed_H_decay(TensorField::zero_sym2(), geometric_grid(10, 1e4, 25), sample_directions(8));
    EXPECT_TRUE(std::isinf(fit.exponent));
    for (const auto& s : fit.samples) EXPECT_EQ(s.max_deviation, 0.0);
}

TEST(Decay, Preconditions) {
    const auto grid = geometric_grid(10, 1e4, 25);
    const auto dirs = sample_directions(8);
    EXPECT_THROW(perturbed_H_decay(flat_metric(), grid, dirs), NotInKernel);
    const TensorField big = structured_kernel().tensors[StructuredKernel::u3_offset];
    EXPECT_THROW(perturbed_H_decay(big, grid, dirs, -1e6), MetricNotPositive);
}

TEST(Directions, UnitAndDeterministic) {
    const auto a = sample_directions(16), b = sample_directions(16);
    EXPECT_EQ(a, b);
    for (const auto& d : a) EXPECT_NEAR(d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3], 1.0, 1e-15);
}
