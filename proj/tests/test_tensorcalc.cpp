#include <array>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "alevol/tensorcalc.hpp"

using namespace alevol;

namespace {

Poly4 x(int i) { return Poly4::variable(i); }

const RadialFn inv_r2(Poly4(1), 1);

Mat4Q random_mat(std::mt19937& gen) {
    std::uniform_int_distribution<int> c(-7, 7);
    Mat4Q m;
    for (auto& row : m)
        for (auto& v : row) v = make_rational(c(gen), 1 + static_cast<long>(gen() % 4));
    return m;
}

TensorField random_sym2(std::mt19937& gen) {
    std::uniform_int_distribution<int> c(-3, 3);
    return TensorField::sym2([&](int i, int j) {
        Poly4 p = x(i) * x(j) * Rational(c(gen)) + x((i + j) % 4) * x(3) * Rational(c(gen));
        return RadialFn(p, 3);
    });
}

using P = std::array<double, 4>;

double eval(const RadialFn& f, const P& p) { return f.evaluate<double>(std::span<const double, 4>(p)); }

/// d/dt at t = 0 of (phi_t^* T)_ij(p) for phi_t(x) = x + t X(x): a numeric oracle for the Lie derivative.
double lie_oracle(const LinearVectorField& X, const TensorField& T, const P& p, int i, int j) {
    auto value = [&](double t) {
        P moved = p;
        for (int k = 0; k < 4; ++k) moved[k] += t * eval(X.component(k), p);
        double s = 0;
        const double h = 1e-6;
        for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l) {
                auto dX = [&](int comp, int dir) {
                    P a = p, b = p;
                    a[dir] += h;
                    b[dir] -= h;
                    return (eval(X.component(comp), a) - eval(X.component(comp), b)) / (2 * h);
                };
                const double jk = (k == i ? 1.0 : 0.0) + t * dX(k, i);
                const double jl = (l == j ? 1.0 : 0.0) + t * dX(l, j);
                s += eval(T(k, l), moved) * jk * jl;
            }
        return s;
    };
    const double t = 1e-4;
    return (value(t) - value(-t)) / (2 * t);
}

} // namespace

TEST(TensorCalc, TraceExamples) {
    Mat4Q e11 = zero4();
    e11[0][0] = 1;
    const RadialFn expected = RadialFn(Poly4(2), 2) - RadialFn(x(0) * x(0) * Rational(8), 3);
    EXPECT_EQ(trace(lie_metric({e11, 2})), expected);
    EXPECT_TRUE(trace(lie_metric({identity4(), 2})).is_zero());
    EXPECT_EQ(trace(flat_metric()), RadialFn(4));
    EXPECT_THROW(trace(TensorField::zero_one_form()), RankMismatch);
}

TEST(TensorCalc, DivergenceExamples) {
    EXPECT_TRUE(divergence(flat_metric()).is_zero());
    EXPECT_TRUE(divergence(hessian(inv_r2)).is_zero());
}

TEST(TensorCalc, BianchiExamples) {
    EXPECT_TRUE(bianchi(flat_metric()).is_zero());
    TensorField h = TensorField::zero_sym2();
    h.set(0, 0, RadialFn(x(0) * x(0), 0));
    TensorField expected = TensorField::zero_one_form();
    expected.set(0, RadialFn(x(0), 0));
    EXPECT_EQ(bianchi(h), expected);
    EXPECT_THROW(bianchi(TensorField::zero_one_form()), RankMismatch);
}

TEST(TensorCalc, BianchiDefinition) {
    std::mt19937 gen(2);
    for (int t = 0; t < 5; ++t) {
        const TensorField h = random_sym2(gen);
        EXPECT_EQ(bianchi(h), divergence(h) - gradient(trace(h)) * Rational(1, 2));
    }
}

TEST(TensorCalc, LaplacianExamples) {
    EXPECT_TRUE(laplacian(TensorField::scalar(inv_r2)).is_zero());
    EXPECT_EQ(laplacian(TensorField::scalar(RadialFn(x(0) * x(0), 0)))(), RadialFn(2));
}

TEST(TensorCalc, HessianExamples) {
    const TensorField h2 = hessian(inv_r2) * Rational(2);
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            const RadialFn expected =
                RadialFn(Poly4(i == j ? -4 : 0), 2) + RadialFn(x(i) * x(j) * Rational(16), 3);
            EXPECT_EQ(h2(i, j), expected);
        }
    EXPECT_EQ(hessian(RadialFn(Poly4::r2(), 0)), flat_metric() * Rational(2));
    TensorField mixed = TensorField::zero_sym2();
    mixed.set(0, 1, RadialFn(1));
    EXPECT_EQ(hessian(RadialFn(x(0) * x(1), 0)), mixed);
}

TEST(TensorCalc, LieMetricExamples) {
    EXPECT_EQ(lie_metric({Rational(-2) * identity4(), 2}), hessian(inv_r2) * Rational(2));
    Mat4Q skew = zero4();
    skew[0][2] = 1;
    skew[2][0] = -1;
    EXPECT_TRUE(lie_metric({skew, 0}).is_zero());
    EXPECT_EQ(lie_metric({identity4(), 0}), flat_metric() * Rational(2));
}

TEST(TensorCalc, LieDerivativeOfMetricIsLieMetric) {
    std::mt19937 gen(4);
    for (int t = 0; t < 6; ++t) {
        const LinearVectorField X{random_mat(gen), t % 3};
        EXPECT_EQ(lie_derivative(X, flat_metric()), lie_metric(X));
    }
}

TEST(TensorCalc, LieDerivativeMatchesFlowOracle) {
    std::mt19937 gen(8);
    const P p{0.6, -0.8, 1.1, 0.3};
    for (int t = 0; t < 3; ++t) {
        const LinearVectorField X{random_mat(gen), t};
        const TensorField T = random_sym2(gen);
        const TensorField L = lie_derivative(X, T);
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                const double exact = eval(L(i, j), p);
                EXPECT_NEAR(exact, lie_oracle(X, T, p, i, j), 1e-5 * (1 + std::abs(exact)));
            }
    }
}

TEST(TensorCalc, ScalingWeight) {
    // components homogeneous of degree d give L_{r d/dr} h = (d + 2) h
    std::mt19937 gen(6);
    for (int t = 0; t < 5; ++t) {
        const TensorField h = random_sym2(gen);
        EXPECT_EQ(lie_derivative(scaling_field(), h), h * Rational(-4 + 2));
    }
    EXPECT_TRUE(lie_derivative(scaling_field(), hessian(inv_r2)) == hessian(inv_r2) * Rational(-2));
}

TEST(TensorCalc, ContractScalingExamples) {
    EXPECT_EQ(contract_scaling(flat_metric()),
              TensorField::one_form({RadialFn(x(0), 0), RadialFn(x(1), 0), RadialFn(x(2), 0), RadialFn(x(3), 0)}));
    const TensorField c = contract_scaling(hessian(inv_r2) * Rational(2));
    for (int i = 0; i < 4; ++i) EXPECT_EQ(c(i), RadialFn(x(i) * Rational(12), 2));
}

TEST(TensorCalc, TraceOfLieMetricIsTwiceDivergence) {
    std::mt19937 gen(10);
    for (int t = 0; t < 8; ++t) {
        const LinearVectorField X{random_mat(gen), t % 3};
        EXPECT_EQ(trace(lie_metric(X)), divergence1(flat(X.as_vector())) * Rational(2));
    }
}

TEST(TensorCalc, FlatBochnerIdentity) {
    std::mt19937 gen(12);
    for (int t = 0; t < 12; ++t) {
        const LinearVectorField X{random_mat(gen), t % 3};
        EXPECT_TRUE(bochner_flat(X).is_zero());
        EXPECT_EQ(bianchi(lie_metric(X)), laplacian(flat(X.as_vector())));
    }
    EXPECT_TRUE(bochner_flat(scaling_field()).is_zero());
}

TEST(TensorCalc, SymProductSquares) {
    const TensorField a = TensorField::one_form({RadialFn(x(1), 0), RadialFn(1), RadialFn(), RadialFn()});
    const TensorField sq = sym_product(a, a);
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) EXPECT_EQ(sq(i, j), a(i) * a(j));
}

TEST(TensorCalc, PullbackCommutesWithOperators) {
    std::mt19937 gen(14);
    Mat4Q signed_perm = zero4();
    signed_perm[0][2] = 1;
    signed_perm[1][0] = -1;
    signed_perm[2][3] = 1;
    signed_perm[3][1] = 1;
    for (int t = 0; t < 3; ++t) {
        const TensorField h = random_sym2(gen);
        EXPECT_EQ(trace(h.pullback(signed_perm)), trace(h).substitute_orthogonal(signed_perm));
        EXPECT_EQ(laplacian(h.pullback(signed_perm)), laplacian(h).pullback(signed_perm));
        EXPECT_EQ(divergence(h.pullback(signed_perm)), divergence(h).pullback(signed_perm));
    }
}

TEST(TensorCalc, JsonRoundTrip) {
    std::mt19937 gen(16);
    const TensorField h = random_sym2(gen);
    nlohmann::json j = h;
    EXPECT_EQ(j["rank"], 2);
    for (const auto& c : j["components"]) EXPECT_LE(c["idx"][0].get<int>(), c["idx"][1].get<int>());
    EXPECT_EQ(j.get<TensorField>(), h);
    EXPECT_THROW(nlohmann::json::parse(R"({"rank":2,"components":[{"idx":[2,1],"fn":{"terms":[],"rpow":0}}]})")
                     .get<TensorField>(),
                 ParseError);
}
