#pragma once

// Invariant suites behind `alevol verify`. Each suite returns an ordered list
// of checks; randomized inputs come from a fixed-seed generator so reports are
// byte-identical between runs.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ehnum.hpp"
#include "exactla.hpp"
#include "gaugeclassify.hpp"
#include "mckay.hpp"
#include "tensorcalc.hpp"

namespace alevol {

struct Check {
    std::string id;
    bool pass = false;
    nlohmann::json measured;
    nlohmann::json expected;
    nlohmann::json tolerance; // null for exact checks
};

struct VerifyReport {
    std::string suite;
    std::vector<Check> checks;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    void exact(std::string id, bool ok, nlohmann::json measured, nlohmann::json expected) {
        checks.push_back({std::move(id), ok, std::move(measured), std::move(expected), nullptr});
    }

    void near(std::string id, double measured, double expected, double tol, bool relative = true) {
        const double err = relative ? std::abs(measured - expected) / std::abs(expected) : std::abs(measured - expected);
        checks.push_back({std::move(id), err <= tol, measured, expected, tol});
    }

    void append(const VerifyReport& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }
};

inline void to_json(nlohmann::json& j, const VerifyReport& r) {
    j = nlohmann::json::object();
    j["suite"] = r.suite;
    j["status"] = r.pass() ? "pass" : "fail";
    j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks)
        j["checks"].push_back({{"id", c.id},
                               {"status", c.pass ? "pass" : "fail"},
                               {"measured", c.measured},
                               {"expected", c.expected},
                               {"tolerance", c.tolerance}});
}

/// Small random rationals p/q with |p| <= 9, 1 <= q <= 5.
class RationalSampler {
public:
    explicit RationalSampler(std::uint64_t seed) : gen_(seed) {}

    Rational next() {
        const long p = static_cast<long>(gen_() % 19) - 9;
        const long q = static_cast<long>(gen_() % 5) + 1;
        return make_rational(p, q);
    }

    bool coin() { return (gen_() & 1u) != 0; }

    Mat4Q mat4() {
        Mat4Q m;
        for (auto& row : m)
            for (auto& v : row) v = next();
        return m;
    }

    /// A^T A for random rational A, so the result is a genuine Gram matrix.
    ZetaGram gram() {
        std::array<std::array<Rational, 3>, 3> a;
        for (auto& row : a)
            for (auto& v : row) v = next();
        Mat3Q g;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Rational s = 0;
                for (int k = 0; k < 3; ++k) s += a[k][i] * a[k][j];
                g[i][j] = s;
            }
        return ZetaGram(g);
    }

    /// Random combination of the structured kernel basis; each block is
    /// switched off with probability 1/2 so both sides of every equivalence occur.
    TensorField kernel_element() {
        const auto& K = structured_kernel();
        const std::array<std::pair<std::size_t, std::size_t>, 5> blocks = {{{StructuredKernel::plus_offset, 5},
                                                                             {StructuredKernel::minus_offset, 5},
                                                                             {StructuredKernel::u1_offset, 1},
                                                                             {StructuredKernel::u2_offset, 6},
                                                                             {StructuredKernel::u3_offset, 9}}};
        TensorField h = TensorField::zero_sym2();
        for (const auto& [off, n] : blocks) {
            if (!coin()) continue;
            for (std::size_t i = 0; i < n; ++i) {
                const Rational c = next();
                if (c != 0) h += K.tensors[off + i] * c;
            }
        }
        return h;
    }

private:
    std::mt19937_64 gen_;
};

inline TensorField hess_inverse_r2() { return hessian(RadialFn(Poly4(1), 1)); }

inline VerifyReport verify_symbolic(std::size_t samples = 20) {
    VerifyReport rep{"symbolic", {}};
    RationalSampler rng(7);
    const SubspaceQ u12 = subspace_sum(basis_U(GaugePart::U1), basis_U(GaugePart::U2));
    std::size_t three = 0, gauge_diff = 0, u1_proj = 0, invariant = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const ZetaGram z = rng.gram();
        const TensorField F = kronheimer_F(z);
        if (trace(F).is_zero() && divergence(F).is_zero() && laplacian(F).is_zero()) ++three;
        if (u12.contains(coords::to_coordinates(F - reduced_kron_G(z)))) ++gauge_diff;
        const Decomposition d = decompose(F);
        if (gauge_term(d.c1 * identity4()) == hess_inverse_r2() * (Rational(-1, 6) * z.trace())) ++u1_proj;
        if (su2minus_invariant(F)) ++invariant;
    }
    rep.exact("kronheimer.trace_div_laplacian_zero", three == samples, three, samples);
    rep.exact("kronheimer.F_minus_G_in_U1_plus_U2", gauge_diff == samples, gauge_diff, samples);
    rep.exact("kronheimer.U1_projection", u1_proj == samples, u1_proj, samples);
    rep.exact("kronheimer.su2minus_invariant", invariant == samples, invariant, samples);

    std::size_t basis_inv = 0;
    for (const auto& z : tracefree_zeta_basis())
        if (su2minus_invariant(reduced_kron_G(z))) ++basis_inv;
    rep.exact("reduced.su2minus_invariant", basis_inv == 5, basis_inv, 5);

    std::size_t bochner = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const LinearVectorField x{rng.mat4(), static_cast<int>(s % 3)};
        if (bochner_flat(x).is_zero()) ++bochner;
    }
    rep.exact("bochner.flat_identity", bochner == samples, bochner, samples);

    // d/dr-homogeneity of -2 for elements of the kernel
    std::size_t weight = 0;
    for (const auto& t : structured_kernel().tensors)
        if (lie_derivative(scaling_field(), t) == t * Rational(-2)) ++weight;
    rep.exact("kernel.scaling_weight", weight == StructuredKernel::size, weight, StructuredKernel::size);
    return rep;
}

inline VerifyReport verify_kernel(std::size_t samples = 20) {
    VerifyReport rep{"kernel", {}};
    const MatQ& H = H_matrix();
    const std::size_t rk = rank(H);
    rep.exact("H.nullity", H.cols() - rk == 26, H.cols() - rk, 26);
    rep.exact("H.rank", rk == 64, rk, 64);

    const KernelSplit s = kernel_split();
    rep.exact("split.U1", s.U1 == 1, s.U1, 1);
    rep.exact("split.U2", s.U2 == 6, s.U2, 6);
    rep.exact("split.U3", s.U3 == 9, s.U3, 9);
    rep.exact("split.S4plus", s.S4plus == 5, s.S4plus, 5);
    rep.exact("split.S4minus", s.S4minus == 5, s.S4minus, 5);
    rep.exact("split.independent", s.total == 26, s.total, 26);

    const auto& K = structured_kernel();
    const bool equal = SubspaceQ::span(coords::domain_dim, K.coordinates) == nullspace(H);
    rep.exact("split.spans_kernel", equal, equal, true);

    std::size_t ok = 0, total = 0;
    for (const auto& t : K.tensors) {
        ++total;
        if (characterize(t).equivalences_hold()) ++ok;
    }
    RationalSampler rng(11);
    for (std::size_t i = 0; i < samples; ++i) {
        ++total;
        if (characterize(rng.kernel_element()).equivalences_hold()) ++ok;
    }
    rep.exact("characterize.equivalences", ok == total, ok, total);
    return rep;
}

/// Dual Coxeter numbers and orders of the binary polyhedral groups used by the mckay suite.
struct AdeRow {
    AdeType type;
    int rank;
    std::size_t order;
};

inline const std::vector<AdeRow>& ade_table() {
    static const std::vector<AdeRow> t = {
        {AdeType::A, 1, 2},  {AdeType::A, 2, 3},  {AdeType::A, 4, 5},  {AdeType::A, 7, 8},
        {AdeType::D, 4, 8},  {AdeType::D, 5, 12}, {AdeType::D, 7, 20}, {AdeType::E, 6, 24},
        {AdeType::E, 7, 48}, {AdeType::E, 8, 120},
    };
    return t;
}

inline VerifyReport verify_mckay() {
    VerifyReport rep{"mckay", {}};
    for (const auto& row : ade_table()) {
        const GammaSpec g = gamma_spec(row.type, row.rank);
        rep.exact("order." + g.label, g.order == row.order, g.order, row.order);
        const MatQ expected = [&] {
            MatQ m = g.cartan;
            const Rational f = 2 * dual_coxeter_number(row.type, row.rank);
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= f;
            return m;
        }();
        const bool ok = g.killing_gram == expected;
        rep.exact("killing.dual_coxeter." + g.label, ok, ok, true);
    }
    const GammaSpec a1 = gamma_spec(AdeType::A, 1);
    rep.exact("killing.A1", a1.killing_gram(0, 0) == 8, to_string(a1.killing_gram(0, 0)), "8");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    rep.near("volume.A1_unit", renormalized_volume(a1, ZetaGram::diag(1, 0, 0)), -pi2 / 6, 1e-15);
    rep.near("volume.A1_eguchi_hanson", renormalized_volume(a1, ZetaGram::diag(Rational(1, 2), 0, 0)), -pi2 / 12,
             1e-15);
    rep.near("volume.quadratic_scaling",
             renormalized_volume(a1, ZetaGram::diag(9, 0, 0)) / renormalized_volume(a1, ZetaGram::diag(1, 0, 0)), 9.0,
             1e-15);
    rep.exact("volume.flat", renormalized_volume(a1, ZetaGram()) == 0, renormalized_volume(a1, ZetaGram()), 0);

    double worst = 0;
    for (double rho : {2.0, 5.0, 10.0, 100.0})
        for (double s : {0.0, 1.0, 6.0}) worst = std::max(worst, std::abs(flow_radius_ode(flow_radius(rho, s), s) - rho));
    rep.near("flow.radius_vs_ode", worst, 0.0, 1e-9, false);
    return rep;
}

inline VerifyReport verify_eh() {
    VerifyReport rep{"eh", {}};
    const double pi2 = std::numbers::pi * std::numbers::pi;
    std::array<double, 3> values{};
    const std::array<double, 3> bolts = {0.5, 1.0, 2.0};
    for (std::size_t i = 0; i < bolts.size(); ++i) {
        const double a = bolts[i];
        const EHConfig cfg(a);
        const auto grid = geometric_grid(10 * a, 1e4 * a, 32);
        const auto rv = renvol_estimate(cfg, grid);
        const auto bx = u_expansion_b(cfg, grid);
        values[i] = rv.value;
        const std::string tag = "a=" + std::to_string(a).substr(0, 3);
        rep.near("renvol." + tag, rv.value, -pi2 * std::pow(a, 4) / 12, 1e-6);
        rep.exact("renvol.negative." + tag, rv.value < 0, rv.value, "< 0");
        rep.near("renvol.fit_residual." + tag, rv.residual, 0.0, 1e-8, false);
        rep.near("b." + tag, bx.b, std::pow(a, 4) / 3, 1e-6);
        rep.near("b_relation." + tag, bx.b_times_area, -4 * rv.value, 1e-6);
    }
    rep.near("renvol.scaling_2a", values[2] / values[1], 16.0, 1e-9);
    rep.near("renvol.scaling_a_half", values[1] / values[0], 16.0, 1e-9);

    const auto flat = ros_check(EHConfig(0.0), 10.0);
    rep.near("ros.equality_flat", flat.lhs, flat.rhs, 1e-12);
    bool strict = true;
    for (double rho : {10.0, 100.0, 1000.0}) {
        const auto r = ros_check(EHConfig(1.0), rho);
        strict = strict && r.ok && r.lhs < r.rhs;
    }
    rep.exact("ros.strict_bolt", strict, strict, true);

    const auto& K = structured_kernel();
    const auto grid = geometric_grid(10, 1e4, 25);
    const auto dirs = sample_directions(32);
    double worst_reduced = std::numeric_limits<double>::infinity();
    double best_u3 = 0;
    for (std::size_t n = 0; n < 5; ++n)
        worst_reduced = std::min(worst_reduced, perturbed_H_decay(K.tensors[StructuredKernel::plus_offset + n], grid, dirs).exponent);
    for (std::size_t n = 0; n < 9; ++n)
        best_u3 = std::max(best_u3, perturbed_H_decay(K.tensors[StructuredKernel::u3_offset + n], grid, dirs).exponent);
    rep.exact("decay.reduced_min", worst_reduced >= 4.8, worst_reduced, ">= 4.8");
    rep.exact("decay.U3_max", best_u3 <= 4.3, best_u3, "<= 4.3");
    rep.exact("decay.gap", worst_reduced - best_u3 >= 0.6, worst_reduced - best_u3, ">= 0.6");
    const auto zero = perturbed_H_decay(TensorField::zero_sym2(), grid, dirs);
    double zero_dev = 0;
    for (const auto& s : zero.samples) zero_dev = std::max(zero_dev, s.max_deviation);
    rep.near("decay.zero_perturbation", zero_dev, 0.0, 1e-15, false);
    return rep;
}

inline VerifyReport verify_suite(const std::string& name) {
    if (name == "symbolic") return verify_symbolic();
    if (name == "kernel") return verify_kernel();
    if (name == "mckay") return verify_mckay();
    if (name == "eh") return verify_eh();
    if (name == "all") {
        VerifyReport all{"all", {}};
        all.append(verify_symbolic());
        all.append(verify_kernel());
        all.append(verify_mckay());
        all.append(verify_eh());
        return all;
    }
    throw ParseError("unknown suite '" + name + "'");
}

} // namespace alevol
