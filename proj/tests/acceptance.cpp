// One PASS/FAIL line per acceptance criterion. Tolerances are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "alevol/ehnum.hpp"
#include "alevol/gaugeclassify.hpp"
#include "alevol/mckay.hpp"
#include "alevol/verify.hpp"

using namespace alevol;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome kernel_dimension() {
    const auto t0 = std::chrono::steady_clock::now();
    const MatQ H = assemble_H();
    const std::size_t nullity = H.cols() - rank(H);
    const double dt = seconds_since(t0);
    return {nullity == 26 && H.rows() == 80 && H.cols() == 90 && dt < 10.0,
            "nullity=" + std::to_string(nullity) + " time=" + std::to_string(dt) + "s (limit 10s)"};
}

Outcome kernel_structure() {
    const KernelSplit s = kernel_split();
    const auto& K = structured_kernel();
    const bool spans = SubspaceQ::span(coords::domain_dim, K.coordinates) == nullspace(H_matrix());
    const std::size_t sum = s.U1 + s.U2 + s.U3 + s.S4plus + s.S4minus;
    const bool ok = s.U1 == 1 && s.U2 == 6 && s.U3 == 9 && s.S4plus == 5 && s.S4minus == 5 && s.total == sum && spans;
    return {ok, "dims U1,U2,U3,S4+,S4- = " + std::to_string(s.U1) + "," + std::to_string(s.U2) + "," +
                    std::to_string(s.U3) + "," + std::to_string(s.S4plus) + "," + std::to_string(s.S4minus) +
                    " sum-dim=" + std::to_string(s.total) + " equals-ker=" + (spans ? "yes" : "no")};
}

Outcome kronheimer_identities() {
    RationalSampler rng(2024);
    const SubspaceQ u12 = subspace_sum(basis_U(GaugePart::U1), basis_U(GaugePart::U2));
    int good = 0;
    for (int t = 0; t < 20; ++t) {
        const ZetaGram z = rng.gram();
        const TensorField F = kronheimer_F(z);
        const bool three = trace(F).is_zero() && divergence(F).is_zero() && laplacian(F).is_zero();
        const bool gauge = u12.contains(coords::to_coordinates(F - reduced_kron_G(z)));
        const Decomposition d = decompose(F);
        const bool proj = gauge_term(d.c1 * identity4()) == hess_inverse_r2() * (Rational(-1, 6) * z.trace());
        if (three && gauge && proj) ++good;
    }
    return {good == 20, std::to_string(good) + "/20 Gram matrices satisfy all identities exactly"};
}

Outcome characterizations() {
    int good = 0, total = 0;
    for (const auto& t : structured_kernel().tensors) {
        ++total;
        good += characterize(t).equivalences_hold();
    }
    RationalSampler rng(77);
    for (int i = 0; i < 20; ++i) {
        ++total;
        good += characterize(rng.kernel_element()).equivalences_hold();
    }
    return {good == total && total == 46, std::to_string(good) + "/" + std::to_string(total) + " kernel elements"};
}

Outcome su2_invariance() {
    int good = 0, total = 0;
    RationalSampler rng(5150);
    for (int t = 0; t < 20; ++t) {
        ++total;
        good += su2minus_invariant(kronheimer_F(rng.gram()));
    }
    for (const auto& z : tracefree_zeta_basis()) {
        ++total;
        good += su2minus_invariant(reduced_kron_G(z));
    }
    return {good == total, std::to_string(good) + "/" + std::to_string(total) + " tensors invariant under J1,J2,J3"};
}

Outcome bochner() {
    RationalSampler rng(31337);
    int good = 0;
    for (int t = 0; t < 20; ++t) {
        const LinearVectorField X{rng.mat4(), t % 3};
        good += bianchi(lie_metric(X)) == laplacian(flat(X.as_vector()));
    }
    return {good == 20, std::to_string(good) + "/20 random fields, rpow in {0,1,2}"};
}

Outcome renormalized_volume_eh() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    double v1 = 0, v2 = 0;
    for (double a : {0.5, 1.0, 2.0}) {
        const auto r = renvol_estimate(EHConfig(a), geometric_grid(10 * a, 1e4 * a, 32));
        const double expected = -kPi2 * std::pow(a, 4) / 12;
        const double rel = std::abs(r.value - expected) / std::abs(expected);
        ok = ok && rel <= 1e-6 && r.value < 0;
        char part[48];
        std::snprintf(part, sizeof part, "a=%.1f rel=%.1e ", a, rel);
        detail += part;
        if (a == 1.0) v1 = r.value;
        if (a == 2.0) v2 = r.value;
    }
    const double ratio_err = std::abs(v2 / v1 - 16.0) / 16.0;
    const double dt = seconds_since(t0);
    ok = ok && ratio_err <= 1e-9 && dt < 60.0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "ratio-err=%.2e time=%.2fs", ratio_err, dt);
    return {ok, detail + buf};
}

Outcome b_relation() {
    bool ok = true;
    std::string detail;
    for (double a : {0.5, 1.0, 2.0}) {
        const auto grid = geometric_grid(10 * a, 1e4 * a, 32);
        const auto b = u_expansion_b(EHConfig(a), grid);
        const auto v = renvol_estimate(EHConfig(a), grid);
        const double rel = std::abs(b.b_times_area + 4 * v.value) / std::abs(4 * v.value);
        ok = ok && rel <= 1e-6;
        if (a == 1.0) {
            ok = ok && std::abs(b.b - 1.0 / 3.0) <= 1e-6;
            detail += "b(1)=" + std::to_string(b.b) + " ";
        }
        char buf[48];
        std::snprintf(buf, sizeof buf, "rel(a=%.1f)=%.1e ", a, rel);
        detail += buf;
    }
    return {ok, detail};
}

Outcome decay() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& K = structured_kernel();
    const auto grid = geometric_grid(10, 1e4, 25);
    const auto dirs = sample_directions(32);
    double min_reduced = 1e300;
    for (std::size_t n = 0; n < 5; ++n)
        min_reduced = std::min(min_reduced, perturbed_H_decay(K.tensors[StructuredKernel::plus_offset + n], grid, dirs).exponent);
    // unit U3 component added to a reduced term
    const TensorField mixed = K.tensors[StructuredKernel::plus_offset] + K.tensors[StructuredKernel::u3_offset + 2];
    const double with_u3 = perturbed_H_decay(mixed, grid, dirs).exponent;
    const auto zero = perturbed_H_decay(TensorField::zero_sym2(), grid, dirs);
    double zero_dev = 0;
    for (const auto& s : zero.samples) zero_dev = std::max(zero_dev, s.max_deviation);
    const double dt = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "min reduced=%.3f (>=4.8) with U3=%.3f (<=4.3) zero max|rho H-3|=%.1e time=%.2fs",
                  min_reduced, with_u3, zero_dev, dt);
    return {min_reduced >= 4.8 && with_u3 <= 4.3 && zero_dev <= 1e-15 && dt < 120.0, buf};
}

Outcome flow_relation() {
    double worst = 0;
    for (double rho : {2.0, 5.0, 10.0, 100.0})
        for (double s : {0.0, 1.0, 6.0}) worst = std::max(worst, std::abs(flow_radius_ode(flow_radius(rho, s), s) - rho));
    char buf[64];
    std::snprintf(buf, sizeof buf, "max |ODE - analytic| = %.2e (tol 1e-9)", worst);
    return {worst <= 1e-9, buf};
}

Outcome ros() {
    bool ok = true;
    double flat_rel = 0;
    for (double rho : geometric_grid(10, 1e4, 32)) {
        const auto f = ros_check(EHConfig(0.0), rho);
        const auto b = ros_check(EHConfig(1.0), rho);
        flat_rel = std::max(flat_rel, std::abs(f.lhs - f.rhs) / f.rhs);
        ok = ok && f.ok && b.ok;
    }
    char buf[80];
    std::snprintf(buf, sizeof buf, "a in {0,1} hold; flat equality rel-err %.1e (tol 1e-12)", flat_rel);
    return {ok && flat_rel <= 1e-12, buf};
}

Outcome volume_formula() {
    const GammaSpec a1 = gamma_spec("A1");
    const double v = renormalized_volume(a1, ZetaGram::diag(1, 0, 0));
    const double rel = std::abs(v + kPi2 / 6) / (kPi2 / 6);
    const double v3 = renormalized_volume(a1, ZetaGram::diag(9, 0, 0)); // zeta scaled by 3
    const double scale_err = std::abs(v3 / v - 9.0) / 9.0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "V=%.16f rel-err=%.1e scaling-err=%.1e", v, rel, scale_err);
    return {rel <= 4 * std::numeric_limits<double>::epsilon() && scale_err <= 4 * std::numeric_limits<double>::epsilon(),
            buf};
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"kernel dimension", kernel_dimension},
        {"kernel structure", kernel_structure},
        {"kronheimer identities", kronheimer_identities},
        {"characterizations", characterizations},
        {"su2 minus invariance", su2_invariance},
        {"flat bochner identity", bochner},
        {"eguchi-hanson renormalized volume", renormalized_volume_eh},
        {"b relation", b_relation},
        {"mean curvature decay", decay},
        {"flow radius relation", flow_relation},
        {"ros inequality", ros},
        {"volume formula", volume_formula},
    };
    int failures = 0, n = 0;
    for (const auto& [name, run] : criteria) {
        ++n;
        Outcome o{false, ""};
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", n - failures, n);
    return failures == 0 ? 0 : 1;
}
