#pragma once

// Floating-point checks on the Eguchi-Hanson family
//   g = f^-1 dr^2 + (r^2/4)(s1^2 + s2^2 + f s3^2),  f = 1 - a^4/r^4,  r >= a,
// on T*S^2 (Gamma = Z2), plus the mean curvature of coordinate spheres in
// perturbed flat metrics g0 + h0.
//
// By rotational symmetry the CMC leaves are the r-spheres, so with u = a^4/R^4:
//   H(R) = (3 - u) / (R sqrt(1 - u)),   Vol(r <= R) = pi^2 (R^4 - a^4) / 4,
//   rho^4 = R^4 (1 - u)^2 / (1 - u/3)^4  on the leaf of mean curvature 3/rho.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "gaugeclassify.hpp"
#include "tensorcalc.hpp"

namespace alevol {

struct EHConfig {
    double a = 1.0;

    explicit EHConfig(double bolt = 1.0) : a(bolt) {
        if (!(a >= 0) || !std::isfinite(a)) throw OutOfDomain("bolt parameter must be finite and >= 0");
    }

    double f(double r) const { return 1.0 - std::pow(a / r, 4); }
    double a4() const { return std::pow(a, 4); }
};

/// H = sqrt(f) 3/R + f'/(2 sqrt f) for the r-sphere of radius R > a.
inline double eh_mean_curvature(const EHConfig& cfg, double R) {
    if (!(R > cfg.a) || !(R > 0)) throw OutOfDomain("mean curvature needs R > a");
    const double f = cfg.f(R);
    const double fp = 4.0 * cfg.a4() / std::pow(R, 5);
    return std::sqrt(f) * 3.0 / R + fp / (2.0 * std::sqrt(f));
}

namespace detail {

/// 3/H(R) - rho = R phi(u) - rho with phi(u) = 3 sqrt(1 - u)/(3 - u); increasing in R.
inline double leaf_residual(const EHConfig& cfg, double R, double rho) {
    const double u = cfg.a4() / std::pow(R, 4);
    return R * 3.0 * std::sqrt(1.0 - u) / (3.0 - u) - rho;
}

inline double leaf_residual_dR(const EHConfig& cfg, double R) {
    const double u = cfg.a4() / std::pow(R, 4);
    const double phi = 3.0 * std::sqrt(1.0 - u) / (3.0 - u);
    const double dphi = -1.5 * (1.0 + u) / (std::sqrt(1.0 - u) * (3.0 - u) * (3.0 - u));
    return phi + R * dphi * (-4.0 * u / R);
}

/// (R^4 - rho^4)/a^4 on the CMC leaf, as a function of u = a^4/R^4 without cancellation.
inline double leaf_excess(double u) {
    const double num = 2.0 / 3.0 - u / 3.0 - 4.0 * u * u / 27.0 + u * u * u / 81.0;
    return num / std::pow(1.0 - u / 3.0, 4);
}

} // namespace detail

/// R with eh_mean_curvature(R) = 3/rho: bracketed bisection, then Newton polish.
/// H is strictly decreasing on (a, inf), tends to infinity at the bolt and
/// H(rho) > 3/rho, so the root lies in (max(a, rho), inf). The equation is solved
/// as 3/H(R) = rho, which stays well conditioned where H(R) - 3/rho underflows.
inline double cmc_radius(const EHConfig& cfg, double rho) {
    if (!(rho > 0) || !std::isfinite(rho)) throw NoBracket("rho must be positive and finite");
    if (cfg.a == 0) return rho;
    auto g = [&](double R) { return detail::leaf_residual(cfg, R, rho); };
    double lo = std::max(rho, cfg.a * (1.0 + 1e-12));
    if (g(lo) >= 0) return lo; // root within rounding of rho
    double hi = 2.0 * lo;
    for (int i = 0; g(hi) < 0; ++i) {
        if (i > 200) throw NoBracket("no upper bracket for the CMC radius");
        lo = hi;
        hi *= 2.0;
    }
    const double tol = 1e-13;
    while (hi - lo > std::max(tol, 4 * std::numeric_limits<double>::epsilon() * hi)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g(mid) < 0 ? lo : hi) = mid;
    }
    double R = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        const double next = R - g(R) / detail::leaf_residual_dR(cfg, R);
        if (!(next >= lo && next <= hi)) break;
        R = next;
    }
    return R;
}

struct CMCRecord {
    double rho = 0, R = 0, vol_g = 0, vol_flat = 0, V_rho = 0;
};

struct CMCProfile {
    double a = 0;
    std::vector<CMCRecord> records;

    std::string to_csv() const {
        std::ostringstream os;
        os.precision(17);
        os << "rho,R,vol_g,vol_flat,V_rho\n";
        for (const auto& r : records) os << r.rho << ',' << r.R << ',' << r.vol_g << ',' << r.vol_flat << ',' << r.V_rho << '\n';
        return os.str();
    }
};

inline void to_json(nlohmann::json& j, const CMCProfile& p) {
    j = {{"a", p.a}, {"records", nlohmann::json::array()}};
    for (const auto& r : p.records)
        j["records"].push_back({{"rho", r.rho}, {"R", r.R}, {"vol_g", r.vol_g}, {"vol_flat", r.vol_flat}, {"V_rho", r.V_rho}});
}

inline CMCRecord cmc_record(const EHConfig& cfg, double rho) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CMCRecord r;
    r.rho = rho;
    r.R = cmc_radius(cfg, rho);
    r.vol_g = pi2 * (std::pow(r.R, 4) - cfg.a4()) / 4.0;
    r.vol_flat = pi2 * std::pow(rho, 4) / 4.0;
    const double u = cfg.a4() / std::pow(r.R, 4);
    // vol_g - vol_flat = (pi^2/4) a^4 ((R^4 - rho^4)/a^4 - 1)
    r.V_rho = pi2 / 4.0 * cfg.a4() * (detail::leaf_excess(u) - 1.0);
    return r;
}

inline std::vector<double> geometric_grid(double rho_min, double rho_max, int points) {
    if (points < 2 || !(rho_min > 0) || !(rho_max > rho_min)) throw GridTooSmall("need >= 2 points on 0 < rho_min < rho_max");
    std::vector<double> g(static_cast<std::size_t>(points));
    const double ratio = std::log(rho_max / rho_min) / (points - 1);
    for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = rho_min * std::exp(ratio * i);
    g.back() = rho_max;
    return g;
}

inline CMCProfile cmc_profile(const EHConfig& cfg, std::span<const double> grid) {
    CMCProfile p;
    p.a = cfg.a;
    for (double rho : grid) p.records.push_back(cmc_record(cfg, rho));
    return p;
}

/// Least-squares fit y = value + coefficient * t.
struct LinearFit {
    double value = 0;
    double coefficient = 0;
    double rms_residual = 0;
};

inline LinearFit fit_line(std::span<const double> t, std::span<const double> y) {
    using ld = long double;
    const auto n = static_cast<ld>(t.size());
    ld st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
        stt += static_cast<ld>(t[i]) * t[i];
        sty += static_cast<ld>(t[i]) * y[i];
    }
    const ld den = n * stt - st * st;
    LinearFit f;
    const ld q = (n * sty - st * sy) / den;
    const ld p = (sy - q * st) / n;
    f.value = static_cast<double>(p);
    f.coefficient = static_cast<double>(q);
    ld ss = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const ld r = y[i] - (p + q * t[i]);
        ss += r * r;
    }
    f.rms_residual = static_cast<double>(std::sqrt(ss / n));
    return f;
}

inline void require_cmc_grid(const EHConfig& cfg, std::span<const double> grid) {
    if (grid.size() < 3) throw GridTooSmall("need at least 3 grid points");
    if (grid.front() < 10.0 * cfg.a) throw GridTooSmall("grid must start at rho >= 10 a");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw GridTooSmall("grid must be strictly increasing");
}

struct RenvolEstimate {
    double value = 0;       // extrapolated renormalized volume
    double coefficient = 0; // of rho^-4
    double residual = 0;    // rms fit residual relative to |value| (absolute when value = 0)
};

/// Fits V(rho) = V + c rho^-4 over the grid.
inline RenvolEstimate renvol_estimate(const EHConfig& cfg, std::span<const double> grid) {
    require_cmc_grid(cfg, grid);
    std::vector<double> t, y;
    for (double rho : grid) {
        t.push_back(std::pow(rho, -4));
        y.push_back(cmc_record(cfg, rho).V_rho);
    }
    const auto fit = fit_line(t, y);
    return {fit.value, fit.coefficient,
            fit.value != 0 ? fit.rms_residual / std::abs(fit.value) : fit.rms_residual};
}

struct BExpansion {
    double b = 0;
    double b_times_area = 0; // b |S^3/Z2| = b pi^2
    double coefficient = 0;  // of rho^-6 in R^2
    double residual = 0;     // relative to |b| (absolute when b = 0)
};

/// u = r^2 solves Delta u = 8 on Eguchi-Hanson; on the CMC leaf u = R(rho)^2 = rho^2 + b/rho^2 + c/rho^6 + ...
inline BExpansion u_expansion_b(const EHConfig& cfg, std::span<const double> grid) {
    require_cmc_grid(cfg, grid);
    std::vector<double> t, y;
    for (double rho : grid) {
        const double R = cmc_radius(cfg, rho);
        const double u = cfg.a4() / std::pow(R, 4);
        const double excess = cfg.a4() * detail::leaf_excess(u); // R^4 - rho^4
        t.push_back(std::pow(rho, -4));
        y.push_back(excess / (R * R + rho * rho) * rho * rho); // (R^2 - rho^2) rho^2
    }
    const auto fit = fit_line(t, y);
    BExpansion out;
    out.b = fit.value;
    out.coefficient = fit.coefficient;
    out.b_times_area = fit.value * std::numbers::pi * std::numbers::pi;
    out.residual = fit.value != 0 ? fit.rms_residual / std::abs(fit.value) : fit.rms_residual;
    return out;
}

struct RosReport {
    double lhs = 0, rhs = 0;
    bool ok = false;
};

/// Vol(Omega_rho) <= (rho/4) Area(Sigma_rho), boundary mean curvature 3/rho.
inline RosReport ros_check(const EHConfig& cfg, double rho) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double R = cmc_radius(cfg, rho);
    RosReport r;
    r.lhs = pi2 * (std::pow(R, 4) - cfg.a4()) / 4.0;
    r.rhs = rho / 4.0 * pi2 * std::pow(R, 3) * std::sqrt(cfg.f(R));
    r.ok = r.lhs <= r.rhs * (1.0 + 1e-12);
    return r;
}

// ---------------------------------------------------------------------------
// Mean curvature of coordinate spheres in g0 + h0

/// Deterministic directions on S^3 (mt19937_64 + Box-Muller; both fully specified).
inline std::vector<std::array<double, 4>> sample_directions(std::size_t n, std::uint64_t seed = 20200101) {
    std::mt19937_64 gen(seed);
    auto uniform = [&gen] { return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53; };
    std::vector<std::array<double, 4>> dirs;
    while (dirs.size() < n) {
        std::array<double, 4> v{};
        for (std::size_t i = 0; i < 4; i += 2) {
            const double r = std::sqrt(-2.0 * std::log(uniform()));
            const double t = 2.0 * std::numbers::pi * uniform();
            v[i] = r * std::cos(t);
            v[i + 1] = r * std::sin(t);
        }
        const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
        for (double& c : v) c /= norm;
        dirs.push_back(v);
    }
    return dirs;
}

/// Symbolic first derivatives of a symmetric 2-tensor, ready for repeated numeric evaluation.
class JetEvaluator {
public:
    explicit JetEvaluator(const TensorField& h) : h_(h) {
        if (!h.is_symmetric2()) throw RankMismatch("JetEvaluator expects a symmetric 2-tensor");
        for (int a = 0; a < 4; ++a)
            for (int i = 0; i < 4; ++i)
                for (int j = i; j < 4; ++j) d_[static_cast<std::size_t>(a)][sym_index(i, j)] = h(i, j).partial(a);
    }

    template <class T>
    void evaluate(std::span<const T, 4> x, std::array<std::array<T, 4>, 4>& h,
                  std::array<std::array<std::array<T, 4>, 4>, 4>& dh) const {
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                h[i][j] = h[j][i] = h_(i, j).evaluate(x);
                for (std::size_t a = 0; a < 4; ++a) dh[a][i][j] = dh[a][j][i] = d_[a][sym_index(i, j)].evaluate(x);
            }
    }

private:
    TensorField h_;
    std::array<std::array<RadialFn, 10>, 4> d_;
};

/// rho H - 3 for the sphere |x| = rho in g0 + amplitude h0, evaluated as the mean
/// curvature of the unit sphere in g0 + eps h0 (eps = amplitude rho^-4) through
///   H = (Delta u - Hess u(grad u, grad u)/|grad u|^2) / |grad u|,  u = r^2.
/// Every term is split into its flat value plus an O(eps) remainder so that the
/// deviation is computed without subtracting O(1) quantities.
template <class T>
T unit_sphere_deviation(const JetEvaluator& jet, const std::array<double, 4>& dir, T eps) {
    std::array<T, 4> x{};
    T n2 = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        x[i] = static_cast<T>(dir[i]);
        n2 += x[i] * x[i];
    }
    const T nrm = std::sqrt(n2);
    for (auto& c : x) c /= nrm;

    std::array<std::array<T, 4>, 4> h{};
    std::array<std::array<std::array<T, 4>, 4>, 4> dh{};
    jet.evaluate<T>(std::span<const T, 4>(x), h, dh);
    for (auto& row : h)
        for (auto& v : row) v *= eps;
    for (auto& m : dh)
        for (auto& row : m)
            for (auto& v : row) v *= eps;

    // A = I + h; Cholesky for positivity, Gauss-Jordan for A^-1.
    std::array<std::array<T, 4>, 4> A{}, inv{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            A[i][j] = (i == j ? T(1) : T(0)) + h[i][j];
            inv[i][j] = i == j ? T(1) : T(0);
        }
    {
        std::array<std::array<T, 4>, 4> L{};
        for (int j = 0; j < 4; ++j) {
            T s = A[j][j];
            for (int k = 0; k < j; ++k) s -= L[j][k] * L[j][k];
            if (!(s > 0)) throw MetricNotPositive("g0 + h0 is not positive definite at a sample point");
            L[j][j] = std::sqrt(s);
            for (int i = j + 1; i < 4; ++i) {
                T t = A[i][j];
                for (int k = 0; k < j; ++k) t -= L[i][k] * L[j][k];
                L[i][j] = t / L[j][j];
            }
        }
    }
    {
        auto M = A;
        for (int c = 0; c < 4; ++c) {
            int p = c;
            for (int r = c + 1; r < 4; ++r)
                if (std::abs(M[r][c]) > std::abs(M[p][c])) p = r;
            std::swap(M[p], M[c]);
            std::swap(inv[p], inv[c]);
            const T piv = M[c][c];
            for (int k = 0; k < 4; ++k) {
                M[c][k] /= piv;
                inv[c][k] /= piv;
            }
            for (int r = 0; r < 4; ++r) {
                if (r == c) continue;
                const T f = M[r][c];
                for (int k = 0; k < 4; ++k) {
                    M[r][k] -= f * M[c][k];
                    inv[r][k] -= f * inv[c][k];
                }
            }
        }
    }
    // P = g^-1 - I = -A^-1 h
    std::array<std::array<T, 4>, 4> P{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            T s = 0;
            for (int k = 0; k < 4; ++k) s -= inv[i][k] * h[k][j];
            P[i][j] = s;
        }
    // Gamma^k_ij contracted with x_k: C_ij
    std::array<std::array<T, 4>, 4> C{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            T s = 0;
            for (int k = 0; k < 4; ++k) {
                T gk = 0; // Gamma^k_ij
                for (int l = 0; l < 4; ++l) {
                    const T lowered = (dh[i][j][l] + dh[j][i][l] - dh[l][i][j]) / 2;
                    gk += ((k == l ? T(1) : T(0)) + P[k][l]) * lowered;
                }
                s += gk * x[k];
            }
            C[i][j] = s;
        }
    std::array<T, 4> Px{}, v{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) Px[i] += P[i][j] * x[j];
        v[i] = 2 * x[i] + 2 * Px[i];
    }
    T s = 0, trP = 0, ww = 0, ginvC = 0, Cvv = 0;
    for (int i = 0; i < 4; ++i) {
        s += x[i] * Px[i];
        trP += P[i][i];
        ww += 4 * Px[i] * Px[i];
        for (int j = 0; j < 4; ++j) {
            ginvC += ((i == j ? T(1) : T(0)) + P[i][j]) * C[i][j];
            Cvv += C[i][j] * v[i] * v[j];
        }
    }
    const T dN = 2 * trP - 2 * ginvC - (2 * s + ww / 2 - Cvv / 2) / (1 + s);
    const T root = std::sqrt(1 + s);
    return 3 * (dN / 6 - s / (1 + root)) / root;
}

struct DecaySample {
    double rho = 0;
    double max_deviation = 0; // max over directions of |rho H - 3|
};

struct DecayFit {
    double exponent = 0; // negated log-log slope; +inf when every deviation vanishes
    std::vector<DecaySample> samples;
};

/// Decay rate of max |rho H - 3| for coordinate rho-spheres of g0 + amplitude h0.
/// Evaluated in long double: the deviation of an improved leading term is
/// O(rho^-8), below double resolution near rho = 1e4.
inline DecayFit perturbed_H_decay(const TensorField& h0, std::span<const double> grid,
                                  std::span<const std::array<double, 4>> dirs, double amplitude = 1.0) {
    require_in_kernel(h0);
    if (grid.size() < 2) throw GridTooSmall("need at least 2 radii");
    if (dirs.empty()) throw GridTooSmall("need at least one sample direction");
    const JetEvaluator jet(h0);
    DecayFit fit;
    for (double rho : grid) {
        const long double eps = static_cast<long double>(amplitude) * std::pow(static_cast<long double>(rho), -4.0L);
        long double worst = 0;
        for (const auto& d : dirs) worst = std::max(worst, std::abs(unit_sphere_deviation<long double>(jet, d, eps)));
        fit.samples.push_back({rho, static_cast<double>(worst)});
    }
    std::vector<double> lr, ld;
    for (const auto& s : fit.samples)
        if (s.max_deviation > 0) {
            lr.push_back(std::log(s.rho));
            ld.push_back(std::log(s.max_deviation));
        }
    if (lr.size() < 2) {
        fit.exponent = std::numeric_limits<double>::infinity();
        return fit;
    }
    fit.exponent = -fit_line(lr, ld).coefficient;
    return fit;
}

} // namespace alevol
