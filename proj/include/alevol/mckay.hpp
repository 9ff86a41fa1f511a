#pragma once

// ADE catalog for finite subgroups of SU(2) and the renormalized-volume formula
//   V = -pi^2 |zeta|^2 / (3 |Gamma|)
// with |zeta|^2 measured by the Killing form on a Cartan subalgebra.

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "exactla.hpp"
#include "gaugeclassify.hpp"
#include "ratpoly.hpp"

namespace alevol {

enum class AdeType { A, D, E };

/// Unit quaternion w + x i + y j + z k.
struct Quaternion {
    double w = 1, x = 0, y = 0, z = 0;

    friend Quaternion operator*(const Quaternion& p, const Quaternion& q) {
        return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z, p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
                p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x, p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
    }
};

/// Matrix of x -> x q on R^4 = H with x = x1 + x2 i + x3 j + x4 k. For unit q this
/// lies in SU(2)_-, the group generated by su2minus_generators().
inline Mat4d right_multiplication(const Quaternion& q) {
    Mat4d m{};
    const std::array<Quaternion, 4> basis = {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
    for (std::size_t c = 0; c < 4; ++c) {
        const Quaternion v = basis[c] * q;
        m[0][c] = v.w;
        m[1][c] = v.x;
        m[2][c] = v.y;
        m[3][c] = v.z;
    }
    return m;
}

/// All products of the generators, deduplicated at 1e-9. Stops at `cap` elements.
inline std::vector<Quaternion> group_closure(const std::vector<Quaternion>& generators, std::size_t cap = 100000) {
    auto key = [](const Quaternion& q) {
        auto r = [](double v) { return static_cast<long long>(std::llround(v * 1e9)); };
        return std::array<long long, 4>{r(q.w), r(q.x), r(q.y), r(q.z)};
    };
    std::vector<Quaternion> elems{Quaternion{}};
    std::set<std::array<long long, 4>> seen{key(Quaternion{})};
    for (std::size_t i = 0; i < elems.size() && elems.size() < cap; ++i)
        for (const auto& g : generators) {
            const Quaternion p = elems[i] * g;
            if (seen.insert(key(p)).second) elems.push_back(p);
        }
    return elems;
}

struct GammaSpec {
    AdeType type = AdeType::A;
    int rank = 1;
    std::string label;
    std::size_t order = 0;
    MatQ cartan;                        // rank x rank
    MatQ killing_gram;                  // kappa(alpha_i^v, alpha_j^v)
    std::vector<Quaternion> generators; // of Gamma inside SU(2)
    std::size_t positive_roots = 0;
};

inline void validate_rank(AdeType type, int n) {
    const bool ok = (type == AdeType::A && n >= 1) || (type == AdeType::D && n >= 4) ||
                    (type == AdeType::E && n >= 6 && n <= 8);
    if (!ok) throw InvalidRank("no ADE diagram of this type with rank " + std::to_string(n));
}

inline MatQ cartan_matrix(AdeType type, int n) {
    validate_rank(type, n);
    const auto un = static_cast<std::size_t>(n);
    MatQ a(un, un);
    auto link = [&](std::size_t i, std::size_t j) {
        a(i, j) = -1;
        a(j, i) = -1;
    };
    for (std::size_t i = 0; i < un; ++i) a(i, i) = 2;
    switch (type) {
    case AdeType::A:
        for (std::size_t i = 0; i + 1 < un; ++i) link(i, i + 1);
        break;
    case AdeType::D:
        for (std::size_t i = 0; i + 2 < un; ++i) link(i, i + 1);
        link(un - 3, un - 1);
        break;
    case AdeType::E:
        // Bourbaki: 1-3-4-5-...-n with 2 attached to 4 (0-based below)
        link(0, 2);
        link(1, 3);
        for (std::size_t i = 2; i + 1 < un; ++i) link(i, i + 1);
        break;
    }
    return a;
}

/// Positive roots as coefficient vectors over the simple roots (simply-laced case):
/// for a positive root b != alpha_i, b + alpha_i is a root iff p - <b, alpha_i> = 1,
/// where p = 1 if b - alpha_i is a root and 0 otherwise.
inline std::vector<std::vector<int>> positive_roots(const MatQ& cartan) {
    const std::size_t n = cartan.rows();
    std::vector<std::vector<int>> roots;
    std::set<std::vector<int>> known;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 1;
        roots.push_back(e);
        known.insert(e);
    }
    for (std::size_t r = 0; r < roots.size(); ++r)
        for (std::size_t i = 0; i < n; ++i) {
            const std::vector<int> b = roots[r];
            long pairing = 0; // <b, alpha_i^v>
            for (std::size_t k = 0; k < n; ++k) pairing += b[k] * cartan(k, i).get_num().get_si();
            std::vector<int> down = b;
            down[i] -= 1;
            const long p = known.count(down) ? 1 : 0;
            if (p - pairing >= 1) {
                std::vector<int> up = b;
                up[i] += 1;
                if (known.insert(up).second) roots.push_back(up);
            }
        }
    return roots;
}

/// kappa(h, h') = sum over all roots alpha(h) alpha(h'), in the simple-coroot basis.
inline MatQ killing_gram(const MatQ& cartan) {
    const std::size_t n = cartan.rows();
    MatQ k(n, n);
    for (const auto& root : positive_roots(cartan)) {
        std::vector<Rational> v(n, Rational(0)); // alpha(alpha_j^v)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) v[j] += root[i] * cartan(i, j);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) k(a, b) += 2 * v[a] * v[b]; // +alpha and -alpha
    }
    return k;
}

inline std::vector<Quaternion> binary_polyhedral_generators(AdeType type, int n) {
    validate_rank(type, n);
    const double pi = std::numbers::pi;
    const Quaternion hurwitz{0.5, 0.5, 0.5, 0.5};
    switch (type) {
    case AdeType::A: {
        const double t = 2 * pi / (n + 1);
        return {{std::cos(t), std::sin(t), 0, 0}};
    }
    case AdeType::D: {
        const double t = pi / (n - 2);
        return {{std::cos(t), std::sin(t), 0, 0}, {0, 0, 1, 0}};
    }
    case AdeType::E:
        if (n == 6) return {hurwitz, {0, 1, 0, 0}};
        if (n == 7) return {hurwitz, {std::sqrt(0.5), std::sqrt(0.5), 0, 0}};
        {
            const double phi = std::numbers::phi;
            return {hurwitz, {phi / 2, 1 / (2 * phi), 0.5, 0}};
        }
    }
    return {};
}

inline std::string ade_label(AdeType type, int n) {
    const char c = type == AdeType::A ? 'A' : type == AdeType::D ? 'D' : 'E';
    return std::string(1, c) + std::to_string(n);
}

inline GammaSpec gamma_spec(AdeType type, int n) {
    validate_rank(type, n);
    GammaSpec s;
    s.type = type;
    s.rank = n;
    s.label = ade_label(type, n);
    s.cartan = cartan_matrix(type, n);
    s.killing_gram = killing_gram(s.cartan);
    s.positive_roots = positive_roots(s.cartan).size();
    s.generators = binary_polyhedral_generators(type, n);
    s.order = group_closure(s.generators).size();
    return s;
}

/// "A1", "D5", "E8", ...
inline GammaSpec gamma_spec(const std::string& label) {
    if (label.size() < 2) throw InvalidRank("bad ADE label '" + label + "'");
    AdeType t;
    switch (label[0]) {
    case 'A': case 'a': t = AdeType::A; break;
    case 'D': case 'd': t = AdeType::D; break;
    case 'E': case 'e': t = AdeType::E; break;
    default: throw InvalidRank("bad ADE label '" + label + "'");
    }
    int n = 0;
    try {
        std::size_t used = 0;
        n = std::stoi(label.substr(1), &used);
        if (used != label.size() - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw InvalidRank("bad ADE label '" + label + "'");
    }
    return gamma_spec(t, n);
}

inline int dual_coxeter_number(AdeType type, int n) {
    validate_rank(type, n);
    switch (type) {
    case AdeType::A: return n + 1;
    case AdeType::D: return 2 * n - 2;
    case AdeType::E: return n == 6 ? 12 : n == 7 ? 18 : 30;
    }
    return 0;
}

/// zeta_1, zeta_2, zeta_3 in the simple-coroot basis.
struct ZetaCoords {
    std::array<std::vector<Rational>, 3> zeta;
};

using PeriodPoint = std::variant<ZetaCoords, ZetaGram>;

inline ZetaGram zeta_gram(const GammaSpec& spec, const ZetaCoords& p) {
    for (const auto& v : p.zeta)
        if (v.size() != static_cast<std::size_t>(spec.rank))
            throw DimensionMismatch("each zeta_a needs " + std::to_string(spec.rank) + " coordinates");
    Mat3Q g;
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) {
            Rational s = 0;
            const auto kb = spec.killing_gram.apply(p.zeta[b]);
            for (std::size_t i = 0; i < kb.size(); ++i) s += p.zeta[a][i] * kb[i];
            g[a][b] = s;
        }
    return ZetaGram(g);
}

/// |zeta|^2 = sum_a kappa(zeta_a, zeta_a), the trace of the Gram matrix.
inline Rational zeta_norm(const GammaSpec& spec, const PeriodPoint& p) {
    if (const auto* c = std::get_if<ZetaCoords>(&p)) return zeta_gram(spec, *c).trace();
    return std::get<ZetaGram>(p).trace();
}

inline double renormalized_volume_from_norm(std::size_t order, double zeta_norm_sq) {
    if (zeta_norm_sq == 0) return 0.0;
    return -std::numbers::pi * std::numbers::pi * zeta_norm_sq / (3.0 * static_cast<double>(order));
}

inline double renormalized_volume(const GammaSpec& spec, const PeriodPoint& p) {
    return renormalized_volume_from_norm(spec.order, to_floating<double>(zeta_norm(spec, p)));
}

/// tau with tau^4 = rho^4 - (2/3)|zeta|^2: the radius of the image of the
/// coordinate rho-sphere under the inverse flow of X1 = (|zeta|^2/6) x / r^4.
inline double flow_radius(double rho, double zeta_norm_sq) {
    const double t4 = std::pow(rho, 4) - 2.0 * zeta_norm_sq / 3.0;
    if (!(rho > 0) || !(t4 > 0)) throw RadiusTooSmall("need rho^4 > (2/3)|zeta|^2");
    return std::pow(t4, 0.25);
}

/// Time-1 flow of dr/dt = |zeta|^2 / (6 r^3) starting at r0, classical RK4.
inline double flow_radius_ode(double r0, double zeta_norm_sq, int steps = 2000) {
    const double h = 1.0 / steps;
    auto f = [zeta_norm_sq](double r) { return zeta_norm_sq / (6.0 * r * r * r); };
    double r = r0;
    for (int s = 0; s < steps; ++s) {
        const double k1 = f(r);
        const double k2 = f(r + 0.5 * h * k1);
        const double k3 = f(r + 0.5 * h * k2);
        const double k4 = f(r + h * k3);
        r += h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
    }
    return r;
}

} // namespace alevol
