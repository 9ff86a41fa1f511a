#pragma once

// Leading terms of Ricci-flat ALE metrics: the equivariant map
//   H : Sym^2 R^4 (x) Sym^2_0 R^4 -> R^4 (x) Sym^3 R^4,  h (x) q  ->  r^8 B(q(x) h / r^6),
// its 26-dimensional kernel, and the structured basis
//   S4+ (5)  S4- (5)  U1 (1)  U2 (6)  U3 (9)
// built from reduced Kronheimer terms and harmonic gauge terms L_X g0, X = r^-4 L x.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "exactla.hpp"
#include "parallel.hpp"
#include "ratpoly.hpp"
#include "tensorcalc.hpp"

namespace alevol {

using Mat3Q = std::array<std::array<Rational, 3>, 3>;

/// Gram matrix (<zeta_i, zeta_j>) of a period point.
class ZetaGram {
public:
    ZetaGram() {
        for (auto& row : z_) row.fill(Rational(0));
    }
    explicit ZetaGram(const Mat3Q& z) : z_(z) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (z_[i][j] != z_[j][i]) throw DimensionMismatch("zeta Gram matrix must be symmetric");
    }
    /// From the upper triangle z11, z12, z13, z22, z23, z33.
    static ZetaGram from_upper(std::span<const Rational> u) {
        if (u.size() != 6) throw DimensionMismatch("upper triangle of a 3x3 Gram matrix has 6 entries");
        Mat3Q z;
        z[0] = {u[0], u[1], u[2]};
        z[1] = {u[1], u[3], u[4]};
        z[2] = {u[2], u[4], u[5]};
        return ZetaGram(z);
    }
    static ZetaGram identity() {
        ZetaGram g;
        for (int i = 0; i < 3; ++i) g.z_[i][i] = 1;
        return g;
    }
    static ZetaGram diag(const Rational& a, const Rational& b, const Rational& c) {
        ZetaGram g;
        g.z_[0][0] = a;
        g.z_[1][1] = b;
        g.z_[2][2] = c;
        return g;
    }

    const Rational& operator()(int i, int j) const { return z_[i][j]; }
    const Mat3Q& matrix() const { return z_; }
    Rational trace() const { return z_[0][0] + z_[1][1] + z_[2][2]; }

    /// Sylvester test on the leading principal minors, extended to the semidefinite
    /// case by testing every principal minor.
    bool positive_semidefinite() const {
        auto m2 = [&](int a, int b) -> Rational { return z_[a][a] * z_[b][b] - z_[a][b] * z_[b][a]; };
        Rational det = z_[0][0] * m2(1, 2) - z_[0][1] * (z_[1][0] * z_[2][2] - z_[1][2] * z_[2][0]) +
                       z_[0][2] * (z_[1][0] * z_[2][1] - z_[1][1] * z_[2][0]);
        return z_[0][0] >= 0 && z_[1][1] >= 0 && z_[2][2] >= 0 && m2(0, 1) >= 0 && m2(0, 2) >= 0 &&
               m2(1, 2) >= 0 && det >= 0;
    }

    friend ZetaGram operator+(const ZetaGram& a, const ZetaGram& b) {
        Mat3Q z;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) z[i][j] = a.z_[i][j] + b.z_[i][j];
        return ZetaGram(z);
    }
    friend ZetaGram operator*(const Rational& s, const ZetaGram& a) {
        Mat3Q z;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) z[i][j] = s * a.z_[i][j];
        return ZetaGram(z);
    }

private:
    Mat3Q z_;
};

// ---------------------------------------------------------------------------
// Complex structures and the 1-forms alpha_j = I_j(r dr)

struct ComplexStructures {
    std::array<Mat4Q, 3> I;
    std::array<TensorField, 3> alpha;
};

inline Mat4Q mat4(std::initializer_list<std::initializer_list<int>> rows) {
    Mat4Q m = zero4();
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (int v : row) m[i][j++] = v;
        ++i;
    }
    return m;
}

/// r dr = sum_i x_i dx_i
inline TensorField radial_one_form() {
    return TensorField::one_form({RadialFn(Poly4::variable(0), 0), RadialFn(Poly4::variable(1), 0),
                                  RadialFn(Poly4::variable(2), 0), RadialFn(Poly4::variable(3), 0)});
}

/// Lowered form of the linear vector field x -> M x.
inline TensorField linear_one_form(const Mat4Q& m) {
    return flat(LinearVectorField{m, 0}.as_vector());
}

/// Left quaternion multiplication by i, j, k under x = x1 + x2 i + x3 j + x4 k:
/// I1 x = (-x2, x1, -x4, x3), I2 x = (-x3, x4, x1, -x2), I3 = I1 I2.
inline const ComplexStructures& complex_structures() {
    static const ComplexStructures cs = [] {
        ComplexStructures c;
        c.I[0] = mat4({{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}});
        c.I[1] = mat4({{0, 0, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, -1, 0, 0}});
        c.I[2] = c.I[0] * c.I[1];
        for (std::size_t k = 0; k < 3; ++k) c.alpha[k] = linear_one_form(c.I[k]);
        return c;
    }();
    return cs;
}

/// Right quaternion multiplication by i, j, k; these span su(2)_- and commute with I1, I2, I3.
inline const std::array<Mat4Q, 3>& su2minus_generators() {
    static const std::array<Mat4Q, 3> gens = {
        mat4({{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}}),
        mat4({{0, 0, -1, 0}, {0, 0, 0, -1}, {1, 0, 0, 0}, {0, 1, 0, 0}}),
        mat4({{0, 0, 0, -1}, {0, 0, 1, 0}, {0, -1, 0, 0}, {1, 0, 0, 0}}),
    };
    return gens;
}

inline bool su2minus_invariant(const TensorField& h) {
    if (!h.is_symmetric2()) throw RankMismatch("su2minus_invariant expects a symmetric 2-tensor");
    for (const auto& j : su2minus_generators())
        if (!lie_derivative(LinearVectorField{j, 0}, h).is_zero()) return false;
    return true;
}

/// Divides every component by r^(2k).
inline TensorField divide_by_r_power(const TensorField& t, int k) {
    const RadialFn w(Poly4(1), k);
    TensorField out = t;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) out.set(i, j, t(i, j) * w);
    return out;
}

// ---------------------------------------------------------------------------
// Coordinatization of the domain (90) and codomain (80) of H.

namespace coords {

inline constexpr std::size_t domain_dim = 90;
inline constexpr std::size_t codomain_dim = 80;

/// Symmetric index pairs in the fixed order (1,2),(1,3),(1,4),(2,3),(2,4),(3,4),(1,1),(2,2),(3,3),(4,4); 0-based.
inline constexpr std::array<std::pair<int, int>, 10> pairs = {{
    {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {0, 0}, {1, 1}, {2, 2}, {3, 3},
}};

/// Cubic monomials x_a x_b x_c with a <= b <= c in the fixed 20-element order; 0-based.
inline const std::array<std::array<int, 3>, 20>& cubic_monomials() {
    static const std::array<std::array<int, 3>, 20> b = [] {
        std::array<std::array<int, 3>, 20> out{};
        std::size_t n = 0;
        for (int a = 0; a < 4; ++a)
            for (int bb = a; bb < 4; ++bb)
                for (int c = bb; c < 4; ++c) out[n++] = {a, bb, c};
        return out;
    }();
    return b;
}

inline Exponent cubic_exponent(std::size_t l) {
    Exponent e{0, 0, 0, 0};
    for (int v : cubic_monomials()[l]) e[static_cast<std::size_t>(v)] += 1;
    return e;
}

/// Symmetric matrix with ones at (i,j) and (j,i) for the m-th pair.
inline Mat4Q pair_matrix(std::size_t m) {
    Mat4Q h = zero4();
    auto [i, j] = pairs.at(m);
    h[i][j] = 1;
    h[j][i] = 1;
    return h;
}

/// The n-th trace-free basis matrix (n < 9): pair_matrix(n) minus a quarter of its trace.
inline Mat4Q tracefree_matrix(std::size_t n) {
    if (n >= 9) throw std::out_of_range("trace-free basis has 9 elements");
    Mat4Q q = pair_matrix(n);
    const Rational t = trace(q) / 4;
    for (int i = 0; i < 4; ++i) q[i][i] -= t;
    return q;
}

/// q(x) = q_uv x^u x^v
inline Poly4 quadratic_form(const Mat4Q& q) {
    Poly4 p;
    for (int u = 0; u < 4; ++u)
        for (int v = 0; v < 4; ++v)
            if (q[u][v] != 0) p += Poly4::variable(u) * Poly4::variable(v) * q[u][v];
    return p;
}

/// Domain basis element 9m + n: (q_n(x) / r^6) h_m.
inline TensorField domain_tensor(std::size_t m, std::size_t n) {
    const Mat4Q h = pair_matrix(m);
    const RadialFn f(quadratic_form(tracefree_matrix(n)), 3);
    return TensorField::sym2([&](int i, int j) { return h[i][j] == 0 ? RadialFn() : f * h[i][j]; });
}

/// Coordinates of a harmonic quadratic polynomial in the basis q_0..q_8, or
/// nullopt if p is not a harmonic quadratic form.
inline std::optional<std::array<Rational, 9>> harmonic_quadratic_coords(const Poly4& p) {
    std::array<Rational, 9> c;
    for (auto& v : c) v = 0;
    if (p.is_zero()) return c;
    if (p.homogeneous_degree() != 2) return std::nullopt;
    auto coef = [&](int a, int b) {
        Exponent e{0, 0, 0, 0};
        e[static_cast<std::size_t>(a)] += 1;
        e[static_cast<std::size_t>(b)] += 1;
        return p.coefficient(e);
    };
    for (std::size_t n = 0; n < 6; ++n) c[n] = coef(pairs[n].first, pairs[n].second) / 2;
    for (int k = 0; k < 3; ++k) c[6 + static_cast<std::size_t>(k)] = coef(k, k) - coef(3, 3);
    Poly4 rebuilt;
    for (std::size_t n = 0; n < 9; ++n) rebuilt += quadratic_form(tracefree_matrix(n)) * c[n];
    if (!(rebuilt == p)) return std::nullopt;
    return c;
}

/// The 90 coordinates of h = sum c_{9m+n} (q_n / r^6) h_m. Throws NotInKernel if some
/// component is not of the form (harmonic quadratic) / r^6.
inline std::vector<Rational> to_coordinates(const TensorField& h) {
    if (!h.is_symmetric2()) throw RankMismatch("coordinates exist only for symmetric 2-tensors");
    std::vector<Rational> v(domain_dim, Rational(0));
    for (std::size_t m = 0; m < pairs.size(); ++m) {
        const RadialFn& f = h(pairs[m].first, pairs[m].second);
        if (f.is_zero()) continue;
        if (f.rpow() > 3)
            throw NotInKernel("component (" + std::to_string(pairs[m].first + 1) + "," +
                              std::to_string(pairs[m].second + 1) + ") is not q/r^6");
        auto c = harmonic_quadratic_coords(f.numerator_over(3));
        if (!c)
            throw NotInKernel("component (" + std::to_string(pairs[m].first + 1) + "," +
                              std::to_string(pairs[m].second + 1) + ") is not a harmonic quadratic over r^6");
        for (std::size_t n = 0; n < 9; ++n) v[9 * m + n] = (*c)[n];
    }
    return v;
}

inline TensorField from_coordinates(std::span<const Rational> v) {
    if (v.size() != domain_dim) throw DimensionMismatch("expected 90 coordinates");
    TensorField h = TensorField::zero_sym2();
    for (std::size_t m = 0; m < pairs.size(); ++m) {
        Poly4 p;
        for (std::size_t n = 0; n < 9; ++n)
            if (v[9 * m + n] != 0) p += quadratic_form(tracefree_matrix(n)) * v[9 * m + n];
        h.set(pairs[m].first, pairs[m].second, RadialFn(std::move(p), 3));
    }
    return h;
}

/// Codomain coordinates: row 20k + l holds the coefficient of the l-th cubic
/// monomial in the k-th component of r^8 w, for a 1-form w with rpow <= 4.
inline std::vector<Rational> codomain_coordinates(const TensorField& w) {
    if (w.rank() != 1) throw RankMismatch("codomain elements are 1-forms");
    std::vector<Rational> out(codomain_dim, Rational(0));
    for (int k = 0; k < 4; ++k) {
        if (w(k).is_zero()) continue;
        const Poly4 cubic = w(k).numerator_over(4);
        if (cubic.homogeneous_degree() != 3) throw NonHomogeneous("r^8 B(h) is not a cubic form");
        for (std::size_t l = 0; l < 20; ++l)
            out[20 * static_cast<std::size_t>(k) + l] = cubic.coefficient(cubic_exponent(l));
    }
    return out;
}

} // namespace coords

/// The 80 x 90 matrix of H; column 9m + n holds r^8 B((q_n/r^6) h_m) in codomain coordinates.
inline MatQ assemble_H() {
    std::vector<std::vector<Rational>> columns(coords::domain_dim);
    parallel_for(coords::domain_dim, [&](std::size_t col) {
        columns[col] = coords::codomain_coordinates(bianchi(coords::domain_tensor(col / 9, col % 9)));
    });
    MatQ H(coords::codomain_dim, coords::domain_dim);
    for (std::size_t c = 0; c < coords::domain_dim; ++c)
        for (std::size_t r = 0; r < coords::codomain_dim; ++r) H(r, c) = columns[c][r];
    return H;
}

inline const MatQ& H_matrix() {
    static const MatQ h = assemble_H();
    return h;
}

// ---------------------------------------------------------------------------
// Gauge terms

/// L_X g0 for X = r^-4 L x.
inline TensorField gauge_term(const Mat4Q& L) { return lie_metric(LinearVectorField{L, 2}); }

/// Elementary skew matrices E_ij - E_ji in pair order (6).
inline Mat4Q skew_matrix(std::size_t m) {
    if (m >= 6) throw std::out_of_range("skew basis has 6 elements");
    Mat4Q s = zero4();
    auto [i, j] = coords::pairs[m];
    s[i][j] = 1;
    s[j][i] = -1;
    return s;
}

enum class GaugePart { U1, U2, U3 };

inline std::vector<Mat4Q> gauge_matrices(GaugePart part) {
    std::vector<Mat4Q> out;
    switch (part) {
    case GaugePart::U1: out.push_back(identity4()); break;
    case GaugePart::U2:
        for (std::size_t m = 0; m < 6; ++m) out.push_back(skew_matrix(m));
        break;
    case GaugePart::U3:
        for (std::size_t n = 0; n < 9; ++n) out.push_back(coords::tracefree_matrix(n));
        break;
    }
    return out;
}

inline SubspaceQ basis_U(GaugePart part) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& L : gauge_matrices(part)) rows.push_back(coords::to_coordinates(gauge_term(L)));
    return SubspaceQ::span(coords::domain_dim, rows);
}

// ---------------------------------------------------------------------------
// Kronheimer terms

/// -r^6 F(z) = z11((rdr)^2 + a1^2 - a2^2 - a3^2) + cyclic + 2 z12 (a1.a2 - rdr.a3) + ...
inline TensorField kronheimer_F(const ZetaGram& z) {
    const auto& cs = complex_structures();
    const TensorField rdr = radial_one_form();
    const auto& a = cs.alpha;
    const TensorField rr = sym_product(rdr, rdr);
    std::array<TensorField, 3> sq{sym_product(a[0], a[0]), sym_product(a[1], a[1]), sym_product(a[2], a[2])};
    TensorField expr = TensorField::zero_sym2();
    for (int i = 0; i < 3; ++i) {
        if (z(i, i) == 0) continue;
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        expr += (rr + sq[i] - sq[j] - sq[k]) * z(i, i);
    }
    // (i, j, k): off-diagonal pair and the complementary index
    const std::array<std::array<int, 3>, 3> off = {{{0, 1, 2}, {0, 2, 1}, {1, 2, 0}}};
    for (const auto& [i, j, k] : off) {
        if (z(i, j) == 0) continue;
        expr += (sym_product(a[i], a[j]) - sym_product(rdr, a[k])) * (2 * z(i, j));
    }
    return divide_by_r_power(-expr, 3);
}

/// -(3/2) r^6 G(z) = z11(2 a1^2 - a2^2 - a3^2) + cyclic + 3 z12 a1.a2 + 3 z13 a1.a3 + 3 z23 a2.a3
inline TensorField reduced_kron_G(const ZetaGram& z) {
    const auto& a = complex_structures().alpha;
    std::array<TensorField, 3> sq{sym_product(a[0], a[0]), sym_product(a[1], a[1]), sym_product(a[2], a[2])};
    TensorField expr = TensorField::zero_sym2();
    for (int i = 0; i < 3; ++i) {
        if (z(i, i) == 0) continue;
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        expr += (sq[i] * Rational(2) - sq[j] - sq[k]) * z(i, i);
    }
    const std::array<std::array<int, 2>, 3> off = {{{0, 1}, {0, 2}, {1, 2}}};
    for (const auto& [i, j] : off)
        if (z(i, j) != 0) expr += sym_product(a[i], a[j]) * (3 * z(i, j));
    return divide_by_r_power(expr * Rational(-2, 3), 3);
}

inline Mat4Q default_reflection() { return mat4({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}}); }

inline bool is_orientation_reversing(const Mat4Q& R) {
    return transpose(R) * R == identity4() && determinant(R) == -1;
}

/// R^* G(z) for an orientation-reversing orthogonal R.
inline TensorField opposite_reduced(const ZetaGram& z, const Mat4Q& R = default_reflection()) {
    if (!is_orientation_reversing(R))
        throw NotOrientationReversing("R must satisfy R^T R = Id and det R = -1");
    return reduced_kron_G(z).pullback(R);
}

/// Trace-free symmetric 3x3 basis: diag(1,-1,0), diag(0,1,-1), E12+E21, E13+E31, E23+E32.
inline std::array<ZetaGram, 5> tracefree_zeta_basis() {
    std::array<ZetaGram, 5> b;
    b[0] = ZetaGram::diag(1, -1, 0);
    b[1] = ZetaGram::diag(0, 1, -1);
    const std::array<std::array<int, 2>, 3> off = {{{0, 1}, {0, 2}, {1, 2}}};
    for (std::size_t n = 0; n < 3; ++n) {
        Mat3Q m;
        for (auto& row : m) row.fill(Rational(0));
        m[off[n][0]][off[n][1]] = 1;
        m[off[n][1]][off[n][0]] = 1;
        b[2 + n] = ZetaGram(m);
    }
    return b;
}

// ---------------------------------------------------------------------------
// Structured kernel basis and decomposition

struct StructuredKernel {
    /// 26 tensors in the order S4+ (5), S4- (5), U1 (1), U2 (6), U3 (9).
    std::vector<TensorField> tensors;
    std::vector<std::string> labels;
    MatQ coordinates; // 26 x 90

    static constexpr std::size_t plus_offset = 0;
    static constexpr std::size_t minus_offset = 5;
    static constexpr std::size_t u1_offset = 10;
    static constexpr std::size_t u2_offset = 11;
    static constexpr std::size_t u3_offset = 17;
    static constexpr std::size_t size = 26;
};

inline const StructuredKernel& structured_kernel() {
    static const StructuredKernel k = [] {
        StructuredKernel out;
        const auto zb = tracefree_zeta_basis();
        for (std::size_t n = 0; n < 5; ++n) {
            out.tensors.push_back(reduced_kron_G(zb[n]));
            out.labels.push_back("S4plus[" + std::to_string(n) + "]");
        }
        for (std::size_t n = 0; n < 5; ++n) {
            out.tensors.push_back(opposite_reduced(zb[n]));
            out.labels.push_back("S4minus[" + std::to_string(n) + "]");
        }
        const std::array<std::pair<GaugePart, const char*>, 3> parts = {
            {{GaugePart::U1, "U1"}, {GaugePart::U2, "U2"}, {GaugePart::U3, "U3"}}};
        for (const auto& [part, name] : parts) {
            const auto mats = gauge_matrices(part);
            for (std::size_t n = 0; n < mats.size(); ++n) {
                out.tensors.push_back(gauge_term(mats[n]));
                out.labels.push_back(std::string(name) + "[" + std::to_string(n) + "]");
            }
        }
        out.coordinates = MatQ(0, coords::domain_dim);
        for (const auto& t : out.tensors) out.coordinates.append_row(coords::to_coordinates(t));
        return out;
    }();
    return k;
}

struct Decomposition {
    TensorField h_plus = TensorField::zero_sym2();
    TensorField h_minus = TensorField::zero_sym2();
    std::array<Rational, 5> h_plus_coeffs;  // over tracefree_zeta_basis() through reduced_kron_G
    std::array<Rational, 5> h_minus_coeffs; // same, through opposite_reduced with the default R
    Rational c1;                            // L1 = c1 Id
    Mat4Q L2 = zero4();                     // skew
    Mat4Q L3 = zero4();                     // trace-free symmetric

    ZetaGram zeta_plus() const { return combine(h_plus_coeffs); }
    ZetaGram zeta_minus() const { return combine(h_minus_coeffs); }

    TensorField reassemble() const {
        return h_plus + h_minus + gauge_term(c1 * identity4()) + gauge_term(L2) + gauge_term(L3);
    }

private:
    static ZetaGram combine(const std::array<Rational, 5>& c) {
        const auto zb = tracefree_zeta_basis();
        ZetaGram z;
        for (std::size_t n = 0; n < 5; ++n) z = z + c[n] * zb[n];
        return z;
    }
};

/// Throws NotInKernel unless B(h) = 0, Delta h = 0 and L_{r d_r} h = -2h.
inline void require_in_kernel(const TensorField& h) {
    if (!h.is_symmetric2()) throw NotInKernel("input is not a symmetric 2-tensor");
    if (!bianchi(h).is_zero()) throw NotInKernel("Bianchi operator does not vanish");
    if (!laplacian(h).is_zero()) throw NotInKernel("tensor is not harmonic");
    if (!(lie_derivative(scaling_field(), h) == h * Rational(-2)))
        throw NotInKernel("tensor is not homogeneous of weight -2 under r d/dr");
}

inline bool in_kernel(const TensorField& h) {
    try {
        require_in_kernel(h);
        return true;
    } catch (const NotInKernel&) {
        return false;
    }
}

inline Decomposition decompose(const TensorField& h0) {
    require_in_kernel(h0);
    const auto& K = structured_kernel();
    auto c = solve_combination(K.coordinates, coords::to_coordinates(h0));
    if (!c) throw NotInKernel("tensor lies outside the span of the structured basis");
    Decomposition d;
    for (std::size_t n = 0; n < 5; ++n) {
        d.h_plus_coeffs[n] = (*c)[StructuredKernel::plus_offset + n];
        d.h_minus_coeffs[n] = (*c)[StructuredKernel::minus_offset + n];
        if (d.h_plus_coeffs[n] != 0) d.h_plus += K.tensors[StructuredKernel::plus_offset + n] * d.h_plus_coeffs[n];
        if (d.h_minus_coeffs[n] != 0)
            d.h_minus += K.tensors[StructuredKernel::minus_offset + n] * d.h_minus_coeffs[n];
    }
    d.c1 = (*c)[StructuredKernel::u1_offset];
    for (std::size_t m = 0; m < 6; ++m) d.L2 = d.L2 + (*c)[StructuredKernel::u2_offset + m] * skew_matrix(m);
    for (std::size_t n = 0; n < 9; ++n)
        d.L3 = d.L3 + (*c)[StructuredKernel::u3_offset + n] * coords::tracefree_matrix(n);
    return d;
}

struct CharacterizeReport {
    bool trace_zero = false;
    bool div_zero = false;
    bool scaling_contraction_zero = false;
    bool X1_zero = false;
    bool X2_zero = false;
    bool X3_zero = false;

    /// trace_zero <=> div_zero <=> X3_zero, and scaling_contraction_zero <=> X1 = X2 = X3 = 0.
    bool equivalences_hold() const {
        return trace_zero == div_zero && div_zero == X3_zero &&
               scaling_contraction_zero == (X1_zero && X2_zero && X3_zero);
    }
};

inline CharacterizeReport characterize(const TensorField& h0) {
    const Decomposition d = decompose(h0);
    CharacterizeReport r;
    r.trace_zero = trace(h0).is_zero();
    r.div_zero = divergence(h0).is_zero();
    r.scaling_contraction_zero = contract_scaling(h0).is_zero();
    r.X1_zero = d.c1 == 0;
    r.X2_zero = d.L2 == zero4();
    r.X3_zero = d.L3 == zero4();
    return r;
}

struct KernelSplit {
    std::size_t U1 = 0, U2 = 0, U3 = 0, S4plus = 0, S4minus = 0;
    std::size_t total = 0; // dimension of the sum of all five pieces
};

inline SubspaceQ span_of(std::span<const TensorField> ts) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& t : ts) rows.push_back(coords::to_coordinates(t));
    return SubspaceQ::span(coords::domain_dim, rows);
}

inline KernelSplit kernel_split() {
    const auto& K = structured_kernel();
    auto piece = [&](std::size_t off, std::size_t n) {
        return span_of(std::span<const TensorField>(K.tensors).subspan(off, n));
    };
    KernelSplit s;
    s.S4plus = piece(StructuredKernel::plus_offset, 5).dim();
    s.S4minus = piece(StructuredKernel::minus_offset, 5).dim();
    s.U1 = piece(StructuredKernel::u1_offset, 1).dim();
    s.U2 = piece(StructuredKernel::u2_offset, 6).dim();
    s.U3 = piece(StructuredKernel::u3_offset, 9).dim();
    s.total = SubspaceQ::span(coords::domain_dim, K.coordinates).dim();
    return s;
}

// ---------------------------------------------------------------------------
// Numerical invariance under non-rational isometries (binary polyhedral groups).

using Mat4d = std::array<std::array<double, 4>, 4>;

/// max over sample points and generators of |(M^* h)(x) - h(x)| <= tol, with
/// (M^* h)_ij(x) = M_ki M_lj h_kl(M x).
inline bool numerically_invariant(const TensorField& h, std::span<const Mat4d> generators, double tol = 1e-9) {
    if (!h.is_symmetric2()) throw RankMismatch("numerically_invariant expects a symmetric 2-tensor");
    const std::array<std::array<double, 4>, 5> points = {{
        {1.0, 0.3, -0.7, 0.2}, {-0.4, 1.1, 0.5, -0.9}, {0.25, -0.6, 0.8, 1.3}, {2.0, -1.0, 0.5, 0.125},
        {0.7, 0.7, -0.1, -1.6},
    }};
    for (const auto& M : generators)
        for (const auto& x : points) {
            std::array<double, 4> mx{};
            for (int i = 0; i < 4; ++i)
                for (int k = 0; k < 4; ++k) mx[i] += M[i][k] * x[k];
            const auto hx = h.evaluate2<double>(std::span<const double, 4>(x));
            const auto hmx = h.evaluate2<double>(std::span<const double, 4>(mx));
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    double s = 0;
                    for (int k = 0; k < 4; ++k)
                        for (int l = 0; l < 4; ++l) s += M[k][i] * M[l][j] * hmx[k][l];
                    if (std::abs(s - hx[i][j]) > tol) return false;
                }
        }
    return true;
}

// ---------------------------------------------------------------------------
// JSON reports

inline nlohmann::json mat4_json(const Mat4Q& m) {
    nlohmann::json j;
    to_json(j, to_matq(m));
    return j;
}

inline void to_json(nlohmann::json& j, const Decomposition& d) {
    auto coeffs = [](const std::array<Rational, 5>& c) {
        auto a = nlohmann::json::array();
        for (const auto& v : c) a.push_back(to_string(v));
        return a;
    };
    j = nlohmann::json::object();
    j["h_plus_coeffs"] = coeffs(d.h_plus_coeffs);
    j["h_minus_coeffs"] = coeffs(d.h_minus_coeffs);
    j["c1"] = to_string(d.c1);
    j["L2"] = mat4_json(d.L2);
    j["L3"] = mat4_json(d.L3);
}

inline void to_json(nlohmann::json& j, const CharacterizeReport& r) {
    j = {{"trace_zero", r.trace_zero},
         {"div_zero", r.div_zero},
         {"scaling_contraction_zero", r.scaling_contraction_zero},
         {"X1_zero", r.X1_zero},
         {"X2_zero", r.X2_zero},
         {"X3_zero", r.X3_zero}};
}

} // namespace alevol
