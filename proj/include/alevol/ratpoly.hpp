#pragma once

// Exact arithmetic core: GMP-backed rationals, sparse polynomials in the four
// coordinates x1..x4 of R^4, and radially weighted fields p(x) / r^(2k).
//
// Directions and variables are 0-based throughout the API (x1 is index 0).

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "errors.hpp"

namespace alevol {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational q{Integer(num), Integer(den)};
    q.canonicalize();
    return q;
}

/// "num/den" with the denominator always present, e.g. "-3/2", "0/1".
inline std::string to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Accepts "n", "n/d" with optional sign; throws ParseError otherwise.
inline Rational parse_rational(const std::string& text) {
    auto valid_int = [](const std::string& s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size()) return false;
        return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                           [](char c) { return c >= '0' && c <= '9'; });
    };
    auto strip_plus = [](std::string s) {
        if (!s.empty() && s[0] == '+') s.erase(0, 1);
        return s;
    };
    const auto slash = text.find('/');
    const std::string num = text.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den.find_first_of("+-") != std::string::npos)
        throw ParseError("not a rational: '" + text + "'");
    Integer d(strip_plus(den), 10);
    if (d == 0) throw ParseError("zero denominator: '" + text + "'");
    Rational q(Integer(strip_plus(num), 10), d);
    q.canonicalize();
    return q;
}

/// Conversion for the floating-point layers; exact for the small integers that occur here.
template <class T>
T to_floating(const Rational& q) {
    return static_cast<T>(q.get_num().get_d()) / static_cast<T>(q.get_den().get_d());
}

using Mat4Q = std::array<std::array<Rational, 4>, 4>;

inline Mat4Q identity4() {
    Mat4Q m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = (i == j) ? 1 : 0;
    return m;
}

inline Mat4Q zero4() {
    Mat4Q m;
    for (auto& row : m) row.fill(Rational(0));
    return m;
}

inline Mat4Q operator*(const Mat4Q& a, const Mat4Q& b) {
    Mat4Q c = zero4();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline Mat4Q operator+(const Mat4Q& a, const Mat4Q& b) {
    Mat4Q c;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) c[i][j] = a[i][j] + b[i][j];
    return c;
}

inline Mat4Q operator*(const Rational& s, const Mat4Q& a) {
    Mat4Q c;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) c[i][j] = s * a[i][j];
    return c;
}

inline Mat4Q transpose(const Mat4Q& a) {
    Mat4Q t;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t[i][j] = a[j][i];
    return t;
}

inline Rational trace(const Mat4Q& a) { return a[0][0] + a[1][1] + a[2][2] + a[3][3]; }

inline Rational determinant(Mat4Q a) {
    Rational det = 1;
    for (int c = 0; c < 4; ++c) {
        int p = c;
        while (p < 4 && a[p][c] == 0) ++p;
        if (p == 4) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (int r = c + 1; r < 4; ++r) {
            if (a[r][c] == 0) continue;
            Rational f = a[r][c] / a[c][c];
            for (int k = c; k < 4; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

using Exponent = std::array<int, 4>;

/// Sparse polynomial in x1..x4 with rational coefficients. Zero coefficients are
/// never stored and terms are kept in lexicographic exponent order, so the
/// representation is canonical and operator== is structural.
class Poly4 {
public:
    using Terms = std::map<Exponent, Rational>;

    Poly4() = default;
    Poly4(const Rational& c) { // NOLINT: implicit constant embedding is intended
        if (c != 0) terms_.emplace(Exponent{0, 0, 0, 0}, c);
    }
    Poly4(int c) : Poly4(Rational(c)) {} // NOLINT

    static Poly4 monomial(const Exponent& e, const Rational& c = 1) {
        Poly4 p;
        if (std::any_of(e.begin(), e.end(), [](int v) { return v < 0; }))
            throw std::invalid_argument("negative exponent");
        if (c != 0) p.terms_.emplace(e, c);
        return p;
    }

    static Poly4 variable(int i) {
        Exponent e{0, 0, 0, 0};
        e.at(static_cast<std::size_t>(i)) = 1;
        return monomial(e);
    }

    /// r^2 = x1^2 + x2^2 + x3^2 + x4^2
    static const Poly4& r2() {
        static const Poly4 value = [] {
            Poly4 p;
            for (int i = 0; i < 4; ++i) {
                Exponent e{0, 0, 0, 0};
                e[static_cast<std::size_t>(i)] = 2;
                p.terms_.emplace(e, Rational(1));
            }
            return p;
        }();
        return value;
    }

    static Poly4 r2_power(int m) {
        Poly4 p(1);
        for (int i = 0; i < m; ++i) p = p * r2();
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Rational coefficient(const Exponent& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// -1 for the zero polynomial.
    int total_degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
        return d;
    }

    /// Degree if every monomial has the same total degree; nullopt for mixed
    /// degrees and for the zero polynomial.
    std::optional<int> homogeneous_degree() const {
        std::optional<int> d;
        for (const auto& [e, c] : terms_) {
            int de = e[0] + e[1] + e[2] + e[3];
            if (d && *d != de) return std::nullopt;
            d = de;
        }
        return d;
    }

    Poly4& operator+=(const Poly4& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Poly4& operator-=(const Poly4& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    Poly4& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }

    friend Poly4 operator+(Poly4 a, const Poly4& b) { return a += b; }
    friend Poly4 operator-(Poly4 a, const Poly4& b) { return a -= b; }
    friend Poly4 operator-(Poly4 a) {
        for (auto& [e, c] : a.terms_) c = -c;
        return a;
    }
    friend Poly4 operator*(Poly4 a, const Rational& s) { return a *= s; }
    friend Poly4 operator*(const Rational& s, Poly4 a) { return a *= s; }

    friend Poly4 operator*(const Poly4& a, const Poly4& b) {
        Poly4 out;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponent e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]};
                out.add_term(e, ca * cb);
            }
        return out;
    }

    friend bool operator==(const Poly4& a, const Poly4& b) { return a.terms_ == b.terms_; }

    Poly4 partial(int i) const {
        const auto k = static_cast<std::size_t>(i);
        if (i < 0 || i > 3) throw std::out_of_range("direction must be 0..3");
        Poly4 out;
        for (const auto& [e, c] : terms_) {
            if (e[k] == 0) continue;
            Exponent d = e;
            d[k] -= 1;
            out.add_term(d, c * e[k]);
        }
        return out;
    }

    /// Exact quotient by r^2, or nullopt when r^2 does not divide. Single-divisor
    /// division with lex leading term x1^2; {r^2} is a Groebner basis of its ideal,
    /// so a zero remainder is equivalent to divisibility.
    std::optional<Poly4> divide_by_r2() const {
        Poly4 rest = *this;
        Poly4 quotient;
        while (!rest.is_zero()) {
            auto lead = std::prev(rest.terms_.end());
            if (lead->first[0] < 2) return std::nullopt;
            Exponent qe = lead->first;
            qe[0] -= 2;
            const Rational c = lead->second;
            quotient.add_term(qe, c);
            for (const auto& [e, rc] : r2().terms_) {
                Exponent te{qe[0] + e[0], qe[1] + e[1], qe[2] + e[2], qe[3] + e[3]};
                rest.add_term(te, -c * rc);
            }
        }
        return quotient;
    }

    /// p(Mx).
    Poly4 substitute(const Mat4Q& m) const {
        std::array<Poly4, 4> image;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (m[i][j] != 0) image[i] += variable(j) * m[i][j];
        Poly4 out;
        for (const auto& [e, c] : terms_) {
            Poly4 t(c);
            for (int i = 0; i < 4; ++i)
                for (int p = 0; p < e[static_cast<std::size_t>(i)]; ++p) t = t * image[i];
            out += t;
        }
        return out;
    }

    Rational evaluate(const std::array<Rational, 4>& x) const {
        Rational sum = 0;
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < 4; ++i)
                for (int p = 0; p < e[i]; ++p) t *= x[i];
            sum += t;
        }
        return sum;
    }

    template <class T>
    T evaluate(std::span<const T, 4> x) const {
        T sum = 0;
        for (const auto& [e, c] : terms_) {
            T t = to_floating<T>(c);
            for (std::size_t i = 0; i < 4; ++i)
                for (int p = 0; p < e[i]; ++p) t *= x[i];
            sum += t;
        }
        return sum;
    }

    std::size_t hash() const {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        for (const auto& [e, c] : terms_) {
            for (int v : e) mix(static_cast<std::size_t>(v));
            mix(std::hash<std::string>{}(to_string(c)));
        }
        return h;
    }

private:
    void add_term(const Exponent& e, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Terms terms_;
};

enum class PolyOp { add, mul };

inline Poly4 poly_arith(const Poly4& a, const Poly4& b, PolyOp kind) {
    return kind == PolyOp::add ? a + b : a * b;
}

/// numerator(x) * r^(-2 rpow) with numerator never divisible by r^2.
class RadialFn {
public:
    RadialFn() = default;
    RadialFn(const Rational& c) : num_(c) {} // NOLINT
    RadialFn(int c) : num_(c) {}             // NOLINT
    RadialFn(Poly4 num, int rpow) : num_(std::move(num)), rpow_(rpow) {
        if (rpow_ < 0) throw std::invalid_argument("rpow must be nonnegative");
        canonicalize();
    }

    const Poly4& numerator() const { return num_; }
    int rpow() const { return rpow_; }
    bool is_zero() const { return num_.is_zero(); }

    /// Numerator when the field is written over r^(2k); requires k >= rpow().
    Poly4 numerator_over(int k) const {
        if (k < rpow_) throw std::invalid_argument("target radial power below canonical power");
        return num_ * Poly4::r2_power(k - rpow_);
    }

    /// deg(numerator) - 2 rpow; throws NonHomogeneous on mixed degrees or zero.
    int homogeneity_degree() const {
        auto d = num_.homogeneous_degree();
        if (!d) throw NonHomogeneous(num_.is_zero() ? "zero field has no degree"
                                                    : "numerator mixes monomial degrees");
        return *d - 2 * rpow_;
    }

    /// d/dx_i, using d(r^(-2k)) = -2k x_i r^(-2k-2).
    RadialFn partial(int i) const {
        if (rpow_ == 0) return RadialFn(num_.partial(i), 0);
        Poly4 n = num_.partial(i) * Poly4::r2() - Poly4::variable(i) * num_ * Rational(2 * rpow_);
        return RadialFn(std::move(n), rpow_ + 1);
    }

    RadialFn laplacian() const {
        RadialFn sum;
        for (int i = 0; i < 4; ++i) sum += partial(i).partial(i);
        return sum;
    }

    Rational evaluate(const std::array<Rational, 4>& x) const {
        Rational r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
        if (r2 == 0 && rpow_ > 0) throw std::domain_error("evaluation at the origin");
        Rational v = num_.evaluate(x);
        for (int k = 0; k < rpow_; ++k) v /= r2;
        return v;
    }

    template <class T>
    T evaluate(std::span<const T, 4> x) const {
        T r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
        T v = num_.evaluate(x);
        for (int k = 0; k < rpow_; ++k) v /= r2;
        return v;
    }

    RadialFn& operator+=(const RadialFn& o) {
        const int k = std::max(rpow_, o.rpow_);
        *this = RadialFn(numerator_over(k) + o.numerator_over(k), k);
        return *this;
    }
    RadialFn& operator-=(const RadialFn& o) { return *this += -o; }
    RadialFn& operator*=(const Rational& s) {
        if (s == 0) *this = RadialFn();
        else num_ *= s;
        return *this;
    }

    friend RadialFn operator+(RadialFn a, const RadialFn& b) { return a += b; }
    friend RadialFn operator-(RadialFn a, const RadialFn& b) { return a -= b; }
    friend RadialFn operator-(RadialFn a) {
        a.num_ = -a.num_;
        return a;
    }
    friend RadialFn operator*(RadialFn a, const Rational& s) { return a *= s; }
    friend RadialFn operator*(const Rational& s, RadialFn a) { return a *= s; }
    friend RadialFn operator*(const RadialFn& a, const RadialFn& b) {
        return RadialFn(a.num_ * b.num_, a.rpow_ + b.rpow_);
    }
    friend RadialFn operator*(const RadialFn& a, const Poly4& p) { return RadialFn(a.num_ * p, a.rpow_); }

    friend bool operator==(const RadialFn& a, const RadialFn& b) {
        return a.rpow_ == b.rpow_ && a.num_ == b.num_;
    }

    /// f(Mx) for orthogonal M (r is preserved).
    RadialFn substitute_orthogonal(const Mat4Q& m) const { return RadialFn(num_.substitute(m), rpow_); }

private:
    void canonicalize() {
        if (num_.is_zero()) {
            rpow_ = 0;
            return;
        }
        while (rpow_ > 0) {
            auto q = num_.divide_by_r2();
            if (!q) break;
            num_ = std::move(*q);
            --rpow_;
        }
    }

    Poly4 num_;
    int rpow_ = 0;
};

inline RadialFn radial_canonicalize(Poly4 num, int k) { return RadialFn(std::move(num), k); }
inline RadialFn radial_partial(const RadialFn& f, int i) { return f.partial(i); }
inline int homogeneity_degree(const RadialFn& f) { return f.homogeneity_degree(); }

// JSON: {"terms":[{"exp":[e1,e2,e3,e4],"num":"<int>","den":"<int>"}],"rpow":k}

inline nlohmann::json terms_to_json(const Poly4& p) {
    auto arr = nlohmann::json::array();
    for (const auto& [e, c] : p.terms())
        arr.push_back({{"exp", e}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
    return arr;
}

inline Poly4 terms_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
        throw ParseError("polynomial JSON needs a 'terms' array");
    Poly4 p;
    for (const auto& t : j["terms"]) {
        if (!t.contains("exp") || !t.contains("num") || !t.contains("den"))
            throw ParseError("term needs exp, num and den");
        const auto& ej = t["exp"];
        if (!ej.is_array() || ej.size() != 4) throw ParseError("exp must have four entries");
        Exponent e{};
        for (std::size_t i = 0; i < 4; ++i) {
            if (!ej[i].is_number_integer() || ej[i].get<int>() < 0)
                throw ParseError("exponents must be nonnegative integers");
            e[i] = ej[i].get<int>();
        }
        if (!t["num"].is_string() || !t["den"].is_string())
            throw ParseError("num and den must be integer strings");
        Rational c = parse_rational(t["num"].get<std::string>() + "/" + t["den"].get<std::string>());
        p += Poly4::monomial(e, c);
    }
    return p;
}

inline void to_json(nlohmann::json& j, const Poly4& p) { j = {{"terms", terms_to_json(p)}}; }
inline void from_json(const nlohmann::json& j, Poly4& p) { p = terms_from_json(j); }

inline void to_json(nlohmann::json& j, const RadialFn& f) {
    j = {{"terms", terms_to_json(f.numerator())}, {"rpow", f.rpow()}};
}

inline void from_json(const nlohmann::json& j, RadialFn& f) {
    Poly4 p = terms_from_json(j);
    int k = 0;
    if (j.contains("rpow")) {
        if (!j["rpow"].is_number_integer() || j["rpow"].get<int>() < 0)
            throw ParseError("rpow must be a nonnegative integer");
        k = j["rpow"].get<int>();
    }
    f = RadialFn(std::move(p), k);
}

} // namespace alevol

template <>
struct std::hash<alevol::Poly4> {
    std::size_t operator()(const alevol::Poly4& p) const noexcept { return p.hash(); }
};
