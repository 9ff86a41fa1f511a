#pragma once

// Flat-metric tensor calculus on R^4 \ {0} with exact RadialFn components.
// Indices are raised and lowered by the Euclidean metric, so vectors and
// 1-forms share storage and differ only by a flag.

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "ratpoly.hpp"

namespace alevol {

enum class Symmetry { none, symmetric };
enum class Variance { covariant, contravariant };

/// Position of (i, j), i <= j, in the 10-entry storage of a symmetric 2-tensor:
/// (0,0) (0,1) (0,2) (0,3) (1,1) (1,2) (1,3) (2,2) (2,3) (3,3).
constexpr std::size_t sym_index(int i, int j) {
    if (i > j) std::swap(i, j);
    constexpr int row_start[4] = {0, 4, 7, 9};
    return static_cast<std::size_t>(row_start[i] + (j - i));
}

class TensorField {
public:
    TensorField() : TensorField(0, Symmetry::none) {}

    static TensorField scalar(RadialFn f) {
        TensorField t(0, Symmetry::none);
        t.c_[0] = std::move(f);
        return t;
    }

    static TensorField one_form(std::array<RadialFn, 4> c,
                                Variance v = Variance::covariant) {
        TensorField t(1, Symmetry::none);
        t.variance_ = v;
        for (std::size_t i = 0; i < 4; ++i) t.c_[i] = std::move(c[i]);
        return t;
    }

    static TensorField zero_one_form() { return TensorField(1, Symmetry::none); }
    static TensorField zero_sym2() { return TensorField(2, Symmetry::symmetric); }

    static TensorField sym2(const std::function<RadialFn(int, int)>& entry) {
        TensorField t = zero_sym2();
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) t.c_[sym_index(i, j)] = entry(i, j);
        return t;
    }

    /// Non-symmetric rank-2 tensor.
    static TensorField general2(const std::function<RadialFn(int, int)>& entry) {
        TensorField t(2, Symmetry::none);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) t.c_[static_cast<std::size_t>(4 * i + j)] = entry(i, j);
        return t;
    }

    int rank() const { return rank_; }
    Symmetry symmetry() const { return sym_; }
    bool is_symmetric2() const { return rank_ == 2 && sym_ == Symmetry::symmetric; }
    Variance variance() const { return variance_; }
    const std::vector<RadialFn>& components() const { return c_; }

    const RadialFn& operator()() const { return c_.at(0); }
    const RadialFn& operator()(int i) const { return c_.at(static_cast<std::size_t>(i)); }
    const RadialFn& operator()(int i, int j) const { return c_.at(index2(i, j)); }

    void set(int i, RadialFn f) { c_.at(static_cast<std::size_t>(i)) = std::move(f); }
    void set(int i, int j, RadialFn f) { c_.at(index2(i, j)) = std::move(f); }

    bool is_zero() const {
        for (const auto& f : c_)
            if (!f.is_zero()) return false;
        return true;
    }

    TensorField& operator+=(const TensorField& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    TensorField& operator-=(const TensorField& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    TensorField& operator*=(const Rational& s) {
        for (auto& f : c_) f *= s;
        return *this;
    }

    friend TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
    friend TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
    friend TensorField operator*(TensorField a, const Rational& s) { return a *= s; }
    friend TensorField operator*(const Rational& s, TensorField a) { return a *= s; }
    friend TensorField operator-(TensorField a) { return a *= Rational(-1); }

    friend bool operator==(const TensorField& a, const TensorField& b) {
        return a.rank_ == b.rank_ && a.sym_ == b.sym_ && a.c_ == b.c_;
    }

    /// Pullback by x -> Mx for orthogonal M: (M*T)_ij(x) = M_ki M_lj T_kl(Mx).
    TensorField pullback(const Mat4Q& m) const {
        if (rank_ == 0) return scalar(c_[0].substitute_orthogonal(m));
        std::vector<RadialFn> moved(c_.size());
        for (std::size_t k = 0; k < c_.size(); ++k) moved[k] = c_[k].substitute_orthogonal(m);
        if (rank_ == 1) {
            TensorField out(1, Symmetry::none);
            out.variance_ = variance_;
            for (int i = 0; i < 4; ++i) {
                RadialFn s;
                for (int k = 0; k < 4; ++k)
                    if (m[k][i] != 0) s += moved[static_cast<std::size_t>(k)] * m[k][i];
                out.c_[static_cast<std::size_t>(i)] = s;
            }
            return out;
        }
        TensorField out(2, sym_);
        for (int i = 0; i < 4; ++i)
            for (int j = (sym_ == Symmetry::symmetric ? i : 0); j < 4; ++j) {
                RadialFn s;
                for (int k = 0; k < 4; ++k) {
                    if (m[k][i] == 0) continue;
                    for (int l = 0; l < 4; ++l) {
                        if (m[l][j] == 0) continue;
                        s += moved[index2(k, l)] * (m[k][i] * m[l][j]);
                    }
                }
                out.c_[out.index2(i, j)] = s;
            }
        return out;
    }

    template <class T>
    std::array<std::array<T, 4>, 4> evaluate2(std::span<const T, 4> x) const {
        if (rank_ != 2) throw RankMismatch("evaluate2 needs a rank-2 tensor");
        std::array<std::array<T, 4>, 4> out{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) out[i][j] = (*this)(i, j).evaluate(x);
        return out;
    }

private:
    TensorField(int rank, Symmetry sym) : rank_(rank), sym_(sym) {
        std::size_t n = 1;
        if (rank == 1) n = 4;
        if (rank == 2) n = sym == Symmetry::symmetric ? 10 : 16;
        c_.assign(n, RadialFn());
    }

    std::size_t index2(int i, int j) const {
        if (rank_ != 2) throw RankMismatch("two indices on a rank-" + std::to_string(rank_) + " tensor");
        if (i < 0 || i > 3 || j < 0 || j > 3) throw std::out_of_range("index must be 0..3");
        return sym_ == Symmetry::symmetric ? sym_index(i, j) : static_cast<std::size_t>(4 * i + j);
    }

    void require_same_shape(const TensorField& o) const {
        if (rank_ != o.rank_ || sym_ != o.sym_) throw RankMismatch("tensor shapes differ");
    }

    int rank_;
    Symmetry sym_;
    Variance variance_ = Variance::covariant;
    std::vector<RadialFn> c_;
};

/// X(x) = r^(-2k) L x.
struct LinearVectorField {
    Mat4Q L = zero4();
    int rpow = 0;

    RadialFn component(int i) const {
        Poly4 p;
        for (int j = 0; j < 4; ++j)
            if (L[i][j] != 0) p += Poly4::variable(j) * L[i][j];
        return RadialFn(std::move(p), rpow);
    }

    TensorField as_vector() const {
        return TensorField::one_form({component(0), component(1), component(2), component(3)},
                                     Variance::contravariant);
    }
};

/// r d/dr as a LinearVectorField (L = Id, k = 0).
inline LinearVectorField scaling_field() { return {identity4(), 0}; }

inline TensorField flat_metric() {
    return TensorField::sym2([](int i, int j) { return RadialFn(i == j ? 1 : 0); });
}

/// Index lowering by the flat metric: same components, covariant flag.
inline TensorField flat(const TensorField& v) {
    if (v.rank() != 1) throw RankMismatch("flat expects a vector field");
    return TensorField::one_form({v(0), v(1), v(2), v(3)}, Variance::covariant);
}

/// Symmetric product a.b = (a (x) b + b (x) a) / 2 of two 1-forms, so a.a = a^2.
inline TensorField sym_product(const TensorField& a, const TensorField& b) {
    if (a.rank() != 1 || b.rank() != 1) throw RankMismatch("sym_product expects 1-forms");
    const Rational half(1, 2);
    return TensorField::sym2([&](int i, int j) { return (a(i) * b(j) + a(j) * b(i)) * half; });
}

inline RadialFn trace(const TensorField& h) {
    if (h.rank() != 2) throw RankMismatch("trace expects a rank-2 tensor");
    RadialFn s;
    for (int i = 0; i < 4; ++i) s += h(i, i);
    return s;
}

/// (div h)_j = sum_i d_i h_ij.
inline TensorField divergence(const TensorField& h) {
    if (h.rank() != 2) throw RankMismatch("divergence expects a rank-2 tensor");
    std::array<RadialFn, 4> c;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) c[static_cast<std::size_t>(j)] += h(i, j).partial(i);
    return TensorField::one_form(std::move(c));
}

/// sum_i d_i X_i for a 1-form or vector field.
inline RadialFn divergence1(const TensorField& x) {
    if (x.rank() != 1) throw RankMismatch("divergence1 expects a rank-1 tensor");
    RadialFn s;
    for (int i = 0; i < 4; ++i) s += x(i).partial(i);
    return s;
}

inline TensorField gradient(const RadialFn& f) {
    return TensorField::one_form({f.partial(0), f.partial(1), f.partial(2), f.partial(3)});
}

/// B(h) = div h - (1/2) d tr h.
inline TensorField bianchi(const TensorField& h) {
    if (!h.is_symmetric2()) throw RankMismatch("bianchi expects a symmetric 2-tensor");
    return divergence(h) - gradient(trace(h)) * Rational(1, 2);
}

/// Componentwise flat Laplacian sum_i d_i d_i.
inline TensorField laplacian(const TensorField& t) {
    TensorField out = t;
    if (t.rank() == 0) return TensorField::scalar(t().laplacian());
    if (t.rank() == 1) {
        for (int i = 0; i < 4; ++i) out.set(i, t(i).laplacian());
        return out;
    }
    for (int i = 0; i < 4; ++i)
        for (int j = (t.is_symmetric2() ? i : 0); j < 4; ++j) out.set(i, j, t(i, j).laplacian());
    return out;
}

inline TensorField hessian(const RadialFn& f) {
    std::array<RadialFn, 4> d{f.partial(0), f.partial(1), f.partial(2), f.partial(3)};
    return TensorField::sym2([&](int i, int j) { return d[static_cast<std::size_t>(i)].partial(j); });
}

/// (L_X g0)_ij = d_i X_j + d_j X_i.
inline TensorField lie_metric(const LinearVectorField& x) {
    std::array<RadialFn, 4> xc{x.component(0), x.component(1), x.component(2), x.component(3)};
    return TensorField::sym2([&](int i, int j) {
        return xc[static_cast<std::size_t>(j)].partial(i) + xc[static_cast<std::size_t>(i)].partial(j);
    });
}

/// (L_X T)_ij = X^k d_k T_ij + T_kj d_i X^k + T_ik d_j X^k for symmetric T.
inline TensorField lie_derivative(const LinearVectorField& x, const TensorField& t) {
    if (!t.is_symmetric2()) throw RankMismatch("lie_derivative expects a symmetric 2-tensor");
    std::array<RadialFn, 4> xc{x.component(0), x.component(1), x.component(2), x.component(3)};
    // dx[k][i] = d_i X^k
    std::array<std::array<RadialFn, 4>, 4> dx;
    for (std::size_t k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i) dx[k][static_cast<std::size_t>(i)] = xc[k].partial(i);
    return TensorField::sym2([&](int i, int j) {
        RadialFn s;
        for (int k = 0; k < 4; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            if (!xc[ku].is_zero()) s += xc[ku] * t(i, j).partial(k);
            s += t(k, j) * dx[ku][static_cast<std::size_t>(i)];
            s += t(i, k) * dx[ku][static_cast<std::size_t>(j)];
        }
        return s;
    });
}

/// (r d/dr) contracted into h: the 1-form sum_i x_i h_ij.
inline TensorField contract_scaling(const TensorField& h) {
    if (!h.is_symmetric2()) throw RankMismatch("contract_scaling expects a symmetric 2-tensor");
    std::array<RadialFn, 4> c;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) c[static_cast<std::size_t>(j)] += h(i, j) * Poly4::variable(i);
    return TensorField::one_form(std::move(c));
}

/// B(L_X g0) - Delta(X_flat); identically zero on flat space.
inline TensorField bochner_flat(const LinearVectorField& x) {
    return bianchi(lie_metric(x)) - laplacian(flat(x.as_vector()));
}

// TensorField JSON: {"rank":2,"sym":true,"components":[{"idx":[i,j],"fn":<RadialFn>}]}
// Indices are 1-based in the file format; only i <= j is listed for symmetric tensors.

inline void to_json(nlohmann::json& j, const TensorField& t) {
    j = nlohmann::json::object();
    j["rank"] = t.rank();
    j["sym"] = t.is_symmetric2();
    auto comps = nlohmann::json::array();
    if (t.rank() == 0) {
        comps.push_back({{"idx", nlohmann::json::array()}, {"fn", t()}});
    } else if (t.rank() == 1) {
        for (int i = 0; i < 4; ++i) comps.push_back({{"idx", {i + 1}}, {"fn", t(i)}});
    } else {
        for (int i = 0; i < 4; ++i)
            for (int k = (t.is_symmetric2() ? i : 0); k < 4; ++k)
                comps.push_back({{"idx", {i + 1, k + 1}}, {"fn", t(i, k)}});
    }
    j["components"] = std::move(comps);
}

inline void from_json(const nlohmann::json& j, TensorField& t) {
    if (!j.is_object() || !j.contains("rank") || !j["rank"].is_number_integer())
        throw ParseError("tensor JSON needs an integer 'rank'");
    const int rank = j["rank"].get<int>();
    const bool sym = j.value("sym", rank == 2);
    if (!j.contains("components") || !j["components"].is_array())
        throw ParseError("tensor JSON needs a 'components' array");
    if (rank == 0) t = TensorField::scalar(RadialFn());
    else if (rank == 1) t = TensorField::zero_one_form();
    else if (rank == 2) t = sym ? TensorField::zero_sym2() : TensorField::general2([](int, int) { return RadialFn(); });
    else throw ParseError("rank must be 0, 1 or 2");
    for (const auto& c : j["components"]) {
        if (!c.contains("idx") || !c["idx"].is_array() || !c.contains("fn"))
            throw ParseError("component needs 'idx' and 'fn'");
        const auto& idx = c["idx"];
        if (idx.size() != static_cast<std::size_t>(rank)) throw ParseError("index arity does not match rank");
        std::array<int, 2> ix{};
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (!idx[k].is_number_integer()) throw ParseError("indices must be integers");
            ix[k] = idx[k].get<int>() - 1;
            if (ix[k] < 0 || ix[k] > 3) throw ParseError("indices must be in 1..4");
        }
        RadialFn f = c["fn"].get<RadialFn>();
        if (rank == 0) t = TensorField::scalar(f);
        else if (rank == 1) t.set(ix[0], f);
        else {
            if (sym && ix[0] > ix[1]) throw ParseError("symmetric tensors list only i <= j");
            t.set(ix[0], ix[1], f);
        }
    }
}

} // namespace alevol
