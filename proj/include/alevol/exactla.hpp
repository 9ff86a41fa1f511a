#pragma once

// Exact linear algebra over Q: Gauss-Jordan reduction with a fixed pivot rule
// (leftmost column, topmost nonzero row), nullspaces and subspace lattice
// operations. Dense storage; the largest matrix in this project is 80 x 90.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "ratpoly.hpp"

namespace alevol {

class MatQ {
public:
    MatQ() = default;
    MatQ(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Rational(0)) {}

    static MatQ identity(std::size_t n) {
        MatQ m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static MatQ from_rows(const std::vector<std::vector<Rational>>& rows, std::size_t cols) {
        MatQ m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw DimensionMismatch("row length differs from column count");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::vector<Rational> row(std::size_t i) const {
        return {a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
    }

    void append_row(const std::vector<Rational>& r) {
        if (rows_ == 0 && cols_ == 0) cols_ = r.size();
        if (r.size() != cols_) throw DimensionMismatch("appended row has wrong length");
        a_.insert(a_.end(), r.begin(), r.end());
        ++rows_;
    }

    MatQ transpose() const {
        MatQ t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    std::vector<Rational> apply(const std::vector<Rational>& v) const {
        if (v.size() != cols_) throw DimensionMismatch("vector length differs from column count");
        std::vector<Rational> out(rows_, Rational(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0 && v[j] != 0) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    friend bool operator==(const MatQ& a, const MatQ& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> a_;
};

inline MatQ vstack(const MatQ& a, const MatQ& b) {
    if (a.rows() == 0) return b;
    if (b.rows() == 0) return a;
    if (a.cols() != b.cols()) throw DimensionMismatch("vstack column counts differ");
    MatQ m(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, j) = b(i, j);
    return m;
}

struct RrefResult {
    MatQ reduced;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots; // pivot column of each nonzero row
};

inline RrefResult rref(MatQ m) {
    RrefResult out;
    std::size_t prow = 0;
    for (std::size_t c = 0; c < m.cols() && prow < m.rows(); ++c) {
        std::size_t p = prow;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != prow)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(prow, j));
        const Rational inv = 1 / m(prow, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(prow, j) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == prow || m(r, c) == 0) continue;
            const Rational f = m(r, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (m(prow, j) != 0) m(r, j) -= f * m(prow, j);
        }
        out.pivots.push_back(c);
        ++prow;
    }
    out.rank = prow;
    out.reduced = std::move(m);
    return out;
}

inline std::size_t rank(const MatQ& m) { return rref(m).rank; }

/// Row space of a basis matrix held in canonical reduced row echelon form.
class SubspaceQ {
public:
    explicit SubspaceQ(std::size_t ambient = 0) : ambient_(ambient), basis_(0, ambient) {}

    /// Span of the rows of `spanning` (zero rows allowed).
    static SubspaceQ span(std::size_t ambient, const MatQ& spanning) {
        if (spanning.rows() > 0 && spanning.cols() != ambient)
            throw AmbientMismatch("spanning set has the wrong length");
        SubspaceQ s(ambient);
        if (spanning.rows() == 0) return s;
        auto r = rref(spanning);
        s.basis_ = MatQ(r.rank, ambient);
        for (std::size_t i = 0; i < r.rank; ++i)
            for (std::size_t j = 0; j < ambient; ++j) s.basis_(i, j) = r.reduced(i, j);
        return s;
    }

    static SubspaceQ span(std::size_t ambient, const std::vector<std::vector<Rational>>& vectors) {
        MatQ m(0, ambient);
        for (const auto& v : vectors) m.append_row(v);
        return span(ambient, m);
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.rows(); }
    const MatQ& basis() const { return basis_; }

    bool contains(const std::vector<Rational>& v) const {
        if (v.size() != ambient_) throw AmbientMismatch("vector length differs from ambient dimension");
        MatQ m = basis_;
        m.append_row(v);
        return rref(m).rank == dim();
    }

    friend bool operator==(const SubspaceQ& a, const SubspaceQ& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

private:
    std::size_t ambient_;
    MatQ basis_;
};

/// {v : m v = 0}, dimension cols - rank.
inline SubspaceQ nullspace(const MatQ& m) {
    auto r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : r.pivots) is_pivot[c] = true;
    MatQ vecs(0, m.cols());
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(m.cols(), Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < r.rank; ++i) v[r.pivots[i]] = -r.reduced(i, f);
        vecs.append_row(v);
    }
    return SubspaceQ::span(m.cols(), vecs);
}

/// Orthogonal complement: the constraint rows whose common kernel is `s`.
inline SubspaceQ annihilator(const SubspaceQ& s) {
    if (s.dim() == 0) return SubspaceQ::span(s.ambient_dim(), MatQ::identity(s.ambient_dim()));
    return nullspace(s.basis());
}

inline void require_same_ambient(const SubspaceQ& a, const SubspaceQ& b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw AmbientMismatch(std::to_string(a.ambient_dim()) + " vs " + std::to_string(b.ambient_dim()));
}

inline SubspaceQ subspace_sum(const SubspaceQ& a, const SubspaceQ& b) {
    require_same_ambient(a, b);
    return SubspaceQ::span(a.ambient_dim(), vstack(a.basis(), b.basis()));
}

inline SubspaceQ subspace_intersect(const SubspaceQ& a, const SubspaceQ& b) {
    require_same_ambient(a, b);
    MatQ constraints = vstack(annihilator(a).basis(), annihilator(b).basis());
    if (constraints.rows() == 0) return SubspaceQ::span(a.ambient_dim(), MatQ::identity(a.ambient_dim()));
    return nullspace(constraints);
}

/// b is a subspace of a.
inline bool subspace_contains(const SubspaceQ& a, const SubspaceQ& b) {
    require_same_ambient(a, b);
    return subspace_sum(a, b).dim() == a.dim();
}

inline bool subspace_equals(const SubspaceQ& a, const SubspaceQ& b) {
    require_same_ambient(a, b);
    return a == b;
}

enum class SubspaceOp { sum, intersect, contains, equals };

inline std::variant<SubspaceQ, bool> subspace_ops(const SubspaceQ& a, const SubspaceQ& b, SubspaceOp kind) {
    switch (kind) {
    case SubspaceOp::sum: return subspace_sum(a, b);
    case SubspaceOp::intersect: return subspace_intersect(a, b);
    case SubspaceOp::contains: return subspace_contains(a, b);
    case SubspaceOp::equals: return subspace_equals(a, b);
    }
    return false;
}

/// Coefficients c with sum_i c_i rows_i = target, or nullopt if target is
/// outside the row span. Requires linearly independent rows (unique answer).
inline std::optional<std::vector<Rational>> solve_combination(const MatQ& rows, const std::vector<Rational>& target) {
    if (target.size() != rows.cols()) throw DimensionMismatch("target length differs from row length");
    const std::size_t n = rows.rows();
    MatQ aug(rows.cols(), n + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < rows.cols(); ++j) aug(j, i) = rows(i, j);
    for (std::size_t j = 0; j < rows.cols(); ++j) aug(j, n) = target[j];
    auto r = rref(aug);
    if (!r.pivots.empty() && r.pivots.back() == n) return std::nullopt;
    if (r.rank != n) throw DimensionMismatch("rows are linearly dependent");
    std::vector<Rational> c(n, Rational(0));
    for (std::size_t i = 0; i < r.rank; ++i) c[r.pivots[i]] = r.reduced(i, n);
    return c;
}

// MatQ JSON: row-major arrays of "num/den" strings.

inline void to_json(nlohmann::json& j, const MatQ& m) {
    j = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_string(m(i, k)));
        j.push_back(std::move(row));
    }
}

inline void from_json(const nlohmann::json& j, MatQ& m) {
    if (!j.is_array()) throw ParseError("matrix JSON must be an array of rows");
    m = MatQ();
    for (const auto& row : j) {
        if (!row.is_array()) throw ParseError("matrix rows must be arrays");
        std::vector<Rational> r;
        for (const auto& e : row) {
            if (!e.is_string()) throw ParseError("matrix entries must be \"num/den\" strings");
            r.push_back(parse_rational(e.get<std::string>()));
        }
        if (m.rows() > 0 && r.size() != m.cols()) throw ParseError("ragged matrix rows");
        m.append_row(r);
    }
}

inline MatQ to_matq(const Mat4Q& a) {
    MatQ m(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m(i, j) = a[i][j];
    return m;
}

} // namespace alevol
