#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pypl/rational.hpp"

namespace pypl {

/// Dense matrix over exact rationals. All arithmetic in this module is exact;
/// no floating point enters any structural computation.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static RatMatrix from_rows(const std::vector<RatVec>& rows) {
        if (rows.empty()) return RatMatrix(0, 0);
        RatMatrix m(rows.size(), rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged row list");
            for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static RatMatrix from_cols(const std::vector<RatVec>& cols) {
        if (cols.empty()) return RatMatrix(0, 0);
        RatMatrix m(cols[0].size(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != m.rows_) throw std::invalid_argument("ragged column list");
            for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RatVec row(std::size_t i) const {
        RatVec v(cols_);
        for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
        return v;
    }
    RatVec col(std::size_t j) const {
        RatVec v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    RatMatrix transpose() const {
        RatMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    RatMatrix operator*(const RatMatrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
        RatMatrix p(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rational& a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
            }
        return p;
    }

    RatVec operator*(const RatVec& v) const {
        if (cols_ != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
        RatVec out(rows_, Rational(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    bool operator==(const RatMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    static RatMatrix hstack(const RatMatrix& a, const RatMatrix& b) {
        if (a.rows_ != b.rows_) throw std::invalid_argument("hstack row mismatch");
        RatMatrix m(a.rows_, a.cols_ + b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
            for (std::size_t j = 0; j < b.cols_; ++j) m(i, a.cols_ + j) = b(i, j);
        }
        return m;
    }

    static RatMatrix vstack(const RatMatrix& a, const RatMatrix& b) {
        if (a.cols_ != b.cols_) throw std::invalid_argument("vstack column mismatch");
        RatMatrix m(a.rows_ + b.rows_, a.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) m(i, j) = a(i, j);
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) m(a.rows_ + i, j) = b(i, j);
        return m;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

/// Rank by fraction-free (Bareiss) elimination on a denominator-cleared
/// integer copy. Row scaling does not change rank.
inline std::size_t rank(const RatMatrix& m) {
    const std::size_t nr = m.rows(), nc = m.cols();
    if (nr == 0 || nc == 0) return 0;
    std::vector<std::vector<Int>> a(nr, std::vector<Int>(nc));
    for (std::size_t i = 0; i < nr; ++i) {
        Int lcm = 1;
        for (std::size_t j = 0; j < nc; ++j)
            lcm = boost::multiprecision::lcm(lcm, denominator(m(i, j)));
        for (std::size_t j = 0; j < nc; ++j) {
            const Rational& q = m(i, j);
            a[i][j] = numerator(q) * (lcm / denominator(q));
        }
    }
    Int prev = 1;
    std::size_t rk = 0;
    for (std::size_t col = 0; col < nc && rk < nr; ++col) {
        std::size_t piv = rk;
        while (piv < nr && a[piv][col] == 0) ++piv;
        if (piv == nr) continue;
        std::swap(a[rk], a[piv]);
        for (std::size_t i = rk + 1; i < nr; ++i) {
            for (std::size_t j = col + 1; j < nc; ++j)
                a[i][j] = (a[rk][col] * a[i][j] - a[i][col] * a[rk][j]) / prev;
            a[i][col] = 0;
        }
        prev = a[rk][col];
        ++rk;
    }
    return rk;
}

/// Reduced row-echelon form (exact Gauss-Jordan); returns pivot columns.
inline std::vector<std::size_t> rref_inplace(RatMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t lead = 0;
    for (std::size_t col = 0; col < m.cols() && lead < m.rows(); ++col) {
        std::size_t piv = lead;
        while (piv < m.rows() && m(piv, col) == 0) ++piv;
        if (piv == m.rows()) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(lead, j), m(piv, j));
        Rational d = m(lead, col);
        for (std::size_t j = 0; j < m.cols(); ++j) m(lead, j) /= d;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == lead || m(i, col) == 0) continue;
            Rational f = m(i, col);
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(lead, j);
        }
        pivots.push_back(col);
        ++lead;
    }
    return pivots;
}

/// Basis of {v : Mv = 0} in the canonical form derived from the RREF
/// (one vector per free column, unit entry in that column).
inline std::vector<RatVec> nullspace(const RatMatrix& m) {
    RatMatrix r = m;
    std::vector<std::size_t> pivots = rref_inplace(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    std::vector<RatVec> basis;
    for (std::size_t freec = 0; freec < m.cols(); ++freec) {
        if (is_pivot[freec]) continue;
        RatVec v(m.cols(), Rational(0));
        v[freec] = 1;
        for (std::size_t pi = 0; pi < pivots.size(); ++pi) v[pivots[pi]] = -r(pi, freec);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Canonical basis of span(vecs): the nonzero rows of the RREF.
inline std::vector<RatVec> span_basis(const std::vector<RatVec>& vecs) {
    if (vecs.empty()) return {};
    RatMatrix m = RatMatrix::from_rows(vecs);
    std::size_t d = rref_inplace(m).size();
    std::vector<RatVec> basis;
    for (std::size_t i = 0; i < d; ++i) basis.push_back(m.row(i));
    return basis;
}

/// dim of the span of the given vectors (all the same length).
inline std::size_t span_dim(const std::vector<RatVec>& vecs) {
    if (vecs.empty()) return 0;
    return rank(RatMatrix::from_rows(vecs));
}

/// True iff v lies in span(basis).
inline bool in_span(const std::vector<RatVec>& basis, const RatVec& v) {
    std::vector<RatVec> rows = basis;
    std::size_t r0 = span_dim(rows);
    rows.push_back(v);
    return span_dim(rows) == r0;
}

/// True iff the two spans coincide as subspaces.
inline bool same_span(const std::vector<RatVec>& a, const std::vector<RatVec>& b) {
    std::vector<RatVec> both = a;
    both.insert(both.end(), b.begin(), b.end());
    std::size_t d = span_dim(both);
    return d == span_dim(a) && d == span_dim(b);
}

/// Basis of the orthogonal complement of span(vecs) in dimension `ambient`.
inline std::vector<RatVec> orthogonal_complement(const std::vector<RatVec>& vecs,
                                                 std::size_t ambient) {
    if (vecs.empty()) {
        std::vector<RatVec> full;
        for (std::size_t i = 0; i < ambient; ++i) {
            RatVec e(ambient, Rational(0));
            e[i] = 1;
            full.push_back(std::move(e));
        }
        return full;
    }
    return nullspace(RatMatrix::from_rows(vecs));
}

}  // namespace pypl
