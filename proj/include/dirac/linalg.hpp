#pragma once

#include <optional>
#include <vector>

#include "dirac/scalar.hpp"

namespace dirac {

using ScalarMatrix = std::vector<std::vector<Scalar>>;

/// Row echelon reduction over the exact fraction field, leftmost-pivot
/// tie-breaking. Returns the echelon form and records pivot columns.
inline ScalarMatrix row_echelon(ScalarMatrix m, std::vector<std::size_t>* pivot_cols = nullptr) {
    if (m.empty()) return m;
    std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (!m[i][c].is_zero()) {
                piv = i;
                break;
            }
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        Scalar inv = Scalar(m[r][c].chart(), Rational(1)) / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] = m[r][j] * inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Scalar f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
        }
        if (pivot_cols) pivot_cols->push_back(c);
        ++r;
    }
    return m;
}

inline std::size_t rank(const ScalarMatrix& m) {
    std::vector<std::size_t> pivots;
    row_echelon(m, &pivots);
    return pivots.size();
}

/// Unique solution of A x = b when A has full column rank; nullopt when the
/// system is inconsistent.
inline std::optional<std::vector<Scalar>> solve_full_column_rank(const ScalarMatrix& a,
                                                                 const std::vector<Scalar>& b) {
    if (a.empty()) return std::vector<Scalar>{};
    std::size_t rows = a.size(), cols = a[0].size();
    ScalarMatrix aug = a;
    for (std::size_t i = 0; i < rows; ++i) aug[i].push_back(b[i]);
    std::vector<std::size_t> pivots;
    ScalarMatrix e = row_echelon(std::move(aug), &pivots);
    // inconsistent if a pivot lands in the augmented column
    for (auto c : pivots)
        if (c == cols) return std::nullopt;
    if (pivots.size() != cols) throw ArithmeticError("solve: matrix does not have full column rank");
    std::vector<Scalar> x(cols, Scalar(b.empty() ? a[0][0].chart() : b[0].chart()));
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = e[r][cols];
    return x;
}

/// Multiply through by the lcm of the denominators and divide by the gcd of
/// the numerators: coprime polynomial entries representing the same line.
inline std::vector<Scalar> content_reduce_row(const std::vector<Scalar>& row) {
    if (row.empty()) return row;
    const ChartPtr& chart = row[0].chart();
    Polynomial l = Polynomial::constant(chart->nvars(), 1);
    for (auto& s : row)
        if (!s.is_zero()) l = poly_lcm(l, s.den());
    std::vector<Polynomial> nums;
    Polynomial g(chart->nvars());
    Scalar lift = Scalar::from_polynomial(chart, l);
    std::vector<Scalar> scaled;
    for (auto& s : row) {
        Scalar t = s * lift;
        if (!t.is_polynomial()) throw ArithmeticError("content reduction: lcm failed to clear denominators");
        scaled.push_back(t);
        if (!t.is_zero()) g = g.is_zero() ? t.num() : poly_gcd(g, t.num());
    }
    if (g.is_zero() || g.is_constant()) return scaled;
    std::vector<Scalar> out;
    Scalar gs = Scalar::from_polynomial(chart, g);
    for (auto& s : scaled) out.push_back(s / gs);
    return out;
}

inline std::vector<std::vector<Scalar>> kernel_basis_of(const ScalarMatrix& m,
                                                        const ChartPtr& chart) {
    std::vector<std::vector<Scalar>> basis;
    if (m.empty()) return basis;
    std::size_t cols = m[0].size();
    std::vector<std::size_t> pivots;
    ScalarMatrix e = row_echelon(m, &pivots);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        std::vector<Scalar> v(cols, Scalar(chart));
        v[c] = Scalar(chart, Rational(1));
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -e[r][c];
        basis.push_back(content_reduce_row(v));
    }
    return basis;
}

/// Exact rank of a rational matrix.
inline std::size_t rational_rank(std::vector<std::vector<Rational>> m) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (m[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            Rational f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

/// Numeric rank with a relative tolerance, via partial-pivot elimination.
inline std::size_t numeric_rank(std::vector<std::vector<double>> m, double tol = 1e-9) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size(), r = 0;
    double scale = 0;
    for (auto& row : m)
        for (double v : row) scale = std::max(scale, std::abs(v));
    if (scale == 0) return 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        for (std::size_t i = r; i < rows; ++i)
            if (std::abs(m[i][c]) > std::abs(m[piv][c])) piv = i;
        if (std::abs(m[piv][c]) <= tol * scale) continue;
        std::swap(m[r], m[piv]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            double f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

} // namespace dirac
