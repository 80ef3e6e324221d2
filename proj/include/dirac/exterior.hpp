#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dirac/scalar.hpp"

namespace dirac {

enum class Variance { Form, Multivector };

/// Index subsets are bitmasks over the chart coordinates, ordered by degree
/// first and then lexicographically; this is the monomial order used for
/// printing and for sign-fixing of spinor lines.
struct GradedMaskOrder {
    bool operator()(std::uint32_t a, std::uint32_t b) const {
        int pa = std::popcount(a), pb = std::popcount(b);
        if (pa != pb) return pa < pb;
        // lex by lowest participating index: compare bit-reversed masks
        std::uint32_t ra = 0, rb = 0;
        for (int i = 0; i < 32; ++i) {
            ra = (ra << 1) | ((a >> i) & 1u);
            rb = (rb << 1) | ((b >> i) & 1u);
        }
        return ra > rb;
    }
};

/// Sign of merging the (disjoint) increasing index sets A and B into one
/// increasing set: parity of the number of transpositions.
inline int merge_sign(std::uint32_t a, std::uint32_t b) {
    int sign = 1;
    for (std::uint32_t bit = b; bit; bit &= bit - 1) {
        std::uint32_t idx = std::uint32_t(std::countr_zero(bit));
        std::uint32_t higher = a >> (idx + 1);
        if (std::popcount(higher) & 1) sign = -sign;
    }
    return sign;
}

/// Mixed-degree element of the exterior algebra of forms (dx^I) or
/// multivector fields (e_I) over a chart, with Scalar coefficients.
class ExteriorElement {
public:
    using TermMap = std::map<std::uint32_t, Scalar, GradedMaskOrder>;

    ExteriorElement() = default;
    ExteriorElement(ChartPtr chart, Variance variance)
        : chart_(std::move(chart)), variance_(variance) {}

    static ExteriorElement scalar(ChartPtr chart, Variance variance, const Scalar& c) {
        ExteriorElement e(std::move(chart), variance);
        e.add_term(0, c);
        return e;
    }
    /// Basis monomial dx^I or e_I with unit coefficient.
    static ExteriorElement basis(ChartPtr chart, Variance variance, std::uint32_t mask) {
        ExteriorElement e(chart, variance);
        e.add_term(mask, Scalar(std::move(chart), Rational(1)));
        return e;
    }

    const ChartPtr& chart() const { return chart_; }
    Variance variance() const { return variance_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_homogeneous(int degree) const {
        for (auto& [m, c] : terms_)
            if (std::popcount(m) != degree) return false;
        return true;
    }
    int max_degree() const {
        int d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, std::popcount(m));
        return d;
    }
    Scalar coefficient(std::uint32_t mask) const {
        auto it = terms_.find(mask);
        return it == terms_.end() ? Scalar(chart_) : it->second;
    }
    /// Homogeneous part of the given degree.
    ExteriorElement part(int degree) const {
        ExteriorElement r(chart_, variance_);
        for (auto& [m, c] : terms_)
            if (std::popcount(m) == degree) r.terms_.emplace(m, c);
        return r;
    }

    void add_term(std::uint32_t mask, const Scalar& c) {
        if (c.is_zero()) return;
        if (std::uint32_t(std::popcount(mask)) > chart_->dim())
            throw ArithmeticError("exterior degree exceeds chart dimension");
        auto it = terms_.find(mask);
        if (it == terms_.end()) {
            terms_.emplace(mask, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    ExteriorElement operator-() const {
        ExteriorElement r(chart_, variance_);
        for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    ExteriorElement operator+(const ExteriorElement& o) const {
        check_compatible(o);
        ExteriorElement r = *this;
        for (auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }
    ExteriorElement operator-(const ExteriorElement& o) const { return *this + (-o); }
    ExteriorElement operator*(const Scalar& c) const {
        ExteriorElement r(chart_, variance_);
        if (c.is_zero()) return r;
        for (auto& [m, k] : terms_) {
            Scalar prod = k * c;
            if (!prod.is_zero()) r.terms_.emplace(m, prod);
        }
        return r;
    }
    ExteriorElement& operator+=(const ExteriorElement& o) { return *this = *this + o; }
    ExteriorElement& operator-=(const ExteriorElement& o) { return *this = *this - o; }

    bool operator==(const ExteriorElement& o) const {
        return chart_ == o.chart_ && variance_ == o.variance_ && terms_ == o.terms_;
    }

private:
    void check_compatible(const ExteriorElement& o) const {
        require_same_chart(chart_, o.chart_);
        if (variance_ != o.variance_) throw ArithmeticError("form/multivector variance mismatch");
    }

    ChartPtr chart_;
    Variance variance_ = Variance::Form;
    TermMap terms_;
};

/// Graded-antisymmetric product.
inline ExteriorElement wedge(const ExteriorElement& a, const ExteriorElement& b) {
    require_same_chart(a.chart(), b.chart());
    if (a.variance() != b.variance()) throw ArithmeticError("wedge: variance mismatch");
    ExteriorElement r(a.chart(), a.variance());
    for (auto& [ma, ca] : a.terms()) {
        for (auto& [mb, cb] : b.terms()) {
            if (ma & mb) continue; // repeated factor
            int sign = merge_sign(ma, mb);
            Scalar c = ca * cb;
            r.add_term(ma | mb, sign > 0 ? c : -c);
        }
    }
    return r;
}

inline ExteriorElement wedge_pow(const ExteriorElement& a, std::uint32_t k) {
    ExteriorElement r = ExteriorElement::scalar(a.chart(), a.variance(), Scalar(a.chart(), Rational(1)));
    for (std::uint32_t i = 0; i < k; ++i) r = wedge(r, a);
    return r;
}

/// Exterior derivative; d o d = 0.
inline ExteriorElement ext_d(const ExteriorElement& a) {
    if (a.variance() != Variance::Form) throw ArithmeticError("ext_d applies to forms only");
    ExteriorElement r(a.chart(), Variance::Form);
    std::size_t n = a.chart()->dim();
    for (auto& [m, c] : a.terms()) {
        for (std::size_t j = 0; j < n; ++j) {
            std::uint32_t bit = 1u << j;
            if (m & bit) continue;
            Scalar dc = c.derive(j);
            if (dc.is_zero()) continue;
            int sign = merge_sign(bit, m);
            r.add_term(bit | m, sign > 0 ? dc : -dc);
        }
    }
    return r;
}

/// Interior product of a single coordinate vector e_j with a form monomial.
inline std::pair<std::uint32_t, int> contract_basis(std::size_t j, std::uint32_t mask) {
    std::uint32_t bit = 1u << j;
    if (!(mask & bit)) return {0u, 0};
    std::uint32_t lower = mask & (bit - 1);
    int sign = (std::popcount(lower) & 1) ? -1 : 1;
    return {mask & ~bit, sign};
}

/// Interior product extended from vectors by i_{X ^ Y} = i_X o i_Y (the
/// leftmost factor acts last).
inline ExteriorElement contract(const ExteriorElement& v, const ExteriorElement& a) {
    require_same_chart(v.chart(), a.chart());
    if (v.variance() != Variance::Multivector || a.variance() != Variance::Form)
        throw ArithmeticError("contract expects (multivector, form)");
    ExteriorElement r(a.chart(), Variance::Form);
    for (auto& [mv, cv] : v.terms()) {
        if (mv == 0) {
            // degree-0 multivector part acts by scalar multiplication
            for (auto& [mf, cf] : a.terms()) r.add_term(mf, cv * cf);
            continue;
        }
        for (auto& [mf, cf] : a.terms()) {
            // apply i_{e_j} for j in mv from highest index down (rightmost first)
            std::uint32_t mask = mf;
            int sign = 1;
            bool zero = false;
            std::uint32_t rem = mv;
            while (rem) {
                int j = 31 - std::countl_zero(rem);
                rem &= ~(1u << j);
                auto [nm, s] = contract_basis(std::size_t(j), mask);
                if (s == 0) {
                    zero = true;
                    break;
                }
                mask = nm;
                sign *= s;
            }
            if (zero) continue;
            Scalar c = cv * cf;
            r.add_term(mask, sign > 0 ? c : -c);
        }
    }
    return r;
}

/// Sum of squared coefficients (Euclidean coefficient norm, squared), exact.
inline Scalar coeff_norm_sq(const ExteriorElement& a) {
    Scalar s(a.chart());
    for (auto& [m, c] : a.terms()) s += c * c;
    return s;
}

/// Schouten self-bracket of a bivector, assembled as a trivector; zero iff
/// the bivector is Poisson.
inline ExteriorElement schouten_self(const ExteriorElement& bivector) {
    if (bivector.variance() != Variance::Multivector || !bivector.is_homogeneous(2))
        throw ArithmeticError("schouten_self expects a homogeneous bivector");
    const ChartPtr& chart = bivector.chart();
    std::size_t n = chart->dim();
    // component matrix, antisymmetric
    auto comp = [&](std::size_t a, std::size_t b) -> Scalar {
        if (a == b) return Scalar(chart);
        std::uint32_t mask = (1u << a) | (1u << b);
        Scalar c = bivector.coefficient(mask);
        return a < b ? c : -c;
    };
    ExteriorElement r(chart, Variance::Multivector);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                Scalar t(chart);
                for (std::size_t l = 0; l < n; ++l) {
                    t += comp(l, i) * comp(j, k).derive(l);
                    t += comp(l, j) * comp(k, i).derive(l);
                    t += comp(l, k) * comp(i, j).derive(l);
                }
                t = Scalar(chart, Rational(2)) * t;
                r.add_term((1u << i) | (1u << j) | (1u << k), t);
            }
    return r;
}

/// Printable name of a basis monomial, e.g. "dq1^dq2" or "ex^ey".
inline std::string basis_name(const Chart& chart, Variance variance, std::uint32_t mask) {
    if (mask == 0) return "1";
    std::string out;
    for (std::size_t i = 0; i < chart.dim(); ++i) {
        if (!(mask & (1u << i))) continue;
        if (!out.empty()) out += "^";
        out += (variance == Variance::Form ? "d" : "e") + chart.coords()[i];
    }
    return out;
}

/// Numeric pullback of a form under a map given by Scalar components on a
/// source chart, using a finite-difference Jacobian at the sample point.
/// Returns the coefficient table on the source chart.
inline std::map<std::uint32_t, double, GradedMaskOrder> numeric_pullback(
    const ExteriorElement& phi, const std::vector<Scalar>& map_components, const Point& m,
    double step = 1e-6) {
    if (phi.variance() != Variance::Form) throw ArithmeticError("numeric_pullback expects a form");
    const ChartPtr& target = phi.chart();
    if (map_components.size() != target->dim())
        throw ArithmeticError("map component count does not match target dimension");
    const ChartPtr& source = m.chart();
    for (auto& f : map_components) require_same_chart(f.chart(), source);

    std::vector<double> m0;
    for (auto& v : m.values()) m0.push_back(v.get_d());
    auto eval_map = [&](const std::vector<double>& coords) {
        auto vars = numeric_var_values(*source, coords);
        std::vector<double> out;
        for (auto& f : map_components) out.push_back(f.eval_double(vars));
        return out;
    };
    std::vector<double> image = eval_map(m0);
    // Jacobian J[t][s] = d map_t / d source_s
    std::size_t p = source->dim(), q = target->dim();
    std::vector<std::vector<double>> jac(q, std::vector<double>(p));
    for (std::size_t s = 0; s < p; ++s) {
        auto hi = m0, lo = m0;
        hi[s] += step;
        lo[s] -= step;
        auto vh = eval_map(hi), vl = eval_map(lo);
        for (std::size_t t = 0; t < q; ++t) jac[t][s] = (vh[t] - vl[t]) / (2 * step);
    }
    auto target_vars = numeric_var_values(*target, image);

    std::map<std::uint32_t, double, GradedMaskOrder> out;
    for (auto& [mask_t, coeff] : phi.terms()) {
        double cval = coeff.eval_double(target_vars);
        std::vector<int> rows;
        for (std::size_t t = 0; t < q; ++t)
            if (mask_t & (1u << t)) rows.push_back(int(t));
        std::size_t k = rows.size();
        if (k == 0) {
            out[0] += cval;
            continue;
        }
        // all increasing k-subsets of source indices
        std::vector<int> cols(k);
        for (std::size_t i = 0; i < k; ++i) cols[i] = int(i);
        while (true) {
            // det of the k x k Jacobian minor
            std::vector<std::vector<double>> sub(k, std::vector<double>(k));
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b) sub[a][b] = jac[rows[a]][cols[b]];
            double det = 1.0;
            for (std::size_t col = 0; col < k; ++col) {
                std::size_t piv = col;
                for (std::size_t rr = col + 1; rr < k; ++rr)
                    if (std::abs(sub[rr][col]) > std::abs(sub[piv][col])) piv = rr;
                if (std::abs(sub[piv][col]) < 1e-300) {
                    det = 0.0;
                    break;
                }
                if (piv != col) {
                    std::swap(sub[piv], sub[col]);
                    det = -det;
                }
                det *= sub[col][col];
                for (std::size_t rr = col + 1; rr < k; ++rr) {
                    double f = sub[rr][col] / sub[col][col];
                    for (std::size_t cc = col; cc < k; ++cc) sub[rr][cc] -= f * sub[col][cc];
                }
            }
            if (det != 0.0) {
                std::uint32_t mask_s = 0;
                for (int cidx : cols) mask_s |= 1u << cidx;
                out[mask_s] += cval * det;
            }
            // next combination
            int i = int(k) - 1;
            while (i >= 0 && cols[std::size_t(i)] == int(p - k + std::size_t(i))) --i;
            if (i < 0) break;
            ++cols[std::size_t(i)];
            for (std::size_t j2 = std::size_t(i) + 1; j2 < k; ++j2) cols[j2] = cols[j2 - 1] + 1;
        }
    }
    for (auto it = out.begin(); it != out.end();) {
        if (std::abs(it->second) < 1e-12)
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

} // namespace dirac
