#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace dirac {

using Rational = mpq_class;

/// Exponent vector over a fixed variable list (coordinates followed by
/// radical symbols). Compared in graded lexicographic order.
struct Monomial {
    std::vector<std::uint32_t> exps;

    explicit Monomial(std::size_t nvars = 0) : exps(nvars, 0) {}

    std::uint64_t degree() const {
        std::uint64_t d = 0;
        for (auto e : exps) d += e;
        return d;
    }
    bool is_constant() const { return degree() == 0; }

    Monomial operator*(const Monomial& o) const {
        Monomial r(exps.size());
        for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] = exps[i] + o.exps[i];
        return r;
    }
    // Exact divisibility test for monomials.
    bool divides(const Monomial& o) const {
        for (std::size_t i = 0; i < exps.size(); ++i)
            if (exps[i] > o.exps[i]) return false;
        return true;
    }
    Monomial quotient(const Monomial& o) const {
        Monomial r(exps.size());
        for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] = exps[i] - o.exps[i];
        return r;
    }
    bool operator==(const Monomial& o) const { return exps == o.exps; }
};

/// Graded lex: higher total degree first; ties broken lexicographically by
/// declared variable order. The map below keeps the leading term at begin().
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
        auto da = a.degree(), db = b.degree();
        if (da != db) return da > db;
        return a.exps > b.exps;
    }
};

/// Multivariate polynomial with exact rational coefficients over a fixed
/// number of variables. No radical relations are applied at this level; the
/// Scalar layer owns radical reduction.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, MonomialOrder>;

    Polynomial() : nvars_(0) {}
    explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

    static Polynomial constant(std::size_t nvars, const Rational& c) {
        Polynomial p(nvars);
        if (c != 0) p.terms_[Monomial(nvars)] = c;
        return p;
    }
    static Polynomial variable(std::size_t nvars, std::size_t idx, std::uint32_t exp = 1) {
        Polynomial p(nvars);
        Monomial m(nvars);
        m.exps.at(idx) = exp;
        p.terms_[m] = 1;
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
    }
    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        return terms_.begin()->second;
    }
    std::uint64_t total_degree() const {
        return terms_.empty() ? 0 : terms_.begin()->first.degree();
    }
    std::uint32_t degree_in(std::size_t var) const {
        std::uint32_t d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.exps[var]);
        return d;
    }
    bool depends_on(std::size_t var) const { return degree_in(var) > 0; }

    const Monomial& leading_monomial() const {
        if (terms_.empty()) throw std::logic_error("leading_monomial of zero polynomial");
        return terms_.begin()->first;
    }
    const Rational& leading_coefficient() const {
        if (terms_.empty()) throw std::logic_error("leading_coefficient of zero polynomial");
        return terms_.begin()->second;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial operator-() const {
        Polynomial r(nvars_);
        for (auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }
    Polynomial operator+(const Polynomial& o) const {
        check_same(o);
        Polynomial r = *this;
        for (auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }
    Polynomial operator-(const Polynomial& o) const {
        check_same(o);
        Polynomial r = *this;
        for (auto& [m, c] : o.terms_) r.add_term(m, -c);
        return r;
    }
    Polynomial operator*(const Polynomial& o) const {
        check_same(o);
        Polynomial r(nvars_);
        for (auto& [ma, ca] : terms_)
            for (auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    Polynomial operator*(const Rational& c) const {
        Polynomial r(nvars_);
        if (c == 0) return r;
        for (auto& [m, k] : terms_) r.terms_[m] = k * c;
        return r;
    }
    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    bool operator==(const Polynomial& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }

    Polynomial pow(std::uint32_t k) const {
        Polynomial r = constant(nvars_, 1);
        Polynomial base = *this;
        while (k) {
            if (k & 1) r *= base;
            base = (k >>= 1) ? base * base : base;
        }
        return r;
    }

    /// Free-ring partial derivative (no radical chain rule).
    Polynomial derivative(std::size_t var) const {
        Polynomial r(nvars_);
        for (auto& [m, c] : terms_) {
            if (m.exps[var] == 0) continue;
            Monomial mm = m;
            Rational cc = c * Rational(mm.exps[var]);
            mm.exps[var] -= 1;
            r.add_term(mm, cc);
        }
        return r;
    }

    template <typename Num>
    Num eval(const std::vector<Num>& values) const {
        Num total = Num(0);
        for (auto& [m, c] : terms_) {
            Num t = rational_as<Num>(c);
            for (std::size_t i = 0; i < nvars_; ++i)
                for (std::uint32_t e = 0; e < m.exps[i]; ++e) t *= values[i];
            total += t;
        }
        return total;
    }

    /// Exact quotient in the free polynomial ring, or nullopt if the
    /// division is not exact.
    std::optional<Polynomial> try_divide(const Polynomial& divisor) const {
        if (divisor.is_zero()) throw std::invalid_argument("polynomial division by zero");
        Polynomial rem = *this;
        Polynomial quot(nvars_);
        const Monomial& dlm = divisor.leading_monomial();
        const Rational& dlc = divisor.leading_coefficient();
        while (!rem.is_zero()) {
            const Monomial& rlm = rem.leading_monomial();
            if (!dlm.divides(rlm)) return std::nullopt;
            Monomial qm = rlm.quotient(dlm);
            Rational qc = rem.leading_coefficient() / dlc;
            Polynomial t(nvars_);
            t.terms_[qm] = qc;
            quot += t;
            rem -= t * divisor;
        }
        return quot;
    }

    /// Monic under graded lex (leading coefficient 1). Zero stays zero.
    Polynomial normalized() const {
        if (is_zero()) return *this;
        return *this * (Rational(1) / leading_coefficient());
    }

private:
    void check_same(const Polynomial& o) const {
        if (nvars_ != o.nvars_) throw std::invalid_argument("polynomial variable-count mismatch");
    }
    template <typename Num>
    static Num rational_as(const Rational& c) {
        if constexpr (std::is_same_v<Num, Rational>)
            return c;
        else
            return Num(c.get_d());
    }

    std::size_t nvars_;
    TermMap terms_;
};

namespace detail {

/// Univariate view of a multivariate polynomial in the variable `var`:
/// coefficient list indexed by exponent, entries polynomials in the rest.
inline std::vector<Polynomial> univariate_coeffs(const Polynomial& p, std::size_t var) {
    std::vector<Polynomial> coeffs(p.degree_in(var) + 1, Polynomial(p.nvars()));
    for (auto& [m, c] : p.terms()) {
        Monomial mm = m;
        std::uint32_t e = mm.exps[var];
        mm.exps[var] = 0;
        coeffs[e].add_term(mm, c);
    }
    return coeffs;
}

inline Polynomial from_univariate(const std::vector<Polynomial>& coeffs, std::size_t var,
                                  std::size_t nvars) {
    Polynomial r(nvars);
    Polynomial xv = Polynomial::variable(nvars, var);
    for (std::size_t e = 0; e < coeffs.size(); ++e) r += coeffs[e] * xv.pow(std::uint32_t(e));
    return r;
}

/// Pseudo-remainder of a by b in the variable `var` (b nonzero in var).
inline Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, std::size_t var) {
    auto ac = univariate_coeffs(a, var);
    auto bc = univariate_coeffs(b, var);
    std::size_t db = bc.size() - 1;
    Polynomial lcb = bc.back();
    Polynomial rem = a;
    Polynomial xv = Polynomial::variable(a.nvars(), var);
    while (true) {
        std::uint32_t dr = rem.degree_in(var);
        if (rem.is_zero() || dr < db) return rem;
        auto rc = univariate_coeffs(rem, var);
        Polynomial lcr = rc.back();
        rem = rem * lcb - b * lcr * xv.pow(dr - std::uint32_t(db));
    }
}

} // namespace detail

/// GCD in the free polynomial ring over the rationals, normalized monic
/// under graded lex. Primitive pseudo-remainder sequence, recursing on the
/// highest variable that actually occurs.
inline Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

namespace detail {

inline Polynomial content_of(const std::vector<Polynomial>& coeffs, std::size_t nvars) {
    Polynomial g(nvars);
    for (auto& c : coeffs) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c : poly_gcd(g, c);
        if (g.is_constant()) break;
    }
    return g.is_zero() ? g : g.normalized();
}

} // namespace detail

inline Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return b.normalized();
    if (b.is_zero()) return a.normalized();
    if (a.is_constant() || b.is_constant())
        return Polynomial::constant(a.nvars(), 1);
    if (a == b) return a.normalized();
    // cheap exact-division fast paths catch most cancellations
    if (a.total_degree() >= b.total_degree() && a.try_divide(b)) return b.normalized();
    if (b.total_degree() >= a.total_degree() && b.try_divide(a)) return a.normalized();

    // highest-index variable occurring in either
    std::size_t var = 0;
    bool found = false;
    for (std::size_t v = a.nvars(); v-- > 0;) {
        if (a.depends_on(v) || b.depends_on(v)) {
            var = v;
            found = true;
            break;
        }
    }
    if (!found) return Polynomial::constant(a.nvars(), 1);

    auto ac = detail::univariate_coeffs(a, var);
    auto bc = detail::univariate_coeffs(b, var);
    Polynomial cont_a = detail::content_of(ac, a.nvars());
    Polynomial cont_b = detail::content_of(bc, a.nvars());
    Polynomial cont_g = poly_gcd(cont_a, cont_b);

    Polynomial pa = *a.try_divide(cont_a);
    Polynomial pb = *b.try_divide(cont_b);
    if (pa.degree_in(var) < pb.degree_in(var)) std::swap(pa, pb);

    // subresultant pseudo-remainder sequence
    Polynomial g = Polynomial::constant(a.nvars(), 1);
    Polynomial h = Polynomial::constant(a.nvars(), 1);
    while (!pb.is_zero() && pb.degree_in(var) > 0) {
        std::uint32_t d = pa.degree_in(var) - pb.degree_in(var);
        Polynomial r = detail::pseudo_remainder(pa, pb, var);
        Polynomial lc_b = detail::univariate_coeffs(pb, var).back();
        pa = std::move(pb);
        if (r.is_zero()) {
            pb = r;
            break;
        }
        auto q = r.try_divide(g * h.pow(d)); // exact by the subresultant identities
        pb = q ? *q : r;
        g = lc_b;
        if (d > 0) {
            auto hq = g.pow(d).try_divide(h.pow(d - 1));
            h = hq ? *hq : g.pow(d);
        }
    }
    // a nonzero var-free remainder witnesses coprimality in var
    if (!pb.is_zero() || pa.degree_in(var) == 0) return cont_g.normalized();
    Polynomial pp = *pa.try_divide(detail::content_of(detail::univariate_coeffs(pa, var), pa.nvars()));
    return (cont_g * pp).normalized();
}

/// lcm(a,b) = a*b/gcd, normalized monic.
inline Polynomial poly_lcm(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial(a.nvars());
    return (a * *b.try_divide(poly_gcd(a, b))).normalized();
}

} // namespace dirac
