#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "dirac/chart.hpp"
#include "dirac/polynomial.hpp"

namespace dirac {

struct ArithmeticError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

/// Apply the radical relations s^2 = p to bring every radical exponent
/// below 2. Defining polynomials are radical-free, so one rewrite per term
/// suffices.
inline Polynomial reduce_radicals(const Polynomial& p, const Chart& chart) {
    if (chart.radicals().empty()) return p;
    Polynomial out(p.nvars());
    for (auto& [m, c] : p.terms()) {
        Monomial mm = m;
        Polynomial factor = Polynomial::constant(p.nvars(), 1);
        for (std::size_t i = 0; i < chart.radicals().size(); ++i) {
            std::size_t v = chart.dim() + i;
            std::uint32_t e = mm.exps[v];
            if (e >= 2) {
                factor *= chart.radicals()[i].defining.pow(e / 2);
                mm.exps[v] = e % 2;
            }
        }
        Polynomial t(p.nvars());
        t.add_term(mm, c);
        out += t * factor;
    }
    return out;
}

inline bool has_radical(const Polynomial& p, const Chart& chart) {
    for (std::size_t v = chart.dim(); v < chart.nvars(); ++v)
        if (p.depends_on(v)) return true;
    return false;
}

/// Split p = a + b*s for the radical variable at index v (p must have
/// s-degree <= 1).
inline std::pair<Polynomial, Polynomial> split_radical(const Polynomial& p, std::size_t v) {
    Polynomial a(p.nvars()), b(p.nvars());
    for (auto& [m, c] : p.terms()) {
        if (m.exps[v] == 0) {
            a.add_term(m, c);
        } else {
            Monomial mm = m;
            mm.exps[v] = 0;
            b.add_term(mm, c);
        }
    }
    return {a, b};
}

} // namespace detail

/// Exact rational function over a chart, optionally involving the chart's
/// radical symbols in the numerator. Canonical form: radical exponents
/// reduced below 2, denominator radical-free with monic graded-lex leading
/// coefficient, numerator and denominator coprime in the free ring.
class Scalar {
public:
    Scalar() = default;
    explicit Scalar(ChartPtr chart)
        : chart_(std::move(chart)), num_(chart_->nvars()), den_(Polynomial::constant(chart_->nvars(), 1)) {}

    Scalar(ChartPtr chart, const Rational& c) : Scalar(std::move(chart)) {
        num_ = Polynomial::constant(chart_->nvars(), c);
    }
    Scalar(ChartPtr chart, Polynomial num, Polynomial den) : chart_(std::move(chart)), num_(std::move(num)), den_(std::move(den)) {
        canonicalize();
    }

    static Scalar variable(ChartPtr chart, std::size_t var) {
        Scalar s(chart);
        s.num_ = Polynomial::variable(chart->nvars(), var);
        return s;
    }
    static Scalar from_polynomial(ChartPtr chart, Polynomial p) {
        Polynomial one = Polynomial::constant(p.nvars(), 1);
        return Scalar(std::move(chart), std::move(p), std::move(one));
    }

    const ChartPtr& chart() const { return chart_; }
    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == den_; }
    bool has_radical() const { return detail::has_radical(num_, *chart_); }
    bool is_polynomial() const { return den_.is_constant(); }

    bool operator==(const Scalar& o) const {
        return chart_ == o.chart_ && num_ == o.num_ && den_ == o.den_;
    }

    Scalar operator-() const {
        Scalar r = *this;
        r.num_ = -r.num_;
        return r;
    }
    Scalar operator+(const Scalar& o) const {
        require_same_chart(chart_, o.chart_);
        return Scalar(chart_, num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    Scalar operator-(const Scalar& o) const { return *this + (-o); }
    Scalar operator*(const Scalar& o) const {
        require_same_chart(chart_, o.chart_);
        return Scalar(chart_, num_ * o.num_, den_ * o.den_);
    }
    Scalar operator/(const Scalar& o) const {
        require_same_chart(chart_, o.chart_);
        if (o.is_zero()) throw ArithmeticError("division by the zero scalar");
        return Scalar(chart_, num_ * o.den_, den_ * o.num_);
    }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    Scalar pow(std::uint32_t k) const {
        Scalar r(chart_, Rational(1));
        for (std::uint32_t i = 0; i < k; ++i) r *= *this;
        return r;
    }

    /// Exact partial derivative with respect to a coordinate. Radicals are
    /// differentiated via ds/dx = (dp/dx) s / (2p).
    Scalar derive(std::size_t coord) const {
        if (coord >= chart_->dim()) throw ArithmeticError("derive: not a coordinate");
        Scalar dnum = poly_derivative(num_, coord);
        Scalar dden = poly_derivative(den_, coord);
        Scalar d = Scalar::from_polynomial(chart_, den_);
        Scalar n = Scalar::from_polynomial(chart_, num_);
        return (dnum * d - n * dden) / (d * d);
    }
    Scalar derive(const std::string& coord_name) const {
        auto idx = chart_->coord_index(coord_name);
        if (!idx) throw ArithmeticError("derive: unknown coordinate " + coord_name);
        return derive(*idx);
    }

    /// Exact value at a rational point with rational radical values.
    Rational eval_exact(const Point& m) const {
        require_same_chart(chart_, m.chart());
        auto vals = m.var_values_exact();
        Rational d = den_.eval<Rational>(vals);
        if (d == 0) throw ArithmeticError("evaluation at a pole");
        return num_.eval<Rational>(vals) / d;
    }
    double eval_double(const std::vector<double>& var_values) const {
        double d = den_.eval<double>(var_values);
        if (d == 0.0) throw ArithmeticError("evaluation at a pole");
        return num_.eval<double>(var_values) / d;
    }
    double eval_double(const Point& m) const { return eval_double(m.var_values_double()); }

    /// Scalar with the same terms on a larger chart, given the index of each
    /// of this chart's variables in the target chart's variable list.
    Scalar embed(const ChartPtr& target, const std::vector<std::size_t>& var_map) const {
        auto lift = [&](const Polynomial& p) {
            Polynomial out(target->nvars());
            for (auto& [m, c] : p.terms()) {
                Monomial mm(target->nvars());
                for (std::size_t v = 0; v < m.exps.size(); ++v) mm.exps[var_map[v]] = m.exps[v];
                out.add_term(mm, c);
            }
            return out;
        };
        return Scalar(target, lift(num_), lift(den_));
    }

    std::string to_string() const;

private:
    /// Derivative of a (possibly radical-bearing) polynomial as a Scalar.
    Scalar poly_derivative(const Polynomial& p, std::size_t coord) const {
        Scalar out(chart_);
        out += Scalar::from_polynomial(chart_, p.derivative(coord));
        for (std::size_t i = 0; i < chart_->radicals().size(); ++i) {
            std::size_t v = chart_->dim() + i;
            Polynomial part(p.nvars());
            for (auto& [m, c] : p.terms())
                if (m.exps[v] == 1) part.add_term(m, c);
            if (part.is_zero()) continue;
            const Polynomial& def = chart_->radicals()[i].defining;
            Scalar chain(chart_, def.derivative(coord), def * Polynomial::constant(p.nvars(), 2));
            out += Scalar::from_polynomial(chart_, part) * chain;
        }
        return out;
    }

    void canonicalize() {
        num_ = detail::reduce_radicals(num_, *chart_);
        den_ = detail::reduce_radicals(den_, *chart_);
        if (den_.is_zero()) throw ArithmeticError("zero denominator");
        // rationalize: clear radicals out of the denominator one at a time
        for (std::size_t i = 0; i < chart_->radicals().size(); ++i) {
            std::size_t v = chart_->dim() + i;
            if (!den_.depends_on(v)) continue;
            auto [a, b] = detail::split_radical(den_, v);
            Polynomial s = Polynomial::variable(den_.nvars(), v);
            Polynomial conj = a - b * s;
            num_ = detail::reduce_radicals(num_ * conj, *chart_);
            den_ = detail::reduce_radicals(den_ * conj, *chart_);
            if (den_.depends_on(v))
                throw ArithmeticError("failed to rationalize denominator (degenerate radical)");
        }
        if (num_.is_zero()) {
            den_ = Polynomial::constant(num_.nvars(), 1);
            return;
        }
        Polynomial g = poly_gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = *num_.try_divide(g);
            den_ = *den_.try_divide(g);
        }
        Rational lc = den_.leading_coefficient();
        num_ = num_ * (Rational(1) / lc);
        den_ = den_ * (Rational(1) / lc);
    }

    ChartPtr chart_;
    Polynomial num_;
    Polynomial den_;
};

enum class Smoothness { Smooth, Pole, RadicalUndecided };

struct SmoothResult {
    Smoothness status;
    std::optional<Rational> value; // exact value when Smooth and rational
    double approx = 0.0;           // numeric value when Smooth
};

/// Exact smoothness-at-a-point decision. Abstains (RadicalUndecided) when a
/// radical's defining polynomial vanishes at the point, or when a vanishing
/// denominator meets a radical-bearing numerator that also vanishes there.
inline SmoothResult smooth_at(const Scalar& f, const Point& m) {
    require_same_chart(f.chart(), m.chart());
    const Chart& chart = *f.chart();
    // radicals occurring in f whose square vanishes at m block the exact tier
    for (std::size_t i = 0; i < chart.radicals().size(); ++i) {
        if (f.num().depends_on(chart.dim() + i) && m.radical_square(i) == 0)
            return {Smoothness::RadicalUndecided, std::nullopt, 0.0};
    }
    std::vector<Rational> coord_ext = m.values();
    coord_ext.resize(chart.nvars(), Rational(0));
    Rational d = f.den().eval<Rational>(coord_ext); // denominator is radical-free
    if (d != 0) {
        if (m.all_radicals_rational()) {
            Rational v = f.num().eval<Rational>(m.var_values_exact()) / d;
            return {Smoothness::Smooth, v, v.get_d()};
        }
        double v = f.num().eval<double>(m.var_values_double()) / d.get_d();
        return {Smoothness::Smooth, std::nullopt, v};
    }
    if (!f.has_radical()) return {Smoothness::Pole, std::nullopt, 0.0};
    if (m.all_radicals_rational()) {
        Rational n = f.num().eval<Rational>(m.var_values_exact());
        if (n != 0) return {Smoothness::Pole, std::nullopt, 0.0};
        return {Smoothness::RadicalUndecided, std::nullopt, 0.0};
    }
    double n = f.num().eval<double>(m.var_values_double());
    if (std::abs(n) > 1e-12) return {Smoothness::Pole, std::nullopt, 0.0};
    return {Smoothness::RadicalUndecided, std::nullopt, 0.0};
}

/// Canonical expression printing; round-trips through the scene grammar.
inline std::string poly_to_string(const Polynomial& p, const Chart& chart) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : p.terms()) {
        Rational a = c;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool printed_coeff = false;
        if (a != 1 || m.is_constant()) {
            if (a.get_den() == 1)
                os << a.get_num();
            else
                os << "(" << a << ")";
            printed_coeff = true;
        }
        bool first_var = !printed_coeff;
        for (std::size_t v = 0; v < m.exps.size(); ++v) {
            for (std::uint32_t rep = 0; rep < (m.exps[v] > 0 ? 1u : 0u); ++rep) {
                if (!first_var) os << "*";
                os << chart.var_name(v);
                if (m.exps[v] > 1) os << "^" << m.exps[v];
                first_var = false;
            }
        }
    }
    return os.str();
}

inline std::string Scalar::to_string() const {
    std::string n = poly_to_string(num_, *chart_);
    if (den_.is_constant() && den_.constant_value() == 1) return n;
    return "(" + n + ")/(" + poly_to_string(den_, *chart_) + ")";
}

} // namespace dirac
