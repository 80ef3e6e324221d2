#pragma once

#include <vector>

#include "dirac/exterior.hpp"

namespace dirac {

/// Section X + alpha of TM + T*M in chart components.
class GeneralizedSection {
public:
    GeneralizedSection(ChartPtr chart, std::vector<Scalar> vector_part, std::vector<Scalar> form_part)
        : chart_(std::move(chart)), x_(std::move(vector_part)), alpha_(std::move(form_part)) {
        if (x_.size() != chart_->dim() || alpha_.size() != chart_->dim())
            throw ArithmeticError("section component counts must equal the chart dimension");
        for (auto& c : x_) require_same_chart(c.chart(), chart_);
        for (auto& c : alpha_) require_same_chart(c.chart(), chart_);
    }
    static GeneralizedSection zero(ChartPtr chart) {
        std::vector<Scalar> z(chart->dim(), Scalar(chart));
        return GeneralizedSection(std::move(chart), z, z);
    }

    const ChartPtr& chart() const { return chart_; }
    const std::vector<Scalar>& vector_part() const { return x_; }
    const std::vector<Scalar>& form_part() const { return alpha_; }

    ExteriorElement vector_element() const {
        ExteriorElement v(chart_, Variance::Multivector);
        for (std::size_t i = 0; i < x_.size(); ++i) v.add_term(1u << i, x_[i]);
        return v;
    }
    ExteriorElement form_element() const {
        ExteriorElement a(chart_, Variance::Form);
        for (std::size_t i = 0; i < alpha_.size(); ++i) a.add_term(1u << i, alpha_[i]);
        return a;
    }

    GeneralizedSection operator+(const GeneralizedSection& o) const {
        require_same_chart(chart_, o.chart_);
        std::vector<Scalar> x, a;
        for (std::size_t i = 0; i < x_.size(); ++i) {
            x.push_back(x_[i] + o.x_[i]);
            a.push_back(alpha_[i] + o.alpha_[i]);
        }
        return GeneralizedSection(chart_, x, a);
    }
    GeneralizedSection operator-() const {
        std::vector<Scalar> x, a;
        for (std::size_t i = 0; i < x_.size(); ++i) {
            x.push_back(-x_[i]);
            a.push_back(-alpha_[i]);
        }
        return GeneralizedSection(chart_, x, a);
    }
    GeneralizedSection operator-(const GeneralizedSection& o) const { return *this + (-o); }
    GeneralizedSection operator*(const Scalar& f) const {
        std::vector<Scalar> x, a;
        for (std::size_t i = 0; i < x_.size(); ++i) {
            x.push_back(x_[i] * f);
            a.push_back(alpha_[i] * f);
        }
        return GeneralizedSection(chart_, x, a);
    }
    bool is_zero() const {
        for (auto& c : x_)
            if (!c.is_zero()) return false;
        for (auto& c : alpha_)
            if (!c.is_zero()) return false;
        return true;
    }
    bool operator==(const GeneralizedSection& o) const {
        return chart_ == o.chart_ && x_ == o.x_ && alpha_ == o.alpha_;
    }

private:
    ChartPtr chart_;
    std::vector<Scalar> x_;
    std::vector<Scalar> alpha_;
};

/// Symmetric pairing <X+a, Y+b>_+ = (i_X b + i_Y a)/2.
inline Scalar pairing(const GeneralizedSection& a, const GeneralizedSection& b) {
    require_same_chart(a.chart(), b.chart());
    Scalar s(a.chart());
    for (std::size_t i = 0; i < a.chart()->dim(); ++i)
        s += a.vector_part()[i] * b.form_part()[i] + b.vector_part()[i] * a.form_part()[i];
    return s * Scalar(a.chart(), Rational(1, 2));
}

/// Antisymmetric pairing pulled back to a Dirac structure:
/// omega_L(X+a, Y+b) = -(i_X b - i_Y a)/2.
inline Scalar antisymmetric_pairing(const GeneralizedSection& a, const GeneralizedSection& b) {
    require_same_chart(a.chart(), b.chart());
    Scalar s(a.chart());
    for (std::size_t i = 0; i < a.chart()->dim(); ++i)
        s += a.vector_part()[i] * b.form_part()[i] - b.vector_part()[i] * a.form_part()[i];
    return s * Scalar(a.chart(), Rational(-1, 2));
}

/// Dorfman bracket [X+a, Y+b] = [X,Y] + L_X b - i_Y da.
inline GeneralizedSection dorfman(const GeneralizedSection& a, const GeneralizedSection& b) {
    require_same_chart(a.chart(), b.chart());
    const ChartPtr& chart = a.chart();
    std::size_t n = chart->dim();
    const auto& X = a.vector_part();
    const auto& Y = b.vector_part();
    const auto& al = a.form_part();
    const auto& be = b.form_part();

    std::vector<Scalar> lie(n, Scalar(chart));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            lie[i] += X[j] * Y[i].derive(j) - Y[j] * X[i].derive(j);

    // (L_X b)_i = X^j d_j b_i + b_j d_i X^j
    // (i_Y da)_i = Y^j (d_j a_i - d_i a_j)
    std::vector<Scalar> form(n, Scalar(chart));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            form[i] += X[j] * be[i].derive(j) + be[j] * X[j].derive(i);
            form[i] -= Y[j] * (al[i].derive(j) - al[j].derive(i));
        }
    return GeneralizedSection(chart, lie, form);
}

/// Clifford action (X + a) . phi = i_X phi + a ^ phi.
inline ExteriorElement clifford_act(const GeneralizedSection& s, const ExteriorElement& phi) {
    require_same_chart(s.chart(), phi.chart());
    if (phi.variance() != Variance::Form) throw ArithmeticError("clifford_act expects a form");
    return contract(s.vector_element(), phi) + wedge(s.form_element(), phi);
}

} // namespace dirac
