#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "dirac/polynomial.hpp"

namespace dirac {

struct ChartError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A quadratic radical extension: symbol with symbol^2 = defining polynomial
/// (coordinates only), taking the nonnegative branch.
struct Radical {
    std::string symbol;
    Polynomial defining;
};

/// A single coordinate chart. Variables are indexed coordinates-first, then
/// radical symbols; polynomials over the chart use dim()+radicals().size()
/// variables.
class Chart {
public:
    Chart(std::vector<std::string> coords, std::vector<std::pair<std::string, Polynomial>> radicals = {})
        : coords_(std::move(coords)) {
        if (coords_.size() < 2) throw ChartError("chart dimension must be at least 2");
        std::unordered_set<std::string> seen;
        for (auto& c : coords_)
            if (!seen.insert(c).second) throw ChartError("duplicate identifier: " + c);
        const std::size_t total_vars = coords_.size() + radicals.size();
        for (auto& [sym, def] : radicals) {
            if (!seen.insert(sym).second) throw ChartError("duplicate identifier: " + sym);
            if (def.is_zero()) throw ChartError("radical " + sym + " has zero defining polynomial");
            if (def.nvars() != total_vars)
                throw ChartError("radical defining polynomial has wrong variable count");
            for (std::size_t v = dim(); v < total_vars; ++v)
                if (def.depends_on(v))
                    throw ChartError("radical " + sym + " defined in terms of radicals");
            radicals_.push_back(Radical{sym, def});
        }
    }

    std::size_t dim() const { return coords_.size(); }
    std::size_t nvars() const { return coords_.size() + radicals_.size(); }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<Radical>& radicals() const { return radicals_; }

    const std::string& var_name(std::size_t v) const {
        return v < dim() ? coords_[v] : radicals_[v - dim()].symbol;
    }
    std::optional<std::size_t> coord_index(const std::string& name) const {
        for (std::size_t i = 0; i < coords_.size(); ++i)
            if (coords_[i] == name) return i;
        return std::nullopt;
    }
    std::optional<std::size_t> var_index(const std::string& name) const {
        if (auto i = coord_index(name)) return i;
        for (std::size_t i = 0; i < radicals_.size(); ++i)
            if (radicals_[i].symbol == name) return dim() + i;
        return std::nullopt;
    }
    bool is_radical_var(std::size_t v) const { return v >= dim(); }

private:
    std::vector<std::string> coords_;
    std::vector<Radical> radicals_;
};

using ChartPtr = std::shared_ptr<const Chart>;

inline void require_same_chart(const ChartPtr& a, const ChartPtr& b) {
    if (a != b) throw ChartError("chart mismatch");
}

/// Rational-valued point of a chart. Radical values are the nonnegative
/// square roots of the defining polynomials; they are exact when those are
/// perfect rational squares.
class Point {
public:
    Point(ChartPtr chart, std::vector<Rational> values) : chart_(std::move(chart)), values_(std::move(values)) {
        if (values_.size() != chart_->dim()) throw ChartError("point has wrong number of coordinates");
        std::vector<Rational> coord_ext = values_;
        coord_ext.resize(chart_->nvars(), Rational(0));
        for (auto& rad : chart_->radicals()) {
            Rational p = rad.defining.eval<Rational>(coord_ext);
            if (p < 0)
                throw ChartError("radical " + rad.symbol + " undefined at point (negative square)");
            radical_squares_.push_back(p);
            radical_values_.push_back(exact_sqrt(p));
        }
    }

    const ChartPtr& chart() const { return chart_; }
    const std::vector<Rational>& values() const { return values_; }
    /// p(m) for the i-th radical.
    const Rational& radical_square(std::size_t i) const { return radical_squares_[i]; }
    /// Exact nonnegative root when rational.
    const std::optional<Rational>& radical_value(std::size_t i) const { return radical_values_[i]; }
    bool all_radicals_rational() const {
        for (auto& v : radical_values_)
            if (!v) return false;
        return true;
    }

    /// Full variable vector (coords + radicals) as exact rationals; only
    /// valid when all radical values are rational.
    std::vector<Rational> var_values_exact() const {
        std::vector<Rational> out = values_;
        for (std::size_t i = 0; i < chart_->radicals().size(); ++i) {
            if (!radical_values_[i]) throw ChartError("radical value is irrational at this point");
            out.push_back(*radical_values_[i]);
        }
        return out;
    }
    std::vector<double> var_values_double() const {
        std::vector<double> out;
        out.reserve(chart_->nvars());
        for (auto& v : values_) out.push_back(v.get_d());
        for (std::size_t i = 0; i < chart_->radicals().size(); ++i)
            out.push_back(radical_values_[i] ? radical_values_[i]->get_d()
                                             : std::sqrt(radical_squares_[i].get_d()));
        return out;
    }

    static std::optional<Rational> exact_sqrt(const Rational& q) {
        if (q < 0) return std::nullopt;
        mpz_class num = q.get_num(), den = q.get_den();
        if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t())) {
            mpz_class rn, rd;
            mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
            mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
            Rational r(rn, rd);
            r.canonicalize();
            return r;
        }
        return std::nullopt;
    }

private:
    ChartPtr chart_;
    std::vector<Rational> values_;
    std::vector<Rational> radical_squares_;
    std::vector<std::optional<Rational>> radical_values_;
};

/// Variable vector (coords + nonnegative radical roots) for a raw numeric
/// sample point; used by the probing tier.
inline std::vector<double> numeric_var_values(const Chart& chart, const std::vector<double>& coords) {
    if (coords.size() != chart.dim()) throw ChartError("sample has wrong number of coordinates");
    std::vector<double> out = coords;
    std::vector<double> ext = coords;
    ext.resize(chart.nvars(), 0.0);
    for (auto& rad : chart.radicals()) {
        double p = rad.defining.eval<double>(ext);
        if (p < 0) throw ChartError("radical " + rad.symbol + " undefined at sample point");
        out.push_back(std::sqrt(p));
    }
    return out;
}

} // namespace dirac
