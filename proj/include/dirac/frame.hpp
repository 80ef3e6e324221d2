#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dirac/linalg.hpp"
#include "dirac/section.hpp"

namespace dirac {

class DiracFrame;

/// Outcome of verify_dirac. Structure functions are filled in when the
/// frame closes under the Dorfman bracket.
struct VerifyReport {
    bool rank_ok = false;
    bool isotropy_ok = false;
    bool closure_ok = false;
    // first failing witness
    std::optional<std::pair<std::size_t, std::size_t>> isotropy_witness;
    std::optional<Scalar> isotropy_residual;
    std::optional<std::pair<std::size_t, std::size_t>> closure_witness;
    // c[i][j][k] with [s_i, s_j] = sum_k c[i][j][k] s_k
    std::vector<std::vector<std::vector<Scalar>>> structure;
    bool ok() const { return rank_ok && isotropy_ok && closure_ok; }
};

struct AlgebroidData {
    std::vector<std::vector<std::vector<Scalar>>> structure; // c[i][j][k]
    std::vector<std::vector<Scalar>> anchor;                 // anchor[i] = components of rho(s_i)
    std::vector<std::vector<Scalar>> omega_l;                // omega_L(s_i, s_j)
};

enum class PointClass { GraphOfForm, GraphOfBivector, Both, Neither };

/// n generalized sections claimed to span a Dirac structure; linear
/// independence over the fraction field is enforced at construction.
class DiracFrame {
public:
    DiracFrame(ChartPtr chart, std::vector<GeneralizedSection> sections)
        : chart_(std::move(chart)), sections_(std::move(sections)) {
        std::size_t n = chart_->dim();
        if (sections_.size() != n) throw ArithmeticError("frame must have exactly dim sections");
        for (auto& s : sections_) require_same_chart(s.chart(), chart_);
        if (rank(component_matrix()) != n)
            throw ArithmeticError("frame sections are linearly dependent over the fraction field");
    }

    const ChartPtr& chart() const { return chart_; }
    const std::vector<GeneralizedSection>& sections() const { return sections_; }
    std::size_t size() const { return sections_.size(); }

    /// n x 2n matrix: vector components then form components per row.
    ScalarMatrix component_matrix() const {
        ScalarMatrix m;
        for (auto& s : sections_) {
            std::vector<Scalar> row = s.vector_part();
            row.insert(row.end(), s.form_part().begin(), s.form_part().end());
            m.push_back(std::move(row));
        }
        return m;
    }

private:
    ChartPtr chart_;
    std::vector<GeneralizedSection> sections_;
};

/// Frame {d_i + i_{d_i} omega} of Graph(omega).
inline DiracFrame graph_of_form(const ExteriorElement& omega) {
    if (omega.variance() != Variance::Form || !omega.is_homogeneous(2))
        throw ArithmeticError("graph_of_form expects a homogeneous 2-form");
    const ChartPtr& chart = omega.chart();
    std::size_t n = chart->dim();
    std::vector<GeneralizedSection> sections;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Scalar> x(n, Scalar(chart)), a(n, Scalar(chart));
        x[i] = Scalar(chart, Rational(1));
        ExteriorElement ia = contract(ExteriorElement::basis(chart, Variance::Multivector, 1u << i), omega);
        for (std::size_t j = 0; j < n; ++j) a[j] = ia.coefficient(1u << j);
        sections.emplace_back(chart, x, a);
    }
    return DiracFrame(chart, sections);
}

/// Antisymmetric component matrix Pi^{ab} of a bivector (Pi = sum_{a<b}
/// c_ab e_a ^ e_b, so Pi^{ab} = c_ab for a < b).
inline Scalar bivector_component(const ExteriorElement& pi, std::size_t a, std::size_t b) {
    if (a == b) return Scalar(pi.chart());
    Scalar c = pi.coefficient((1u << a) | (1u << b));
    return a < b ? c : -c;
}

/// Frame {Pi(dx^k) + dx^k} of Graph(Pi).
inline DiracFrame graph_of_bivector(const ExteriorElement& pi) {
    if (pi.variance() != Variance::Multivector || !pi.is_homogeneous(2))
        throw ArithmeticError("graph_of_bivector expects a homogeneous bivector");
    const ChartPtr& chart = pi.chart();
    std::size_t n = chart->dim();
    std::vector<GeneralizedSection> sections;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Scalar> x(n, Scalar(chart)), a(n, Scalar(chart));
        a[k] = Scalar(chart, Rational(1));
        for (std::size_t j = 0; j < n; ++j) x[j] = bivector_component(pi, k, j);
        sections.emplace_back(chart, x, a);
    }
    return DiracFrame(chart, sections);
}

/// B-field transform: X + alpha -> X + alpha + i_X B, for closed B.
inline DiracFrame bfield(const DiracFrame& f, const ExteriorElement& b) {
    require_same_chart(f.chart(), b.chart());
    if (b.variance() != Variance::Form || !b.is_homogeneous(2))
        throw ArithmeticError("bfield expects a homogeneous 2-form");
    if (!ext_d(b).is_zero())
        throw ArithmeticError("bfield transform requires a closed 2-form");
    std::vector<GeneralizedSection> sections;
    for (auto& s : f.sections()) {
        ExteriorElement ixb = contract(s.vector_element(), b);
        std::vector<Scalar> a = s.form_part();
        for (std::size_t j = 0; j < a.size(); ++j) a[j] += ixb.coefficient(1u << j);
        sections.emplace_back(f.chart(), s.vector_part(), a);
    }
    return DiracFrame(f.chart(), sections);
}

/// Product chart with concatenated coordinates and radicals; returns the
/// variable index maps for embedding each factor's scalars.
inline ChartPtr product_chart(const ChartPtr& c1, const ChartPtr& c2,
                              std::vector<std::size_t>* map1, std::vector<std::size_t>* map2) {
    std::vector<std::string> coords = c1->coords();
    coords.insert(coords.end(), c2->coords().begin(), c2->coords().end());
    std::size_t n1 = c1->dim(), n2 = c2->dim();
    std::size_t r1 = c1->radicals().size(), r2 = c2->radicals().size();
    std::size_t total = n1 + n2 + r1 + r2;

    map1->clear();
    map2->clear();
    for (std::size_t v = 0; v < n1; ++v) map1->push_back(v);
    for (std::size_t v = 0; v < r1; ++v) map1->push_back(n1 + n2 + v);
    for (std::size_t v = 0; v < n2; ++v) map2->push_back(n1 + v);
    for (std::size_t v = 0; v < r2; ++v) map2->push_back(n1 + n2 + r1 + v);

    auto lift = [&](const Polynomial& p, const std::vector<std::size_t>& vm) {
        Polynomial out(total);
        for (auto& [m, c] : p.terms()) {
            Monomial mm(total);
            for (std::size_t v = 0; v < m.exps.size(); ++v) mm.exps[vm[v]] = m.exps[v];
            out.add_term(mm, c);
        }
        return out;
    };
    std::vector<std::pair<std::string, Polynomial>> radicals;
    for (auto& rad : c1->radicals()) radicals.emplace_back(rad.symbol, lift(rad.defining, *map1));
    for (auto& rad : c2->radicals()) radicals.emplace_back(rad.symbol, lift(rad.defining, *map2));
    return std::make_shared<Chart>(coords, radicals);
}

/// Product of Dirac frames: sections extended by zero in the other factor.
inline DiracFrame product(const DiracFrame& f1, const DiracFrame& f2) {
    std::vector<std::size_t> map1, map2;
    ChartPtr chart = product_chart(f1.chart(), f2.chart(), &map1, &map2);
    std::size_t n1 = f1.chart()->dim(), n2 = f2.chart()->dim();
    std::vector<GeneralizedSection> sections;
    auto extend = [&](const GeneralizedSection& s, const std::vector<std::size_t>& vm, bool first) {
        std::vector<Scalar> x(n1 + n2, Scalar(chart)), a(n1 + n2, Scalar(chart));
        std::size_t offset = first ? 0 : n1;
        for (std::size_t i = 0; i < s.vector_part().size(); ++i) {
            x[offset + i] = s.vector_part()[i].embed(chart, vm);
            a[offset + i] = s.form_part()[i].embed(chart, vm);
        }
        return GeneralizedSection(chart, x, a);
    };
    for (auto& s : f1.sections()) sections.push_back(extend(s, map1, true));
    for (auto& s : f2.sections()) sections.push_back(extend(s, map2, false));
    return DiracFrame(chart, sections);
}

/// Checks rank, isotropy and Dorfman closure; computes structure functions
/// when closed.
inline VerifyReport verify_dirac(const DiracFrame& f) {
    VerifyReport rep;
    const ChartPtr& chart = f.chart();
    std::size_t n = f.size();
    rep.rank_ok = rank(f.component_matrix()) == n;

    rep.isotropy_ok = true;
    for (std::size_t i = 0; i < n && rep.isotropy_ok; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Scalar p = pairing(f.sections()[i], f.sections()[j]);
            if (!p.is_zero()) {
                rep.isotropy_ok = false;
                rep.isotropy_witness = {i, j};
                rep.isotropy_residual = p;
                break;
            }
        }

    // closure: [s_i, s_j] must solve as a Scalar combination of the frame
    ScalarMatrix columns(2 * n, std::vector<Scalar>(n, Scalar(chart)));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < n; ++c) {
            columns[c][k] = f.sections()[k].vector_part()[c];
            columns[n + c][k] = f.sections()[k].form_part()[c];
        }
    rep.closure_ok = true;
    rep.structure.assign(n, std::vector<std::vector<Scalar>>(n, std::vector<Scalar>(n, Scalar(chart))));
    for (std::size_t i = 0; i < n && rep.closure_ok; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            GeneralizedSection br = dorfman(f.sections()[i], f.sections()[j]);
            std::vector<Scalar> rhs = br.vector_part();
            rhs.insert(rhs.end(), br.form_part().begin(), br.form_part().end());
            auto sol = solve_full_column_rank(columns, rhs);
            if (!sol) {
                rep.closure_ok = false;
                rep.closure_witness = {i, j};
                break;
            }
            rep.structure[i][j] = *sol;
        }
    return rep;
}

/// Pointwise type of the Dirac structure spanned by the frame.
inline PointClass classify_point(const DiracFrame& f, const Point& m) {
    require_same_chart(f.chart(), m.chart());
    std::size_t n = f.size();
    bool exact = m.all_radicals_rational();
    std::vector<std::vector<Rational>> vq, fq;
    std::vector<std::vector<double>> vd, fd;
    for (auto& s : f.sections()) {
        std::vector<Rational> vr, fr;
        std::vector<double> vdd, fdd;
        for (std::size_t c = 0; c < n; ++c) {
            const Scalar& xv = s.vector_part()[c];
            const Scalar& av = s.form_part()[c];
            auto sx = smooth_at(xv, m);
            auto sa = smooth_at(av, m);
            if (sx.status != Smoothness::Smooth || sa.status != Smoothness::Smooth)
                throw ArithmeticError("classify_point: section component not smooth at the point");
            if (exact && sx.value && sa.value) {
                vr.push_back(*sx.value);
                fr.push_back(*sa.value);
            } else {
                exact = false;
            }
            vdd.push_back(sx.approx);
            fdd.push_back(sa.approx);
        }
        vq.push_back(vr);
        fq.push_back(fr);
        vd.push_back(vdd);
        fd.push_back(fdd);
    }
    std::size_t vrank = exact ? rational_rank(vq) : numeric_rank(vd);
    std::size_t frank = exact ? rational_rank(fq) : numeric_rank(fd);
    bool is_form = vrank == n;
    bool is_biv = frank == n;
    if (is_form && is_biv) return PointClass::Both;
    if (is_form) return PointClass::GraphOfForm;
    if (is_biv) return PointClass::GraphOfBivector;
    return PointClass::Neither;
}

/// Anchor, structure functions and the Lie algebroid 2-form of a verified
/// frame.
inline AlgebroidData algebroid_data(const DiracFrame& f, const VerifyReport& rep) {
    if (!rep.ok()) throw ArithmeticError("algebroid_data requires a verified frame");
    AlgebroidData data;
    data.structure = rep.structure;
    std::size_t n = f.size();
    for (auto& s : f.sections()) data.anchor.push_back(s.vector_part());
    data.omega_l.assign(n, std::vector<Scalar>(n, Scalar(f.chart())));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            data.omega_l[i][j] = antisymmetric_pairing(f.sections()[i], f.sections()[j]);
    return data;
}

/// Span equality of two frames over the fraction field.
inline bool span_equal(const DiracFrame& a, const DiracFrame& b) {
    require_same_chart(a.chart(), b.chart());
    ScalarMatrix stacked = a.component_matrix();
    ScalarMatrix mb = b.component_matrix();
    stacked.insert(stacked.end(), mb.begin(), mb.end());
    std::size_t n = a.size();
    return rank(stacked) == n;
}

} // namespace dirac
