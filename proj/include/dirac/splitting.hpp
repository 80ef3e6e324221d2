#pragma once

#include <string>
#include <vector>

#include "dirac/removability.hpp"

namespace dirac {

/// Antisymmetric component matrix W_ij = omega(d_i, d_j) of a 2-form.
inline ScalarMatrix form_matrix(const ExteriorElement& omega) {
    if (omega.variance() != Variance::Form || !omega.is_homogeneous(2))
        throw ArithmeticError("form_matrix expects a homogeneous 2-form");
    const ChartPtr& chart = omega.chart();
    std::size_t n = chart->dim();
    ScalarMatrix w(n, std::vector<Scalar>(n, Scalar(chart)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            w[i][j] = omega.coefficient((1u << i) | (1u << j));
            w[j][i] = -w[i][j];
        }
    return w;
}

inline ScalarMatrix bivector_matrix(const ExteriorElement& pi) {
    if (pi.variance() != Variance::Multivector || !pi.is_homogeneous(2))
        throw ArithmeticError("bivector_matrix expects a homogeneous bivector");
    const ChartPtr& chart = pi.chart();
    std::size_t n = chart->dim();
    ScalarMatrix p(n, std::vector<Scalar>(n, Scalar(chart)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p[i][j] = bivector_component(pi, i, j);
    return p;
}

inline ExteriorElement bivector_of_matrix(const ChartPtr& chart, const ScalarMatrix& p) {
    std::size_t n = chart->dim();
    ExteriorElement pi(chart, Variance::Multivector);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pi.add_term((1u << i) | (1u << j), p[i][j]);
    return pi;
}

namespace detail {

inline ScalarMatrix mat_mul(const ScalarMatrix& a, const ScalarMatrix& b, const ChartPtr& chart) {
    std::size_t rows = a.size(), inner = b.size(), cols = inner ? b[0].size() : 0;
    ScalarMatrix out(rows, std::vector<Scalar>(cols, Scalar(chart)));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

inline bool mat_equal(const ScalarMatrix& a, const ScalarMatrix& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            if (!(a[i][j] - b[i][j]).is_zero()) return false;
    return true;
}

/// Inverse over the fraction field; throws when singular.
inline ScalarMatrix mat_inverse(const ScalarMatrix& a, const ChartPtr& chart) {
    std::size_t n = a.size();
    ScalarMatrix aug = a;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            aug[i].push_back(Scalar(chart, Rational(i == j ? 1 : 0)));
    std::vector<std::size_t> pivots;
    ScalarMatrix e = row_echelon(std::move(aug), &pivots);
    if (pivots.size() != n || pivots.back() != n - 1)
        throw ArithmeticError("matrix is singular over the fraction field");
    ScalarMatrix inv(n, std::vector<Scalar>(n, Scalar(chart)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = e[i][n + j];
    return inv;
}

/// Lexicographically next r-combination of {0..n-1}; false when exhausted.
inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    std::size_t r = idx.size();
    for (std::size_t i = r; i-- > 0;) {
        if (idx[i] < n - r + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

} // namespace detail

/// Fraction-free kernel basis of the skew component matrix, each basis row
/// divided by its content. Empty for nondegenerate forms.
inline std::vector<ExteriorElement> kernel_basis(const ExteriorElement& omega) {
    const ChartPtr& chart = omega.chart();
    auto rows = kernel_basis_of(form_matrix(omega), chart);
    std::vector<ExteriorElement> out;
    for (auto& row : rows) {
        ExteriorElement v(chart, Variance::Multivector);
        for (std::size_t i = 0; i < row.size(); ++i) v.add_term(1u << i, row[i]);
        out.push_back(std::move(v));
    }
    return out;
}

/// Candidate partial inverse: invert the lexicographically first maximal
/// invertible principal submatrix, zero elsewhere. Satisfies both inversion
/// identities by construction; the Poisson property is NOT asserted.
inline ExteriorElement partial_inverse(const ExteriorElement& omega) {
    const ChartPtr& chart = omega.chart();
    std::size_t n = chart->dim();
    ScalarMatrix w = form_matrix(omega);
    std::size_t r = rank(w);
    ScalarMatrix p(n, std::vector<Scalar>(n, Scalar(chart)));
    if (r > 0) {
        std::vector<std::size_t> idx(r);
        for (std::size_t i = 0; i < r; ++i) idx[i] = i;
        bool found = false;
        do {
            ScalarMatrix sub(r, std::vector<Scalar>(r, Scalar(chart)));
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j) sub[i][j] = w[idx[i]][idx[j]];
            if (rank(sub) == r) {
                ScalarMatrix inv = detail::mat_inverse(sub, chart);
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < r; ++j) p[idx[i]][idx[j]] = inv[i][j];
                found = true;
                break;
            }
        } while (detail::next_combination(idx, n));
        if (!found) throw ArithmeticError("no invertible principal submatrix of full rank");
    }
    return bivector_of_matrix(chart, p);
}

struct PartialInverseReport {
    bool omega_pi_omega = false; // W P W = W
    bool pi_omega_pi = false;    // P W P = P
    bool antisymmetric = false;
    bool poisson = false; // Schouten self-bracket vanishes
    bool ok() const { return omega_pi_omega && pi_omega_pi && antisymmetric && poisson; }
};

inline PartialInverseReport verify_partial_inverse(const ExteriorElement& omega,
                                                   const ExteriorElement& pi) {
    require_same_chart(omega.chart(), pi.chart());
    const ChartPtr& chart = omega.chart();
    ScalarMatrix w = form_matrix(omega);
    ScalarMatrix p = bivector_matrix(pi);
    PartialInverseReport rep;
    ScalarMatrix wp = detail::mat_mul(w, p, chart);
    rep.omega_pi_omega = detail::mat_equal(detail::mat_mul(wp, w, chart), w);
    rep.pi_omega_pi = detail::mat_equal(detail::mat_mul(p, detail::mat_mul(w, p, chart), chart), p);
    rep.antisymmetric = true;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j)
            if (!(p[i][j] + p[j][i]).is_zero()) rep.antisymmetric = false;
    rep.poisson = schouten_self(pi).is_zero();
    return rep;
}

enum class KernelRegularity { RegularWithBasis, Irregular, Undecided };

struct KernelReport {
    KernelRegularity status = KernelRegularity::Undecided;
    std::size_t generic_rank = 0;                // rank of omega over the fraction field
    std::vector<std::vector<Scalar>> basis;      // content-reduced kernel rows
    std::string detail;
};

/// Does ker(omega) extend to a smooth regular distribution at m? Decided by
/// checking the content-reduced kernel basis for smoothness and full rank
/// at the point; radical abstentions propagate to Undecided.
inline KernelReport kernel_regular_at(const ExteriorElement& omega, const Point& m) {
    require_same_chart(omega.chart(), m.chart());
    const ChartPtr& chart = omega.chart();
    std::size_t n = chart->dim();
    KernelReport rep;
    ScalarMatrix w = form_matrix(omega);
    rep.generic_rank = rank(w);
    rep.basis = kernel_basis_of(w, chart);
    std::size_t k = n - rep.generic_rank;
    if (rep.basis.size() != k) {
        rep.status = KernelRegularity::Irregular;
        rep.detail = "kernel dimension over the fraction field disagrees with the rank";
        return rep;
    }
    std::vector<std::vector<double>> at_m;
    for (auto& row : rep.basis) {
        std::vector<double> vals;
        for (auto& entry : row) {
            auto sm = smooth_at(entry, m);
            if (sm.status == Smoothness::RadicalUndecided) {
                rep.status = KernelRegularity::Undecided;
                rep.detail = "kernel entry smoothness undecided in the radical extension";
                return rep;
            }
            if (sm.status == Smoothness::Pole) {
                rep.status = KernelRegularity::Irregular;
                rep.detail = "content-reduced kernel row has a pole at the point";
                return rep;
            }
            vals.push_back(sm.approx);
        }
        at_m.push_back(std::move(vals));
    }
    if (k > 0 && numeric_rank(at_m) != k) {
        rep.status = KernelRegularity::Irregular;
        rep.detail = "content-reduced kernel basis drops rank at the point";
        return rep;
    }
    rep.status = KernelRegularity::RegularWithBasis;
    return rep;
}

/// Frame of Graph(omega) assembled from a partial inverse: the kernel of
/// omega as pure vector sections plus Pi(beta) + beta over a row basis beta
/// of im(omega) (the annihilator of the kernel).
inline DiracFrame graph_via_partial_inverse(const ExteriorElement& omega,
                                            const ExteriorElement& pi) {
    require_same_chart(omega.chart(), pi.chart());
    const ChartPtr& chart = omega.chart();
    std::size_t n = chart->dim();
    ScalarMatrix w = form_matrix(omega);
    ScalarMatrix p = bivector_matrix(pi);
    std::vector<GeneralizedSection> sections;
    for (auto& row : kernel_basis_of(w, chart))
        sections.emplace_back(chart, row, std::vector<Scalar>(n, Scalar(chart)));
    std::vector<std::size_t> pivots;
    ScalarMatrix e = row_echelon(w, &pivots);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        std::vector<Scalar> x(n, Scalar(chart));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) x[j] += e[r][k] * p[k][j];
        sections.emplace_back(chart, x, e[r]);
    }
    return DiracFrame(chart, sections);
}

struct SplittingReport {
    bool reg_closed = false;
    bool sing_closed = false;
    bool reg_smooth = false;
    bool kernel_regular = false;
    bool inverse_ok = false;
    bool pi_vanishes = false; // at m exactly, numerically along the leaf directions
    bool undecided = false;
    PartialInverseReport inverse;
    KernelReport kernel;
    Verdict verdict;
    bool all_pass() const {
        return reg_closed && sing_closed && reg_smooth && kernel_regular && inverse_ok &&
               pi_vanishes;
    }
};

/// Splitting criterion for omega = omega_reg + omega_sing at m: omega_reg
/// closed and smooth at m; omega_sing closed with a regular extended kernel
/// and a partial inverse Poisson bivector vanishing on the leaf through m.
/// All clauses pass -> the combined singularity at m is certified removable.
inline SplittingReport verify_splitting(const ExteriorElement& omega_reg,
                                        const ExteriorElement& omega_sing,
                                        const ExteriorElement& pi, const Point& m) {
    require_same_chart(omega_reg.chart(), omega_sing.chart());
    require_same_chart(omega_reg.chart(), m.chart());
    require_same_chart(pi.chart(), m.chart());
    const ChartPtr& chart = omega_reg.chart();
    SplittingReport rep;
    rep.reg_closed = ext_d(omega_reg).is_zero();
    rep.sing_closed = ext_d(omega_sing).is_zero();

    rep.reg_smooth = true;
    for (auto& [mask, c] : omega_reg.terms()) {
        auto sm = smooth_at(c, m);
        if (sm.status == Smoothness::RadicalUndecided) rep.undecided = true;
        if (sm.status != Smoothness::Smooth) rep.reg_smooth = false;
    }

    rep.kernel = kernel_regular_at(omega_sing, m);
    rep.kernel_regular = rep.kernel.status == KernelRegularity::RegularWithBasis;
    if (rep.kernel.status == KernelRegularity::Undecided) rep.undecided = true;

    rep.inverse = verify_partial_inverse(omega_sing, pi);
    rep.inverse_ok = rep.inverse.ok();

    // Pi = 0 at m, exactly; then numeric samples along the extended kernel
    // directions (the leaf through m in split coordinates)
    rep.pi_vanishes = true;
    for (auto& [mask, c] : pi.terms()) {
        auto sm = smooth_at(c, m);
        if (sm.status == Smoothness::RadicalUndecided) {
            rep.undecided = true;
            rep.pi_vanishes = false;
        } else if (sm.status != Smoothness::Smooth || std::abs(sm.approx) > 1e-12 ||
                   (sm.value && *sm.value != 0)) {
            rep.pi_vanishes = false;
        }
    }
    if (rep.pi_vanishes && rep.kernel_regular) {
        auto base = detail::base_coords(m);
        for (auto& row : rep.kernel.basis) {
            std::vector<double> dir;
            bool dir_ok = true;
            for (auto& entry : row) {
                auto sm = smooth_at(entry, m);
                if (sm.status != Smoothness::Smooth) dir_ok = false;
                dir.push_back(sm.approx);
            }
            if (!dir_ok) continue;
            for (double t = 0.5; t > 1e-3; t /= 2) {
                std::vector<double> coords = base;
                for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += t * dir[i];
                auto vars = numeric_var_values(*chart, coords);
                for (auto& [mask, c] : pi.terms()) {
                    try {
                        if (std::abs(c.eval_double(vars)) > 1e-9) rep.pi_vanishes = false;
                    } catch (const std::exception&) {
                        // unevaluable sample; exact check at m already passed
                    }
                }
            }
        }
    }

    rep.verdict.provenance = Provenance::Exact;
    if (rep.all_pass()) {
        rep.verdict.tag = VerdictTag::CertifiedRemovable;
        rep.verdict.detail = "splitting criterion: all clauses pass";
    } else {
        rep.verdict.tag = VerdictTag::Inconclusive;
        rep.verdict.detail = "splitting criterion failed clauses:";
        if (!rep.reg_closed) rep.verdict.detail += " regular-part-not-closed";
        if (!rep.sing_closed) rep.verdict.detail += " singular-part-not-closed";
        if (!rep.reg_smooth) rep.verdict.detail += " regular-part-not-smooth";
        if (!rep.kernel_regular) rep.verdict.detail += " kernel-not-regular";
        if (!rep.inverse_ok) rep.verdict.detail += " partial-inverse-failed";
        if (!rep.pi_vanishes) rep.verdict.detail += " bivector-not-vanishing-on-leaf";
        if (rep.undecided) rep.verdict.detail += " (some clauses undecided)";
    }
    return rep;
}

/// Split-coordinate block data: x-coordinates are the first p of the chart,
/// y-coordinates the remaining q. Pi depends only on the y-coordinates.
struct SplitBlocks {
    ChartPtr chart;
    std::size_t p = 0, q = 0;
    ScalarMatrix omega_xx; // p x p, antisymmetric
    ScalarMatrix omega_xy; // p x q
    ScalarMatrix omega_yy; // q x q, antisymmetric
    ScalarMatrix pi;       // q x q, antisymmetric, y-dependent only

    void validate(bool require_yy_zero = false) const {
        if (!chart || chart->dim() != p + q)
            throw ArithmeticError("split blocks: chart dimension must be p + q");
        auto check_shape = [](const ScalarMatrix& m, std::size_t r, std::size_t c,
                              const char* name) {
            if (m.size() != r) throw ArithmeticError(std::string("split blocks: bad shape for ") + name);
            for (auto& row : m)
                if (row.size() != c)
                    throw ArithmeticError(std::string("split blocks: bad shape for ") + name);
        };
        check_shape(omega_xx, p, p, "omega_xx");
        check_shape(omega_xy, p, q, "omega_xy");
        check_shape(omega_yy, q, q, "omega_yy");
        check_shape(pi, q, q, "pi");
        auto check_antisym = [](const ScalarMatrix& m, const char* name) {
            for (std::size_t i = 0; i < m.size(); ++i)
                for (std::size_t j = 0; j < m.size(); ++j)
                    if (!(m[i][j] + m[j][i]).is_zero())
                        throw ArithmeticError(std::string("split blocks: ") + name +
                                              " is not antisymmetric");
        };
        check_antisym(omega_xx, "omega_xx");
        check_antisym(omega_yy, "omega_yy");
        check_antisym(pi, "pi");
        for (auto& row : pi)
            for (auto& entry : row)
                for (std::size_t i = 0; i < p; ++i)
                    if (!entry.derive(i).is_zero())
                        throw ArithmeticError("split blocks: pi must not depend on x-coordinates");
        if (require_yy_zero)
            for (auto& row : omega_yy)
                for (auto& entry : row)
                    if (!entry.is_zero())
                        throw ArithmeticError("split blocks: omega_yy must vanish in this regime");
    }

    /// omega = 1/2 w^xx dx^dx + w^xy dx^dy + 1/2 w^yy dy^dy
    ExteriorElement assemble_form() const {
        ExteriorElement omega(chart, Variance::Form);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i + 1; j < p; ++j) omega.add_term((1u << i) | (1u << j), omega_xx[i][j]);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t b = 0; b < q; ++b) omega.add_term((1u << i) | (1u << (p + b)), omega_xy[i][b]);
        for (std::size_t a = 0; a < q; ++a)
            for (std::size_t b = a + 1; b < q; ++b)
                omega.add_term((1u << (p + a)) | (1u << (p + b)), omega_yy[a][b]);
        return omega;
    }

    ExteriorElement assemble_bivector() const {
        ExteriorElement out(chart, Variance::Multivector);
        for (std::size_t a = 0; a < q; ++a)
            for (std::size_t b = a + 1; b < q; ++b)
                out.add_term((1u << (p + a)) | (1u << (p + b)), pi[a][b]);
        return out;
    }
};

/// Dufour-Wade block data for the frame
/// a~_i = d/dx^i + A_ib d/dy^b + B_ij dx^j,
/// b~_a = Pi_ab d/dy^b + dy^a - A_ia dx^i.
struct DWBlocks {
    ChartPtr chart;
    std::size_t p = 0, q = 0;
    ScalarMatrix a;  // p x q
    ScalarMatrix b;  // p x p, antisymmetric
    ScalarMatrix pi; // q x q, antisymmetric
    ScalarMatrix c;  // p x q, defined on the regular set

    void validate() const {
        if (!chart || chart->dim() != p + q)
            throw ArithmeticError("dw blocks: chart dimension must be p + q");
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j)
                if (!(b[i][j] + b[j][i]).is_zero())
                    throw ArithmeticError("dw blocks: b is not antisymmetric");
        for (std::size_t i = 0; i < q; ++i)
            for (std::size_t j = 0; j < q; ++j)
                if (!(pi[i][j] + pi[j][i]).is_zero())
                    throw ArithmeticError("dw blocks: pi is not antisymmetric");
    }
};

struct StandardFrameResult {
    DiracFrame frame;
    AlgebroidData data;
};

/// The standard frame a_i = d/dx^i + (w^xx_ij dx^j + w^xy_ib dy^b),
/// b_a = Pi_ab d/dy^b + (dy^a - Pi_ab w^xy_jb dx^j + Pi_ab w^yy_bc dy^c),
/// with the algebroid data asserted against the closed forms: [a,a] = 0,
/// [a,b] = 0, [b_a, b_b] = (dPi_ab/dy^c) b_c, rho(a_i) = d/dx^i,
/// omega_L(a_i,a_j) = w^xx_ij, omega_L(a_i,b_a) = w^xy_ib Pi_ab,
/// omega_L(b_a,b_b) = -(Pi + Pi w^yy Pi)_ab.
inline DiracFrame standard_sections(const SplitBlocks& blocks) {
    blocks.validate();
    const ChartPtr& chart = blocks.chart;
    std::size_t p = blocks.p, q = blocks.q, n = p + q;
    std::vector<GeneralizedSection> sections;
    for (std::size_t i = 0; i < p; ++i) {
        std::vector<Scalar> x(n, Scalar(chart)), al(n, Scalar(chart));
        x[i] = Scalar(chart, Rational(1));
        for (std::size_t j = 0; j < p; ++j) al[j] = blocks.omega_xx[i][j];
        for (std::size_t b = 0; b < q; ++b) al[p + b] = blocks.omega_xy[i][b];
        sections.emplace_back(chart, x, al);
    }
    for (std::size_t a = 0; a < q; ++a) {
        std::vector<Scalar> x(n, Scalar(chart)), al(n, Scalar(chart));
        for (std::size_t b = 0; b < q; ++b) x[p + b] = blocks.pi[a][b];
        al[p + a] = Scalar(chart, Rational(1));
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t b = 0; b < q; ++b) al[j] -= blocks.pi[a][b] * blocks.omega_xy[j][b];
        for (std::size_t g = 0; g < q; ++g)
            for (std::size_t b = 0; b < q; ++b) al[p + g] += blocks.pi[a][b] * blocks.omega_yy[b][g];
        sections.emplace_back(chart, x, al);
    }
    return DiracFrame(chart, std::move(sections));
}

inline StandardFrameResult standard_frame(const SplitBlocks& blocks) {
    const ChartPtr& chart = blocks.chart;
    std::size_t p = blocks.p, q = blocks.q, n = p + q;
    DiracFrame frame = standard_sections(blocks);
    VerifyReport rep = verify_dirac(frame);
    if (!rep.ok())
        throw ArithmeticError(
            "standard frame fails the Dirac checks (the assembled form is not closed or the "
            "bivector is not Poisson)");
    AlgebroidData data = algebroid_data(frame, rep);

    // bracket table: only [b_a, b_b] = (dPi_ab/dy^c) b_c is nonzero
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Scalar expected(chart);
                if (i >= p && j >= p && k >= p)
                    expected = blocks.pi[i - p][j - p].derive(k);
                if (!(data.structure[i][j][k] - expected).is_zero())
                    throw ArithmeticError("standard frame: bracket table mismatch");
            }
    // anchor of a_i is d/dx^i by construction; omega_L closed forms
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            if (!(data.omega_l[i][j] - blocks.omega_xx[i][j]).is_zero())
                throw ArithmeticError("standard frame: omega_L(a,a) mismatch");
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t a = 0; a < q; ++a) {
            Scalar expected(chart);
            for (std::size_t b = 0; b < q; ++b) expected += blocks.omega_xy[i][b] * blocks.pi[a][b];
            if (!(data.omega_l[i][p + a] - expected).is_zero())
                throw ArithmeticError("standard frame: omega_L(a,b) mismatch");
        }
    ScalarMatrix pwp = detail::mat_mul(
        blocks.pi, detail::mat_mul(blocks.omega_yy, blocks.pi, chart), chart);
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < q; ++b) {
            Scalar expected = -blocks.pi[a][b] - pwp[a][b];
            if (!(data.omega_l[p + a][p + b] - expected).is_zero())
                throw ArithmeticError("standard frame: omega_L(b,b) mismatch");
        }
    return {std::move(frame), std::move(data)};
}

/// Frame of Eq-style Dufour-Wade sections from the block data.
inline DiracFrame dw_frame(const DWBlocks& dw) {
    dw.validate();
    const ChartPtr& chart = dw.chart;
    std::size_t p = dw.p, q = dw.q, n = p + q;
    std::vector<GeneralizedSection> sections;
    for (std::size_t i = 0; i < p; ++i) {
        std::vector<Scalar> x(n, Scalar(chart)), al(n, Scalar(chart));
        x[i] = Scalar(chart, Rational(1));
        for (std::size_t b = 0; b < q; ++b) x[p + b] = dw.a[i][b];
        for (std::size_t j = 0; j < p; ++j) al[j] = dw.b[i][j];
        sections.emplace_back(chart, x, al);
    }
    for (std::size_t a = 0; a < q; ++a) {
        std::vector<Scalar> x(n, Scalar(chart)), al(n, Scalar(chart));
        for (std::size_t b = 0; b < q; ++b) x[p + b] = dw.pi[a][b];
        al[p + a] = Scalar(chart, Rational(1));
        for (std::size_t i = 0; i < p; ++i) al[i] = -dw.a[i][a];
        sections.emplace_back(chart, x, al);
    }
    return DiracFrame(chart, std::move(sections));
}

/// A = -w^xy Pi, B = w^xx + w^xy Pi (w^xy)^T, C = -w^xy; requires the
/// w^yy = 0 regime.
inline DWBlocks dw_from_standard(const SplitBlocks& blocks) {
    blocks.validate(/*require_yy_zero=*/true);
    const ChartPtr& chart = blocks.chart;
    DWBlocks dw;
    dw.chart = chart;
    dw.p = blocks.p;
    dw.q = blocks.q;
    dw.a.assign(blocks.p, std::vector<Scalar>(blocks.q, Scalar(chart)));
    dw.b = blocks.omega_xx;
    dw.pi = blocks.pi;
    dw.c.assign(blocks.p, std::vector<Scalar>(blocks.q, Scalar(chart)));
    for (std::size_t i = 0; i < blocks.p; ++i)
        for (std::size_t b = 0; b < blocks.q; ++b) {
            for (std::size_t a = 0; a < blocks.q; ++a)
                dw.a[i][b] -= blocks.omega_xy[i][a] * blocks.pi[a][b];
            dw.c[i][b] = -blocks.omega_xy[i][b];
        }
    for (std::size_t i = 0; i < blocks.p; ++i)
        for (std::size_t j = 0; j < blocks.p; ++j)
            for (std::size_t a = 0; a < blocks.q; ++a)
                for (std::size_t b = 0; b < blocks.q; ++b)
                    dw.b[i][j] += blocks.omega_xy[i][a] * blocks.pi[a][b] * blocks.omega_xy[j][b];
    return dw;
}

/// C = A Pi^{-1}, w^xy = -C, w^xx = B - C Pi C^T, w^yy = 0; requires Pi
/// invertible over the fraction field (dense-regular case).
inline SplitBlocks standard_from_dw(const DWBlocks& dw) {
    dw.validate();
    const ChartPtr& chart = dw.chart;
    ScalarMatrix pi_inv = detail::mat_inverse(dw.pi, chart);
    ScalarMatrix c = detail::mat_mul(dw.a, pi_inv, chart);
    SplitBlocks blocks;
    blocks.chart = chart;
    blocks.p = dw.p;
    blocks.q = dw.q;
    blocks.pi = dw.pi;
    blocks.omega_yy.assign(dw.q, std::vector<Scalar>(dw.q, Scalar(chart)));
    blocks.omega_xy.assign(dw.p, std::vector<Scalar>(dw.q, Scalar(chart)));
    for (std::size_t i = 0; i < dw.p; ++i)
        for (std::size_t a = 0; a < dw.q; ++a) blocks.omega_xy[i][a] = -c[i][a];
    blocks.omega_xx = dw.b;
    ScalarMatrix cp = detail::mat_mul(c, dw.pi, chart);
    for (std::size_t i = 0; i < dw.p; ++i)
        for (std::size_t j = 0; j < dw.p; ++j)
            for (std::size_t a = 0; a < dw.q; ++a)
                blocks.omega_xx[i][j] -= cp[i][a] * c[j][a];
    return blocks;
}

} // namespace dirac
