#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dirac/splitting.hpp"
#include "generators.hpp"

using namespace dirac;

namespace {

Scalar var(const ChartPtr& c, const std::string& name) {
    return Scalar::variable(c, *c->var_index(name));
}

ExteriorElement basis_form(const ChartPtr& c, std::initializer_list<std::size_t> idx) {
    std::uint32_t mask = 0;
    for (auto i : idx) mask |= 1u << i;
    return ExteriorElement::basis(c, Variance::Form, mask);
}

ExteriorElement basis_mv(const ChartPtr& c, std::initializer_list<std::size_t> idx) {
    std::uint32_t mask = 0;
    for (auto i : idx) mask |= 1u << i;
    return ExteriorElement::basis(c, Variance::Multivector, mask);
}

ChartPtr monopole_phase_space() {
    std::vector<std::string> names{"q1", "q2", "p1", "p2"};
    Polynomial def = Polynomial::variable(5, 0).pow(2) + Polynomial::variable(5, 1).pow(2);
    return std::make_shared<Chart>(names, std::vector<std::pair<std::string, Polynomial>>{{"r", def}});
}

ChartPtr radial_chart() {
    std::vector<std::string> names{"x", "y", "z"};
    Polynomial def = Polynomial::variable(4, 0).pow(2) + Polynomial::variable(4, 1).pow(2) +
                     Polynomial::variable(4, 2).pow(2);
    return std::make_shared<Chart>(names, std::vector<std::pair<std::string, Polynomial>>{{"r", def}});
}

ExteriorElement radial_monopole_form(const ChartPtr& c) {
    Scalar r = var(c, "r");
    Scalar x = var(c, "x"), y = var(c, "y"), z = var(c, "z");
    return (basis_form(c, {1, 2}) * x - basis_form(c, {0, 2}) * y + basis_form(c, {0, 1}) * z) *
           (Scalar(c, Rational(1)) / r.pow(3));
}

/// Partial inverse of the radial monopole form, normalization fixed by the
/// exact inversion identities: Pi_01 = -rz, Pi_02 = +ry, Pi_12 = -rx.
ExteriorElement radial_monopole_bivector(const ChartPtr& c) {
    Scalar r = var(c, "r");
    Scalar x = var(c, "x"), y = var(c, "y"), z = var(c, "z");
    return basis_mv(c, {0, 1}) * (-r * var(c, "z")) + basis_mv(c, {0, 2}) * (r * y) +
           basis_mv(c, {1, 2}) * (-r * x);
}

ExteriorElement canonical_symplectic(const ChartPtr& c) {
    return wedge(basis_form(c, {0}), basis_form(c, {2})) +
           wedge(basis_form(c, {1}), basis_form(c, {3}));
}

ExteriorElement monopole_b(const ChartPtr& c) {
    Scalar r = var(c, "r");
    return basis_form(c, {0, 1}) * (Scalar(c, Rational(1)) / (r * r));
}

ScalarMatrix zero_matrix(const ChartPtr& c, std::size_t r, std::size_t cols) {
    return ScalarMatrix(r, std::vector<Scalar>(cols, Scalar(c)));
}

/// Random antisymmetric Scalar matrix, with an option to zero a trailing
/// block so degenerate cases show up. Mostly constant entries plus a small
/// budget of variable ones: full fraction-field inverses of dense symbolic
/// 6x6 matrices are exact but far too slow for a test loop.
ScalarMatrix random_skew(std::mt19937& rng, const ChartPtr& c, std::size_t n, std::size_t live) {
    ScalarMatrix w = zero_matrix(c, n, n);
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<std::size_t> pick_var(0, c->dim() - 1);
    int variable_budget = 2;
    for (std::size_t i = 0; i < live; ++i)
        for (std::size_t j = i + 1; j < live; ++j) {
            w[i][j] = Scalar(c, Rational(coeff(rng)));
            if (variable_budget > 0 && coeff(rng) > 1) {
                w[i][j] += Scalar::variable(c, pick_var(rng));
                --variable_budget;
            }
            w[j][i] = -w[i][j];
        }
    return w;
}

ExteriorElement form_of_matrix(const ChartPtr& c, const ScalarMatrix& w) {
    ExteriorElement omega(c, Variance::Form);
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = i + 1; j < w.size(); ++j) omega.add_term((1u << i) | (1u << j), w[i][j]);
    return omega;
}

/// Blocks for the split twisted cotangent structure: x-block = momenta,
/// y-block = base coordinates carrying Pi = -(y1^2+y2^2) d/dy1 ^ d/dy2.
SplitBlocks monopole_blocks(const ChartPtr& c) {
    SplitBlocks blocks;
    blocks.chart = c;
    blocks.p = 2;
    blocks.q = 2;
    blocks.omega_xx = zero_matrix(c, 2, 2);
    blocks.omega_xy = zero_matrix(c, 2, 2);
    blocks.omega_xy[0][0] = Scalar(c, Rational(1));
    blocks.omega_xy[1][1] = Scalar(c, Rational(1));
    blocks.omega_yy = zero_matrix(c, 2, 2);
    blocks.pi = zero_matrix(c, 2, 2);
    Scalar y1 = Scalar::variable(c, 2), y2 = Scalar::variable(c, 3);
    blocks.pi[0][1] = -(y1 * y1 + y2 * y2);
    blocks.pi[1][0] = -blocks.pi[0][1];
    return blocks;
}

ChartPtr xy_chart() {
    return std::make_shared<Chart>(std::vector<std::string>{"x1", "x2", "y1", "y2"});
}

} // namespace

TEST_CASE("kernel of a 2-form") {
    SECTION("plane form on 3-space") {
        auto c = testgen::make_chart(3);
        auto basis = kernel_basis(basis_form(c, {0, 1}));
        REQUIRE(basis.size() == 1);
        REQUIRE(basis[0] == basis_mv(c, {2}));
    }
    SECTION("symplectic form has no kernel") {
        auto c = monopole_phase_space();
        REQUIRE(kernel_basis(canonical_symplectic(c)).empty());
    }
    SECTION("radial monopole kernel is the radial vector field") {
        auto c = radial_chart();
        auto basis = kernel_basis(radial_monopole_form(c));
        REQUIRE(basis.size() == 1);
        ExteriorElement radial = basis_mv(c, {0}) * var(c, "x") + basis_mv(c, {1}) * var(c, "y") +
                                 basis_mv(c, {2}) * var(c, "z");
        // proportional over the fraction field: components are coprime, so
        // the content-reduced row equals +-radial
        bool plus = basis[0] == radial;
        bool minus = basis[0] == radial * Scalar(c, Rational(-1));
        REQUIRE((plus || minus));
    }
}

TEST_CASE("partial inverses") {
    SECTION("symplectic form inverts fully") {
        auto c = monopole_phase_space();
        auto w0 = canonical_symplectic(c);
        auto pi = partial_inverse(w0);
        REQUIRE(pi == -(basis_mv(c, {0, 2}) + basis_mv(c, {1, 3})));
        REQUIRE(verify_partial_inverse(w0, pi).ok());
        // full inverse: W P = identity
        auto wp = detail::mat_mul(form_matrix(w0), bivector_matrix(pi), c);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                REQUIRE((wp[i][j] - Scalar(c, Rational(i == j ? 1 : 0))).is_zero());
    }
    SECTION("plane form on 3-space") {
        auto c = testgen::make_chart(3);
        auto omega = basis_form(c, {0, 1});
        auto pi = partial_inverse(omega);
        REQUIRE(pi == basis_mv(c, {0, 1}) * Scalar(c, Rational(-1)));
        REQUIRE(verify_partial_inverse(omega, pi).ok());
    }
    SECTION("singular magnetic term inverts to a vanishing bivector") {
        auto c = monopole_phase_space();
        auto b = monopole_b(c);
        auto pi = partial_inverse(b);
        Scalar r = var(c, "r");
        REQUIRE(pi == basis_mv(c, {0, 1}) * (-(r * r)));
        auto rep = verify_partial_inverse(b, pi);
        REQUIRE(rep.ok());
        Point origin(c, {Rational(0), Rational(0), Rational(0), Rational(0)});
        for (auto& [mask, coeff] : pi.terms()) REQUIRE(*smooth_at(coeff, origin).value == 0);
    }
    SECTION("scaled inverse fails the inversion identity") {
        auto c = monopole_phase_space();
        auto w0 = canonical_symplectic(c);
        auto rep = verify_partial_inverse(w0, partial_inverse(w0) * Scalar(c, Rational(2)));
        REQUIRE_FALSE(rep.omega_pi_omega);
        REQUIRE(rep.antisymmetric);
    }
    SECTION("randomized skew matrices: identities always hold") {
        std::mt19937 rng(70);
        for (std::size_t n = 2; n <= 6; ++n) {
            std::vector<std::string> names;
            for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
            auto c = std::make_shared<Chart>(names);
            std::uniform_int_distribution<std::size_t> live(0, n);
            for (int t = 0; t < 8; ++t) {
                auto omega = form_of_matrix(c, random_skew(rng, c, n, live(rng)));
                auto pi = partial_inverse(omega);
                auto rep = verify_partial_inverse(omega, pi);
                REQUIRE(rep.omega_pi_omega);
                REQUIRE(rep.pi_omega_pi);
                REQUIRE(rep.antisymmetric);
                // rank identity and projection property
                ScalarMatrix w = form_matrix(omega), p = bivector_matrix(pi);
                auto pw = detail::mat_mul(p, w, c);
                REQUIRE(rank(w) == rank(pw));
                REQUIRE(detail::mat_equal(detail::mat_mul(pw, pw, c), pw));
            }
        }
    }
}

TEST_CASE("kernel regularity at a point") {
    SECTION("magnetic term on phase space: momentum kernel, regular") {
        auto c = monopole_phase_space();
        Point origin(c, {Rational(0), Rational(0), Rational(0), Rational(0)});
        auto rep = kernel_regular_at(monopole_b(c), origin);
        REQUIRE(rep.status == KernelRegularity::RegularWithBasis);
        REQUIRE(rep.generic_rank == 2);
        REQUIRE(rep.basis.size() == 2);
    }
    SECTION("radial monopole: kernel row vanishes at the origin") {
        auto c = radial_chart();
        Point origin(c, {Rational(0), Rational(0), Rational(0)});
        auto rep = kernel_regular_at(radial_monopole_form(c), origin);
        REQUIRE(rep.status == KernelRegularity::Irregular);
    }
    SECTION("symplectic form: zero kernel, trivially regular") {
        auto c = monopole_phase_space();
        Point m(c, {Rational(1), Rational(2), Rational(3), Rational(4)});
        auto rep = kernel_regular_at(canonical_symplectic(c), m);
        REQUIRE(rep.status == KernelRegularity::RegularWithBasis);
        REQUIRE(rep.basis.empty());
    }
    SECTION("radical kernel entry abstains at the branch point") {
        std::vector<std::string> names{"x", "y", "z"};
        Polynomial def = Polynomial::variable(4, 0).pow(2) + Polynomial::variable(4, 1).pow(2);
        auto c = std::make_shared<Chart>(
            names, std::vector<std::pair<std::string, Polynomial>>{{"rho", def}});
        auto omega = basis_form(c, {0, 2}) + basis_form(c, {1, 2}) * var(c, "rho");
        Point origin(c, {Rational(0), Rational(0), Rational(0)});
        REQUIRE(kernel_regular_at(omega, origin).status == KernelRegularity::Undecided);
    }
}

TEST_CASE("graph via partial inverse") {
    SECTION("magnetic term: kernel plus restricted bivector graph") {
        auto c = monopole_phase_space();
        auto b = monopole_b(c);
        auto frame = graph_via_partial_inverse(b, partial_inverse(b));
        REQUIRE(span_equal(frame, graph_of_form(b)));
    }
    SECTION("randomized closed forms") {
        std::mt19937 rng(71);
        for (std::size_t dim = 2; dim <= 4; ++dim) {
            auto c = testgen::make_chart(dim);
            for (int t = 0; t < 6; ++t) {
                ExteriorElement a(c, Variance::Form);
                for (std::size_t i = 0; i < dim; ++i)
                    a.add_term(1u << i, Scalar::from_polynomial(c, testgen::random_poly(rng, c)));
                auto omega = ext_d(a);
                if (omega.is_zero()) continue;
                auto frame = graph_via_partial_inverse(omega, partial_inverse(omega));
                REQUIRE(span_equal(frame, graph_of_form(omega)));
            }
        }
    }
}

TEST_CASE("splitting criterion") {
    SECTION("twisted cotangent splitting is certified") {
        auto c = monopole_phase_space();
        Point origin(c, {Rational(0), Rational(0), Rational(0), Rational(0)});
        auto b = monopole_b(c);
        auto rep = verify_splitting(canonical_symplectic(c), b, partial_inverse(b), origin);
        REQUIRE(rep.all_pass());
        REQUIRE(rep.verdict.tag == VerdictTag::CertifiedRemovable);
    }
    SECTION("radial monopole has no splitting with zero regular part") {
        auto c = radial_chart();
        Point origin(c, {Rational(0), Rational(0), Rational(0)});
        auto omega = radial_monopole_form(c);
        auto rep = verify_splitting(ExteriorElement(c, Variance::Form), omega,
                                    radial_monopole_bivector(c), origin);
        REQUIRE_FALSE(rep.kernel_regular);
        REQUIRE(rep.verdict.tag == VerdictTag::Inconclusive);
        REQUIRE(rep.verdict.detail.find("kernel-not-regular") != std::string::npos);
        // the bivector itself is a genuine partial inverse
        REQUIRE(rep.inverse_ok);
    }
    SECTION("trivial splitting of a symplectic form") {
        auto c = monopole_phase_space();
        Point m(c, {Rational(1), Rational(0), Rational(0), Rational(0)});
        auto rep = verify_splitting(canonical_symplectic(c), ExteriorElement(c, Variance::Form),
                                    ExteriorElement(c, Variance::Multivector), m);
        REQUIRE(rep.all_pass());
        REQUIRE(rep.verdict.tag == VerdictTag::CertifiedRemovable);
    }
    SECTION("perturbed bivector fails the leaf-vanishing clause") {
        auto c = monopole_phase_space();
        Point origin(c, {Rational(0), Rational(0), Rational(0), Rational(0)});
        auto b = monopole_b(c);
        auto pi = partial_inverse(b) + basis_mv(c, {0, 1});
        auto rep = verify_splitting(canonical_symplectic(c), b, pi, origin);
        REQUIRE_FALSE(rep.pi_vanishes);
        REQUIRE(rep.verdict.tag != VerdictTag::CertifiedRemovable);
    }
    SECTION("radical singular coefficient stays inconclusive") {
        auto c = monopole_phase_space();
        Point origin(c, {Rational(0), Rational(0), Rational(0), Rational(0)});
        auto b = basis_form(c, {0, 1}) * var(c, "r");
        auto rep = verify_splitting(canonical_symplectic(c), b, partial_inverse(b), origin);
        REQUIRE(rep.verdict.tag == VerdictTag::Inconclusive);
    }
}

TEST_CASE("standard frame") {
    SECTION("zero blocks give the product frame TS x T*N") {
        auto c = xy_chart();
        SplitBlocks blocks;
        blocks.chart = c;
        blocks.p = 2;
        blocks.q = 2;
        blocks.omega_xx = zero_matrix(c, 2, 2);
        blocks.omega_xy = zero_matrix(c, 2, 2);
        blocks.omega_yy = zero_matrix(c, 2, 2);
        blocks.pi = zero_matrix(c, 2, 2);
        auto res = standard_frame(blocks);
        for (std::size_t i = 0; i < 2; ++i) {
            REQUIRE(res.frame.sections()[i].vector_part()[i] == Scalar(c, Rational(1)));
            REQUIRE(res.frame.sections()[2 + i].form_part()[2 + i] == Scalar(c, Rational(1)));
        }
        for (auto& row : res.data.omega_l)
            for (auto& entry : row) REQUIRE(entry.is_zero());
    }
    SECTION("linear transverse bivector: bracket and 2-form tables") {
        auto c = std::make_shared<Chart>(std::vector<std::string>{"y1", "y2"});
        SplitBlocks blocks;
        blocks.chart = c;
        blocks.p = 0;
        blocks.q = 2;
        blocks.omega_xx = zero_matrix(c, 0, 0);
        blocks.omega_xy = zero_matrix(c, 0, 2);
        blocks.omega_yy = zero_matrix(c, 2, 2);
        blocks.pi = zero_matrix(c, 2, 2);
        blocks.pi[0][1] = Scalar::variable(c, 0);
        blocks.pi[1][0] = -blocks.pi[0][1];
        auto res = standard_frame(blocks);
        // [b_1, b_2] = (dPi_12/dy^1) b_1 = b_1
        REQUIRE(res.data.structure[0][1][0] == Scalar(c, Rational(1)));
        REQUIRE(res.data.structure[0][1][1].is_zero());
        // omega_L(b_1, b_2) = -Pi_12: the sign follows from
        // omega_L = -(i_X beta - i_Y alpha)/2 applied to b_a = Pi(dy^a) + dy^a
        REQUIRE(res.data.omega_l[0][1] == -blocks.pi[0][1]);
    }
    SECTION("mixed block with y-dependent coupling passes the Dirac checks") {
        auto c = std::make_shared<Chart>(std::vector<std::string>{"x", "y"});
        SplitBlocks blocks;
        blocks.chart = c;
        blocks.p = 1;
        blocks.q = 1;
        blocks.omega_xx = zero_matrix(c, 1, 1);
        blocks.omega_xy = zero_matrix(c, 1, 1);
        blocks.omega_xy[0][0] = Scalar::variable(c, 1);
        blocks.omega_yy = zero_matrix(c, 1, 1);
        blocks.pi = zero_matrix(c, 1, 1);
        auto res = standard_frame(blocks);
        REQUIRE(verify_dirac(res.frame).ok());
        REQUIRE(res.data.omega_l[0][1].is_zero()); // Pi = 0 kills the coupling
    }
    SECTION("split twisted cotangent blocks") {
        auto c = xy_chart();
        auto blocks = monopole_blocks(c);
        auto res = standard_frame(blocks);
        REQUIRE(verify_dirac(res.frame).ok());
        // omega_L(b_1, b_2) = -Pi_12 = y1^2 + y2^2
        Scalar y1 = Scalar::variable(c, 2), y2 = Scalar::variable(c, 3);
        REQUIRE(res.data.omega_l[2][3] == y1 * y1 + y2 * y2);
        // frame spans the graph of the assembled structure away from y = 0:
        // omega restricted to the regular set has the bivector as partial
        // inverse of its yy-part only when assembled; just check closure here
        REQUIRE(ext_d(blocks.assemble_form()).is_zero());
    }
}

TEST_CASE("Dufour-Wade conversions") {
    SECTION("zero blocks convert to zero") {
        auto c = xy_chart();
        SplitBlocks blocks;
        blocks.chart = c;
        blocks.p = 2;
        blocks.q = 2;
        blocks.omega_xx = zero_matrix(c, 2, 2);
        blocks.omega_xy = zero_matrix(c, 2, 2);
        blocks.omega_yy = zero_matrix(c, 2, 2);
        blocks.pi = zero_matrix(c, 2, 2);
        auto dw = dw_from_standard(blocks);
        for (auto& row : dw.a)
            for (auto& entry : row) REQUIRE(entry.is_zero());
        for (auto& row : dw.b)
            for (auto& entry : row) REQUIRE(entry.is_zero());
    }
    SECTION("twisted cotangent blocks: frames span the same bundle") {
        auto c = xy_chart();
        auto blocks = monopole_blocks(c);
        auto dw = dw_from_standard(blocks);
        REQUIRE(span_equal(dw_frame(dw), standard_sections(blocks)));
        // round trip recovers the blocks exactly (Pi invertible over the
        // fraction field)
        auto back = standard_from_dw(dw);
        REQUIRE(detail::mat_equal(back.omega_xx, blocks.omega_xx));
        REQUIRE(detail::mat_equal(back.omega_xy, blocks.omega_xy));
        REQUIRE(detail::mat_equal(back.pi, blocks.pi));
    }
    SECTION("A = 0 gives C = 0 and omega_xx = B") {
        auto c = xy_chart();
        DWBlocks dw;
        dw.chart = c;
        dw.p = 2;
        dw.q = 2;
        dw.a = zero_matrix(c, 2, 2);
        dw.b = zero_matrix(c, 2, 2);
        dw.b[0][1] = Scalar(c, Rational(3));
        dw.b[1][0] = Scalar(c, Rational(-3));
        dw.pi = zero_matrix(c, 2, 2);
        dw.pi[0][1] = Scalar(c, Rational(1));
        dw.pi[1][0] = Scalar(c, Rational(-1));
        dw.c = zero_matrix(c, 2, 2);
        auto blocks = standard_from_dw(dw);
        REQUIRE(detail::mat_equal(blocks.omega_xx, dw.b));
        for (auto& row : blocks.omega_xy)
            for (auto& entry : row) REQUIRE(entry.is_zero());
    }
    SECTION("random invertible-Pi data round trips both ways") {
        std::mt19937 rng(72);
        auto c = xy_chart();
        Scalar y1 = Scalar::variable(c, 2), y2 = Scalar::variable(c, 3);
        auto random_y_poly = [&](std::mt19937& r) {
            std::uniform_int_distribution<int> coeff(-3, 3);
            return Scalar(c, Rational(coeff(r))) + y1 * Scalar(c, Rational(coeff(r))) +
                   y2 * y2 * Scalar(c, Rational(coeff(r)));
        };
        for (int t = 0; t < 15; ++t) {
            SplitBlocks blocks;
            blocks.chart = c;
            blocks.p = 2;
            blocks.q = 2;
            blocks.omega_xx = zero_matrix(c, 2, 2);
            blocks.omega_xx[0][1] = testgen::random_scalar(rng, c);
            blocks.omega_xx[1][0] = -blocks.omega_xx[0][1];
            blocks.omega_xy = zero_matrix(c, 2, 2);
            for (auto& row : blocks.omega_xy)
                for (auto& entry : row) entry = testgen::random_scalar(rng, c);
            blocks.omega_yy = zero_matrix(c, 2, 2);
            blocks.pi = zero_matrix(c, 2, 2);
            blocks.pi[0][1] = random_y_poly(rng);
            if (blocks.pi[0][1].is_zero()) continue;
            blocks.pi[1][0] = -blocks.pi[0][1];
            auto dw = dw_from_standard(blocks);
            auto back = standard_from_dw(dw);
            REQUIRE(detail::mat_equal(back.omega_xx, blocks.omega_xx));
            REQUIRE(detail::mat_equal(back.omega_xy, blocks.omega_xy));
            auto dw2 = dw_from_standard(back);
            REQUIRE(detail::mat_equal(dw2.a, dw.a));
            REQUIRE(detail::mat_equal(dw2.b, dw.b));
        }
    }
    SECTION("mixed-section bracket vanishes exactly when the form is closed") {
        std::mt19937 rng(73);
        auto c = xy_chart();
        Scalar y1 = Scalar::variable(c, 2);
        int closed_seen = 0, nonclosed_seen = 0;
        for (int t = 0; t < 12; ++t) {
            SplitBlocks blocks;
            blocks.chart = c;
            blocks.p = 2;
            blocks.q = 2;
            blocks.omega_xx = zero_matrix(c, 2, 2);
            blocks.omega_xy = zero_matrix(c, 2, 2);
            std::uniform_int_distribution<int> coeff(-2, 2);
            if (t % 2) {
                // generic y-dependent entries: almost surely not closed
                for (auto& row : blocks.omega_xy)
                    for (auto& entry : row)
                        entry = Scalar(c, Rational(coeff(rng))) + y1 * Scalar(c, Rational(coeff(rng)));
                blocks.omega_xy[0][0] += Scalar::variable(c, 0) * Scalar::variable(c, 3);
            } else {
                // gradient rows: omega_xy[i][a] = d g_i / d y^a makes
                // omega = -d(g_i dx^i), which is closed
                for (std::size_t i = 0; i < 2; ++i) {
                    Scalar y2 = Scalar::variable(c, 3);
                    Scalar g = y1 * y1 * Scalar(c, Rational(coeff(rng))) +
                               y1 * y2 * Scalar(c, Rational(coeff(rng))) +
                               y2 * Scalar(c, Rational(coeff(rng)));
                    for (std::size_t a = 0; a < 2; ++a) blocks.omega_xy[i][a] = g.derive(2 + a);
                }
            }
            blocks.omega_yy = zero_matrix(c, 2, 2);
            blocks.pi = zero_matrix(c, 2, 2);
            blocks.pi[0][1] = y1;
            blocks.pi[1][0] = -y1;
            auto frame = standard_sections(blocks);
            bool brackets_vanish = true;
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t a = 2; a < 4; ++a) {
                    auto br = dorfman(frame.sections()[i], frame.sections()[a]);
                    for (auto& entry : br.vector_part()) brackets_vanish &= entry.is_zero();
                    for (auto& entry : br.form_part()) brackets_vanish &= entry.is_zero();
                }
            bool closed = ext_d(blocks.assemble_form()).is_zero();
            REQUIRE(brackets_vanish == closed);
            (closed ? closed_seen : nonclosed_seen)++;
        }
        REQUIRE(closed_seen > 0);
        REQUIRE(nonclosed_seen > 0);
    }
}
