#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dirac/frame.hpp"

namespace dirac {

/// Raised when an operation of the exact tier meets radical coefficients;
/// callers fall back to the numeric probe.
struct ExactTierInapplicable : ArithmeticError {
    using ArithmeticError::ArithmeticError;
};

/// Pure spinor of the graph of a 2-form: e^{-omega} = sum (-1)^k omega^k/k!.
inline ExteriorElement spinor_of_form(const ExteriorElement& omega) {
    if (omega.variance() != Variance::Form || !omega.is_homogeneous(2))
        throw ArithmeticError("spinor_of_form expects a homogeneous 2-form");
    const ChartPtr& chart = omega.chart();
    ExteriorElement result = ExteriorElement::scalar(chart, Variance::Form, Scalar(chart, Rational(1)));
    ExteriorElement power = result;
    Rational factorial(1);
    for (std::uint32_t k = 1; 2 * k <= chart->dim(); ++k) {
        power = wedge(power, omega);
        if (power.is_zero()) break;
        factorial *= Rational(k);
        Rational c = Rational((k % 2) ? -1 : 1) / factorial;
        result += power * Scalar(chart, c);
    }
    return result;
}

/// Pure spinor of the graph of a bivector: e^{-Pi} . vol.
inline ExteriorElement spinor_of_bivector(const ExteriorElement& pi, const ExteriorElement& vol) {
    if (pi.variance() != Variance::Multivector || !pi.is_homogeneous(2))
        throw ArithmeticError("spinor_of_bivector expects a homogeneous bivector");
    require_same_chart(pi.chart(), vol.chart());
    const ChartPtr& chart = pi.chart();
    std::size_t n = chart->dim();
    if (vol.variance() != Variance::Form || !vol.is_homogeneous(int(n)))
        throw ArithmeticError("spinor_of_bivector expects a top-degree volume form");
    Scalar volc = vol.coefficient((1u << n) - 1);
    if (volc.is_zero() || !volc.is_polynomial() || !volc.num().is_constant())
        throw ArithmeticError("volume form must have a constant nonzero coefficient");

    ExteriorElement result = vol;
    ExteriorElement power = ExteriorElement::scalar(chart, Variance::Multivector, Scalar(chart, Rational(1)));
    Rational factorial(1);
    for (std::uint32_t k = 1; 2 * k <= n; ++k) {
        power = wedge(power, pi);
        if (power.is_zero()) break;
        factorial *= Rational(k);
        Rational c = Rational((k % 2) ? -1 : 1) / factorial;
        result += contract(power, vol) * Scalar(chart, c);
    }
    return result;
}

/// (L/G)-normalized spinor with coprime polynomial coefficients:
/// reconstructing (G/L) psi gives back the input.
struct SpinorNormalization {
    Polynomial denominator_lcm;   // L
    Polynomial numerator_content; // G
    ExteriorElement normalized;   // psi = (L/G) phi, polynomial coefficients
};

inline SpinorNormalization normalize_spinor(const ExteriorElement& phi) {
    const ChartPtr& chart = phi.chart();
    if (phi.is_zero()) throw ArithmeticError("cannot normalize the zero spinor");
    for (auto& [mask, c] : phi.terms())
        if (c.has_radical())
            throw ExactTierInapplicable("spinor has radical coefficients; exact tier inapplicable");

    Polynomial l = Polynomial::constant(chart->nvars(), 1);
    for (auto& [mask, c] : phi.terms()) l = poly_lcm(l, c.den());
    Scalar lift = Scalar::from_polynomial(chart, l);

    Polynomial g(chart->nvars());
    std::vector<std::pair<std::uint32_t, Scalar>> scaled;
    for (auto& [mask, c] : phi.terms()) {
        Scalar t = c * lift;
        if (!t.is_polynomial())
            throw ArithmeticError("spinor normalization: lcm failed to clear denominators");
        g = g.is_zero() ? t.num() : poly_gcd(g, t.num());
        scaled.emplace_back(mask, t);
    }
    ExteriorElement psi(chart, phi.variance());
    if (g.is_constant()) {
        g = Polynomial::constant(chart->nvars(), 1);
        for (auto& [mask, t] : scaled) psi.add_term(mask, t);
    } else {
        Scalar gs = Scalar::from_polynomial(chart, g);
        for (auto& [mask, t] : scaled) psi.add_term(mask, t / gs);
    }
    return {l, g, psi};
}

enum class VerdictTag {
    CertifiedRemovable,
    CertifiedNotRemovable,
    EvidenceRemovable,
    EvidenceNotRemovable,
    Inconclusive
};

enum class Provenance { Exact, Numeric };

/// Failure clauses for singularities of the regularizing function:
/// NotSmooth (no smooth extension), NonzeroLimit (extends with f(m) != 0),
/// Bounded (the singular form stays bounded).
enum class Obstruction { NotSmooth, NonzeroLimit, Bounded };

struct Verdict {
    VerdictTag tag = VerdictTag::Inconclusive;
    Provenance provenance = Provenance::Exact;
    std::string detail;
    // exact certificate: psi(m) coefficients (CertifiedRemovable)
    std::map<std::uint32_t, Rational, GradedMaskOrder> exact_spinor_at_m;
    // numeric evidence: common probe limit, per coefficient mask
    std::map<std::uint32_t, double, GradedMaskOrder> probe_limit;
    std::vector<Obstruction> fired;
    std::optional<std::pair<std::size_t, std::size_t>> witness_directions;
    double witness_distance = 0.0;

    bool certified() const {
        return tag == VerdictTag::CertifiedRemovable || tag == VerdictTag::CertifiedNotRemovable;
    }
};

inline const char* verdict_name(VerdictTag t) {
    switch (t) {
        case VerdictTag::CertifiedRemovable: return "CertifiedRemovable";
        case VerdictTag::CertifiedNotRemovable: return "CertifiedNotRemovable";
        case VerdictTag::EvidenceRemovable: return "EvidenceRemovable";
        case VerdictTag::EvidenceNotRemovable: return "EvidenceNotRemovable";
        case VerdictTag::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

inline const char* obstruction_name(Obstruction o) {
    switch (o) {
        case Obstruction::NotSmooth: return "regularizing-function-not-smooth";
        case Obstruction::NonzeroLimit: return "regularizing-function-nonzero-limit";
        case Obstruction::Bounded: return "bounded-singularity";
    }
    return "";
}

struct ProbeConfig {
    std::size_t directions = 26;
    double t0 = 0.5;
    std::size_t depth = 20; // radii t0 * 2^{-k}, k = 0..depth
    double eps_agree = 1e-4;
    double eps_conv = 1e-6;

    void validate() const {
        if (directions < 2) throw ArithmeticError("probe needs at least 2 directions");
        if (depth < 4) throw ArithmeticError("probe needs at least 4 radii");
        if (t0 <= 0 || eps_agree <= 0 || eps_conv <= 0)
            throw ArithmeticError("probe radii and tolerances must be positive");
    }
};

/// Nonzero directions from {-1,0,1}^n normalized, lowest support first,
/// capped at cfg.directions; deterministic order.
inline std::vector<std::vector<double>> probe_directions(std::size_t n, const ProbeConfig& cfg) {
    std::vector<std::vector<int>> raw;
    std::vector<int> cur(n, -1);
    while (true) {
        bool nonzero = false;
        for (int v : cur) nonzero |= v != 0;
        if (nonzero) raw.push_back(cur);
        std::size_t i = 0;
        while (i < n && cur[i] == 1) cur[i++] = -1;
        if (i == n) break;
        ++cur[i];
    }
    std::stable_sort(raw.begin(), raw.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
        int sa = 0, sb = 0;
        for (int v : a) sa += v != 0;
        for (int v : b) sb += v != 0;
        return sa < sb;
    });
    if (raw.size() > cfg.directions) raw.resize(cfg.directions);
    std::vector<std::vector<double>> out;
    for (auto& r : raw) {
        double norm = 0;
        for (int v : r) norm += v * v;
        norm = std::sqrt(norm);
        std::vector<double> d;
        for (int v : r) d.push_back(v / norm);
        out.push_back(std::move(d));
    }
    return out;
}

/// Exact removability decision from a spinor: normalize and evaluate at m.
/// A nonzero coefficient of psi(m) certifies that the annihilator of psi is
/// a smooth subbundle through m; all-zero is inconclusive (coprime
/// coefficients can still share an isolated zero).
inline Verdict exact_removability(const ExteriorElement& phi, const Point& m) {
    require_same_chart(phi.chart(), m.chart());
    auto norm = normalize_spinor(phi);
    // psi is radical-free, so only the coordinate values matter
    std::vector<Rational> vals = m.values();
    vals.resize(phi.chart()->nvars(), Rational(0));
    Verdict v;
    v.provenance = Provenance::Exact;
    bool nonzero = false;
    for (auto& [mask, c] : norm.normalized.terms()) {
        Rational value = c.num().eval<Rational>(vals) / c.den().eval<Rational>(vals);
        v.exact_spinor_at_m[mask] = value;
        nonzero |= value != 0;
    }
    if (nonzero) {
        v.tag = VerdictTag::CertifiedRemovable;
        v.detail = "normalized spinor nonzero at the point; its annihilator is a smooth subbundle";
    } else {
        v.tag = VerdictTag::Inconclusive;
        v.detail = "normalized spinor vanishes at the point; escalate to the numeric probe";
    }
    return v;
}

/// f = ||e^{-omega}||^{-1} under the Euclidean coefficient norm. Exact when
/// one extra quadratic radical captures the norm, always evaluable
/// numerically.
struct RegularizingFunction {
    Scalar norm_sq;                // on the original chart
    ChartPtr extended_chart;       // original chart plus the norm radical, when exact
    std::optional<Scalar> exact;   // f on extended_chart

    double eval(const std::vector<double>& coords) const {
        double n = norm_sq.eval_double(numeric_var_values(*norm_sq.chart(), coords));
        return 1.0 / std::sqrt(n);
    }
};

inline RegularizingFunction regularizing_function(const ExteriorElement& omega) {
    RegularizingFunction f;
    f.norm_sq = coeff_norm_sq(spinor_of_form(omega));
    if (!f.norm_sq.has_radical()) {
        // 1/sqrt(N/D) = s/N with s^2 = N*D
        const ChartPtr& chart = omega.chart();
        Polynomial def = f.norm_sq.num() * f.norm_sq.den();
        std::vector<std::pair<std::string, Polynomial>> radicals;
        std::size_t total = chart->nvars() + 1;
        auto widen = [&](const Polynomial& p) {
            Polynomial out(total);
            for (auto& [mono, c] : p.terms()) {
                Monomial mm(total);
                for (std::size_t v = 0; v < mono.exps.size(); ++v) mm.exps[v] = mono.exps[v];
                out.add_term(mm, c);
            }
            return out;
        };
        for (auto& rad : chart->radicals()) radicals.emplace_back(rad.symbol, widen(rad.defining));
        std::string sym = "normrad";
        while (chart->var_index(sym)) sym += "_";
        radicals.emplace_back(sym, widen(def));
        f.extended_chart = std::make_shared<Chart>(chart->coords(), radicals);
        std::vector<std::size_t> var_map;
        for (std::size_t v = 0; v < chart->nvars(); ++v) var_map.push_back(v);
        Scalar s = Scalar::variable(f.extended_chart, *f.extended_chart->var_index(sym));
        Scalar n = Scalar::from_polynomial(chart, f.norm_sq.num()).embed(f.extended_chart, var_map);
        f.exact = s / n;
    }
    return f;
}

namespace detail {

/// Samples of a numeric function along m + t_k v; failed evaluations are
/// skipped. Empty result means the whole ray is unevaluable.
template <typename F>
std::vector<std::pair<double, double>> sample_ray(const F& fn, const std::vector<double>& base,
                                                  const std::vector<double>& dir,
                                                  const ProbeConfig& cfg) {
    std::vector<std::pair<double, double>> out;
    double t = cfg.t0;
    for (std::size_t k = 0; k <= cfg.depth; ++k, t /= 2) {
        std::vector<double> coords = base;
        for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += t * dir[i];
        try {
            out.emplace_back(t, fn(coords));
        } catch (const std::exception&) {
            // pole or undefined radical at this sample
        }
    }
    return out;
}

inline std::vector<double> base_coords(const Point& m) {
    std::vector<double> out;
    for (auto& v : m.values()) out.push_back(v.get_d());
    return out;
}

} // namespace detail

/// Samples the regularizing function f and the coefficient norm of omega
/// along probe rays toward m, firing the three failure clauses on numeric
/// evidence. Fires every clause it detects; never certifies.
inline Verdict obstruction_check(const ExteriorElement& omega, const Point& m,
                                 const ProbeConfig& cfg = {}) {
    require_same_chart(omega.chart(), m.chart());
    cfg.validate();
    const ChartPtr& chart = omega.chart();
    auto f = regularizing_function(omega);
    auto omega_norm = [&](const std::vector<double>& coords) {
        auto vars = numeric_var_values(*chart, coords);
        double s = 0;
        for (auto& [mask, c] : omega.terms()) {
            double v = c.eval_double(vars);
            s += v * v;
        }
        return std::sqrt(s);
    };
    auto f_eval = [&](const std::vector<double>& coords) { return f.eval(coords); };

    auto base = detail::base_coords(m);
    auto dirs = probe_directions(chart->dim(), cfg);

    Verdict v;
    v.provenance = Provenance::Numeric;
    bool f_converges_everywhere = true;
    bool f_has_data = false;
    double f_limit_min = std::numeric_limits<double>::infinity();
    double outer_ceiling = 0;
    bool bounded = true;
    bool bounded_has_data = false;

    for (auto& dir : dirs) {
        auto fs = detail::sample_ray(f_eval, base, dir, cfg);
        if (fs.size() >= cfg.depth / 2) {
            f_has_data = true;
            double last = fs[fs.size() - 1].second;
            double prev = fs[fs.size() - 2].second;
            if (std::abs(last - prev) > cfg.eps_conv * (1 + std::abs(last)))
                f_converges_everywhere = false;
            else
                f_limit_min = std::min(f_limit_min, std::abs(last));
        }
        auto ns = detail::sample_ray(omega_norm, base, dir, cfg);
        if (ns.size() >= cfg.depth / 2) {
            bounded_has_data = true;
            outer_ceiling = std::max(outer_ceiling, ns.front().second);
        }
    }
    double ceiling = 2 * outer_ceiling;
    if (bounded_has_data) {
        for (auto& dir : dirs) {
            auto ns = detail::sample_ray(omega_norm, base, dir, cfg);
            for (auto& [t, val] : ns)
                if (val > ceiling + 1e-12) bounded = false;
        }
    } else {
        bounded = false;
    }

    if (f_has_data && !f_converges_everywhere) v.fired.push_back(Obstruction::NotSmooth);
    if (f_has_data && f_converges_everywhere && f_limit_min > 10 * cfg.eps_agree)
        v.fired.push_back(Obstruction::NonzeroLimit);
    if (bounded) v.fired.push_back(Obstruction::Bounded);

    if (v.fired.empty()) {
        v.tag = VerdictTag::Inconclusive;
        v.detail = "no obstruction fired";
    } else {
        v.tag = VerdictTag::EvidenceNotRemovable;
        v.detail = "obstruction clauses fired:";
        for (auto o : v.fired) v.detail += std::string(" ") + obstruction_name(o);
    }
    return v;
}

/// Projective limit test of the spinor line along probe rays: per-direction
/// Cauchy convergence of the sign-fixed unit coefficient vector, then
/// cross-direction agreement.
inline Verdict directional_probe(const ExteriorElement& phi, const Point& m,
                                 const ProbeConfig& cfg = {}) {
    require_same_chart(phi.chart(), m.chart());
    cfg.validate();
    const ChartPtr& chart = phi.chart();
    std::vector<std::uint32_t> masks;
    for (auto& [mask, c] : phi.terms()) masks.push_back(mask);

    auto unit_spinor = [&](const std::vector<double>& coords) {
        auto vars = numeric_var_values(*chart, coords);
        std::vector<double> u;
        double norm = 0;
        for (auto& [mask, c] : phi.terms()) {
            double v = c.eval_double(vars);
            u.push_back(v);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm < 1e-300) throw ArithmeticError("spinor numerically zero at sample");
        double sign = 1;
        for (double v : u)
            if (std::abs(v) / norm > 1e-9) {
                sign = v > 0 ? 1 : -1;
                break;
            }
        for (double& v : u) v *= sign / norm;
        return u;
    };

    auto base = detail::base_coords(m);
    auto dirs = probe_directions(chart->dim(), cfg);
    auto dist = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(s);
    };

    Verdict v;
    v.provenance = Provenance::Numeric;
    std::vector<std::vector<double>> limits;
    std::vector<std::size_t> limit_dirs;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        std::vector<std::vector<double>> samples;
        double t = cfg.t0;
        for (std::size_t k = 0; k <= cfg.depth; ++k, t /= 2) {
            std::vector<double> coords = base;
            for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += t * dirs[d][i];
            try {
                samples.push_back(unit_spinor(coords));
            } catch (const std::exception&) {
            }
        }
        if (samples.size() < cfg.depth / 2) continue; // ray unevaluable, drop it
        double tail = dist(samples[samples.size() - 1], samples[samples.size() - 2]);
        if (tail > cfg.eps_conv) {
            v.tag = VerdictTag::EvidenceNotRemovable;
            v.fired.push_back(Obstruction::NotSmooth);
            v.detail = "spinor line fails to converge along a probe direction";
            v.witness_directions = {d, d};
            v.witness_distance = tail;
            return v;
        }
        limits.push_back(samples.back());
        limit_dirs.push_back(d);
    }
    if (limits.size() < 2) {
        v.tag = VerdictTag::Inconclusive;
        v.detail = "fewer than two probe directions were evaluable";
        return v;
    }
    double worst = 0;
    std::pair<std::size_t, std::size_t> worst_pair{0, 0};
    for (std::size_t i = 0; i < limits.size(); ++i)
        for (std::size_t j = i + 1; j < limits.size(); ++j) {
            double dij = dist(limits[i], limits[j]);
            if (dij > worst) {
                worst = dij;
                worst_pair = {limit_dirs[i], limit_dirs[j]};
            }
        }
    if (worst > cfg.eps_agree) {
        v.tag = VerdictTag::EvidenceNotRemovable;
        v.detail = "spinor line limits disagree across directions";
        v.witness_directions = worst_pair;
        v.witness_distance = worst;
        return v;
    }
    v.tag = VerdictTag::EvidenceRemovable;
    v.detail = "spinor line converges to a common limit along all probe directions";
    v.witness_distance = worst;
    for (std::size_t i = 0; i < masks.size(); ++i) v.probe_limit[masks[i]] = limits.front()[i];
    return v;
}

/// Full decision procedure for the graph of a 2-form: exact certificate
/// first, then the obstruction battery, then the directional probe. An
/// exact certificate is never downgraded.
inline Verdict removability(const ExteriorElement& omega, const Point& m,
                            const ProbeConfig& cfg = {}) {
    ExteriorElement phi = spinor_of_form(omega);
    try {
        Verdict exact = exact_removability(phi, m);
        if (exact.tag == VerdictTag::CertifiedRemovable) return exact;
    } catch (const ExactTierInapplicable&) {
    }
    Verdict obs = obstruction_check(omega, m, cfg);
    if (obs.tag == VerdictTag::EvidenceNotRemovable) return obs;
    return directional_probe(phi, m, cfg);
}

/// Bivector variant: exact tier plus directional probe (the obstruction
/// battery is specific to 2-form norms).
inline Verdict removability_bivector(const ExteriorElement& pi, const ExteriorElement& vol,
                                     const Point& m, const ProbeConfig& cfg = {}) {
    ExteriorElement phi = spinor_of_bivector(pi, vol);
    try {
        Verdict exact = exact_removability(phi, m);
        if (exact.tag == VerdictTag::CertifiedRemovable) return exact;
    } catch (const ExactTierInapplicable&) {
    }
    return directional_probe(phi, m, cfg);
}

struct ExtendFrameResult {
    std::optional<DiracFrame> frame;
    ExteriorElement spinor; // normalized psi used for the kernel computation
    std::string failure;    // empty on success
};

/// Smooth frame of the closure of Graph(omega) across the singular set:
/// kernel of the Clifford action v -> v.psi over the 2n section slots,
/// content-reduced, checked smooth and full-rank at m.
inline ExtendFrameResult extend_graph_frame(const ExteriorElement& omega, const Point& m) {
    require_same_chart(omega.chart(), m.chart());
    const ChartPtr& chart = omega.chart();
    std::size_t n = chart->dim();
    ExtendFrameResult res;
    auto norm = normalize_spinor(spinor_of_form(omega));
    res.spinor = norm.normalized;

    // slot s: e_s for s < n, dx^{s-n} for s >= n
    auto slot_section = [&](std::size_t s) {
        std::vector<Scalar> x(n, Scalar(chart)), a(n, Scalar(chart));
        if (s < n)
            x[s] = Scalar(chart, Rational(1));
        else
            a[s - n] = Scalar(chart, Rational(1));
        return GeneralizedSection(chart, x, a);
    };
    // rows: coefficient masks of the image space; columns: slots
    ScalarMatrix a((1u << n), std::vector<Scalar>(2 * n, Scalar(chart)));
    for (std::size_t s = 0; s < 2 * n; ++s) {
        ExteriorElement img = clifford_act(slot_section(s), res.spinor);
        for (auto& [mask, c] : img.terms()) a[mask][s] = c;
    }
    auto kernel = kernel_basis_of(a, chart);
    if (kernel.size() != n) {
        res.failure = "kernel of the spinor action has dimension " + std::to_string(kernel.size()) +
                      ", expected " + std::to_string(n);
        return res;
    }
    std::vector<GeneralizedSection> sections;
    std::vector<std::vector<double>> at_m;
    for (auto& row : kernel) {
        std::vector<Scalar> x(row.begin(), row.begin() + n);
        std::vector<Scalar> al(row.begin() + n, row.end());
        std::vector<double> vals;
        for (auto& entry : row) {
            auto sm = smooth_at(entry, m);
            if (sm.status != Smoothness::Smooth) {
                res.failure = "content-reduced kernel row is not smooth at the point";
                return res;
            }
            vals.push_back(sm.approx);
        }
        sections.emplace_back(chart, x, al);
        at_m.push_back(std::move(vals));
    }
    if (numeric_rank(at_m) != n) {
        res.failure = "kernel frame drops rank at the point";
        return res;
    }
    res.frame = DiracFrame(chart, std::move(sections));
    return res;
}

} // namespace dirac
