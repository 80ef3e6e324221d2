#pragma once

#include <iomanip>

#include "dirac/scene.hpp"

namespace dirac {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Command output: a human-readable narrative plus a machine section of
/// sorted "key = value" lines that is byte-identical across runs.
struct Report {
    std::vector<std::string> human;
    std::map<std::string, std::string> machine;

    void note(std::string line) { human.push_back(std::move(line)); }
    void put(const std::string& key, const std::string& value) { machine[key] = value; }
    void put(const std::string& key, const char* value) { machine[key] = value; }
    void put(const std::string& key, bool value) { machine[key] = value ? "true" : "false"; }
    void put(const std::string& key, const Scalar& value) { machine[key] = value.to_string(); }
    void put(const std::string& key, const Rational& value) { machine[key] = value.get_str(); }
    void put(const std::string& key, std::size_t value) { machine[key] = std::to_string(value); }
    void put(const std::string& key, double value) {
        std::ostringstream os;
        os << std::setprecision(12) << value;
        machine[key] = os.str();
    }

    std::string machine_section() const {
        std::string out;
        for (auto& [k, v] : machine) out += k + " = " + v + "\n";
        return out;
    }
    std::string render(bool machine_only) const {
        if (machine_only) return machine_section();
        std::string out;
        for (auto& line : human) out += line + "\n";
        if (!human.empty() && !machine.empty()) out += "\n";
        return out + machine_section();
    }
};

struct RunOptions {
    std::string mode = "auto";       // removable: exact | probe | auto
    std::string at;                  // point name override
    std::string direction = "to-dw"; // dw-convert: to-dw | from-dw
    bool machine_only = false;
};

namespace cli_detail {

inline const ExteriorElement& primary_form(const Scene& scene) {
    if (scene.forms.empty()) throw UsageError("scene declares no form");
    return scene.forms.front().second;
}

inline const Point& target_point(const Scene& scene, const RunOptions& opt) {
    if (!opt.at.empty()) {
        const Point* p = scene.find_point(opt.at);
        if (!p) throw UsageError("unknown point '" + opt.at + "'");
        return *p;
    }
    if (scene.points.empty()) throw UsageError("scene declares no point");
    return scene.points.front().second;
}

inline std::string basis_key(const Chart& chart, std::uint32_t mask) {
    if (mask == 0) return "1";
    return basis_name(chart, Variance::Form, mask);
}

inline void emit_verdict(Report& rep, const Verdict& v, const Chart& chart) {
    rep.put("verdict", verdict_name(v.tag));
    rep.put("provenance", v.provenance == Provenance::Exact ? "exact" : "numeric");
    rep.put("detail", v.detail);
    std::string fired;
    for (auto o : v.fired) {
        if (!fired.empty()) fired += " ";
        fired += obstruction_name(o);
    }
    rep.put("obstructions", fired.empty() ? "none" : fired);
    for (auto& [mask, c] : v.exact_spinor_at_m) rep.put("spinor." + basis_key(chart, mask), c);
    for (auto& [mask, x] : v.probe_limit) rep.put("limit." + basis_key(chart, mask), x);
    if (v.witness_directions) {
        rep.put("witness.directions", std::to_string(v.witness_directions->first) + "," +
                                          std::to_string(v.witness_directions->second));
        rep.put("witness.distance", v.witness_distance);
    }
    rep.note(std::string("verdict: ") + verdict_name(v.tag) + " (" + v.detail + ")");
}

inline std::string combination_string(const std::vector<Scalar>& coeffs,
                                      const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k].is_zero()) continue;
        if (!out.empty()) out += " + ";
        out += "(" + coeffs[k].to_string() + ") " + names[k];
    }
    return out.empty() ? "0" : out;
}

inline void emit_frame_table(Report& rep, const DiracFrame& frame,
                             const std::vector<std::string>& names) {
    VerifyReport ver = verify_dirac(frame);
    rep.put("frame.rank", ver.rank_ok);
    rep.put("frame.isotropy", ver.isotropy_ok);
    rep.put("frame.closure", ver.closure_ok);
    if (!ver.ok()) {
        rep.note("frame is not a Dirac frame; no table");
        return;
    }
    AlgebroidData data = algebroid_data(frame, ver);
    std::size_t n = frame.size();
    const ChartPtr& chart = frame.chart();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Scalar> anchor = data.anchor[i];
        ExteriorElement rho(chart, Variance::Multivector);
        for (std::size_t c = 0; c < anchor.size(); ++c) rho.add_term(1u << c, anchor[c]);
        rep.put("anchor." + names[i], element_to_string(rho));
        for (std::size_t j = 0; j < n; ++j) {
            rep.put("bracket." + names[i] + "." + names[j],
                    combination_string(data.structure[i][j], names));
            rep.put("pairing_form." + names[i] + "." + names[j],
                    "(" + data.omega_l[i][j].to_string() + ")");
        }
    }
    rep.note("frame verified: brackets, anchors and the induced 2-form are listed");
}

inline void run_check(const Scene& scene, Report& rep) {
    for (auto& [name, omega] : scene.forms) {
        rep.put("form." + name + ".two_form", omega.is_homogeneous(2));
        rep.put("form." + name + ".closed", ext_d(omega).is_zero());
    }
    for (auto& [name, pi] : scene.bivectors) {
        rep.put("bivector." + name + ".two_vector", pi.is_homogeneous(2));
        rep.put("bivector." + name + ".poisson", schouten_self(pi).is_zero());
    }
    if (scene.volume) {
        const ExteriorElement& vol = scene.volume->second;
        rep.put("vol." + scene.volume->first + ".top_degree",
                vol.is_homogeneous(int(scene.chart->dim())));
    }
    for (std::size_t i = 0; i < scene.frames.size(); ++i) {
        auto& [name, frame] = scene.frames[i];
        VerifyReport ver = verify_dirac(frame);
        rep.put("frame." + name + ".rank", ver.rank_ok);
        rep.put("frame." + name + ".isotropy", ver.isotropy_ok);
        rep.put("frame." + name + ".closure", ver.closure_ok);
    }
    rep.note("checked " + std::to_string(scene.forms.size()) + " form(s), " +
             std::to_string(scene.bivectors.size()) + " bivector(s), " +
             std::to_string(scene.frames.size()) + " frame(s)");
}

inline void run_removable(const Scene& scene, const RunOptions& opt, Report& rep) {
    const ExteriorElement& omega = primary_form(scene);
    const Point& m = target_point(scene, opt);
    Verdict v;
    if (opt.mode == "exact") {
        try {
            v = exact_removability(spinor_of_form(omega), m);
        } catch (const ExactTierInapplicable& e) {
            v.tag = VerdictTag::Inconclusive;
            v.provenance = Provenance::Exact;
            v.detail = e.what();
        }
    } else if (opt.mode == "probe") {
        Verdict obs = obstruction_check(omega, m, scene.probe);
        if (!obs.fired.empty())
            v = obs;
        else
            v = directional_probe(spinor_of_form(omega), m, scene.probe);
    } else if (opt.mode == "auto") {
        v = removability(omega, m, scene.probe);
    } else {
        throw UsageError("unknown mode '" + opt.mode + "' (exact, probe, auto)");
    }
    rep.put("mode", opt.mode);
    emit_verdict(rep, v, *scene.chart);
}

inline void run_frame(const Scene& scene, const RunOptions& opt, Report& rep) {
    const ExteriorElement& omega = primary_form(scene);
    const Point& m = target_point(scene, opt);
    ExtendFrameResult res = extend_graph_frame(omega, m);
    rep.put("spinor", element_to_string(res.spinor));
    rep.put("extended", res.failure.empty());
    if (!res.failure.empty()) {
        rep.put("failure", res.failure);
        rep.note("graph closure has no smooth frame at the point: " + res.failure);
        return;
    }
    rep.put("sections", res.frame->size());
    for (std::size_t i = 0; i < res.frame->size(); ++i)
        rep.put("section." + std::to_string(i + 1),
                section_to_string(res.frame->sections()[i]));
    rep.note("smooth frame of the graph closure found (" +
             std::to_string(res.frame->size()) + " sections)");
}

inline void run_partial_inverse(const Scene& scene, Report& rep) {
    const ExteriorElement& omega = primary_form(scene);
    ExteriorElement pi = partial_inverse(omega);
    PartialInverseReport ver = verify_partial_inverse(omega, pi);
    rep.put("pi", element_to_string(pi));
    rep.put("omega_pi_omega", ver.omega_pi_omega);
    rep.put("pi_omega_pi", ver.pi_omega_pi);
    rep.put("antisymmetric", ver.antisymmetric);
    rep.put("poisson", ver.poisson);
    rep.put("rank", rank(form_matrix(omega)));
    rep.note(ver.ok() ? "partial inverse verified" : "partial inverse check failed");
}

inline void run_split_verify(const Scene& scene, const RunOptions& opt, Report& rep) {
    if (!scene.split) throw UsageError("scene declares no split statement");
    const SplitStatement& st = *scene.split;
    const Point* m = opt.at.empty() ? scene.find_point(st.at) : &target_point(scene, opt);
    SplittingReport sr = verify_splitting(*scene.find_form(st.reg), *scene.find_form(st.sing),
                                          *scene.find_bivector(st.pi), *m);
    rep.put("clause.regular_closed", sr.reg_closed);
    rep.put("clause.singular_closed", sr.sing_closed);
    rep.put("clause.regular_smooth", sr.reg_smooth);
    rep.put("clause.kernel_regular", sr.kernel_regular);
    rep.put("clause.partial_inverse", sr.inverse_ok);
    rep.put("clause.bivector_vanishes", sr.pi_vanishes);
    rep.put("undecided", sr.undecided);
    rep.put("kernel.generic_rank", sr.kernel.generic_rank);
    rep.put("verdict", verdict_name(sr.verdict.tag));
    rep.put("detail", sr.verdict.detail);
    rep.note(std::string("splitting criterion: ") + verdict_name(sr.verdict.tag) + " (" +
             sr.verdict.detail + ")");
}

inline void run_bracket_table(const Scene& scene, const RunOptions& opt, Report& rep) {
    if (!scene.frames.empty()) {
        emit_frame_table(rep, scene.frames.front().second, scene.frame_members.front());
        rep.put("source", "declared frame " + scene.frames.front().first);
        return;
    }
    const ExteriorElement& omega = primary_form(scene);
    const Point& m = target_point(scene, opt);
    ExtendFrameResult res = extend_graph_frame(omega, m);
    if (!res.failure.empty()) throw UsageError("no frame available: " + res.failure);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < res.frame->size(); ++i) names.push_back("s" + std::to_string(i + 1));
    for (std::size_t i = 0; i < res.frame->size(); ++i)
        rep.put("section." + names[i], section_to_string(res.frame->sections()[i]));
    emit_frame_table(rep, *res.frame, names);
    rep.put("source", "extended graph frame");
}

inline void run_spinor(const Scene& scene, Report& rep) {
    const ExteriorElement& omega = primary_form(scene);
    ExteriorElement phi = spinor_of_form(omega);
    rep.put("phi", element_to_string(phi));
    try {
        SpinorNormalization norm = normalize_spinor(phi);
        rep.put("normalized", true);
        rep.put("psi", element_to_string(norm.normalized));
        rep.put("denominator_lcm", poly_to_string(norm.denominator_lcm, *scene.chart));
        rep.put("numerator_content", poly_to_string(norm.numerator_content, *scene.chart));
        rep.note("pure spinor normalized to coprime polynomial coefficients");
    } catch (const ExactTierInapplicable& e) {
        rep.put("normalized", false);
        rep.put("failure", e.what());
        rep.note(std::string("normalization unavailable: ") + e.what());
    }
}

inline void emit_matrix(Report& rep, const std::string& prefix, const ScalarMatrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j)
            rep.put(prefix + "." + std::to_string(i + 1) + "." + std::to_string(j + 1),
                    "(" + m[i][j].to_string() + ")");
}

inline void run_dw_convert(const Scene& scene, const RunOptions& opt, Report& rep) {
    if (opt.direction == "to-dw") {
        if (!scene.blocks) throw UsageError("to-dw conversion needs splitblocks in the scene");
        DWBlocks dw = dw_from_standard(*scene.blocks);
        rep.put("direction", "to-dw");
        emit_matrix(rep, "A", dw.a);
        emit_matrix(rep, "B", dw.b);
        emit_matrix(rep, "pi", dw.pi);
        emit_matrix(rep, "C", dw.c);
        rep.note("converted split-form blocks to graph-style frame data");
    } else if (opt.direction == "from-dw") {
        if (!scene.dw) throw UsageError("from-dw conversion needs dwblocks in the scene");
        SplitBlocks blocks = standard_from_dw(*scene.dw);
        rep.put("direction", "from-dw");
        emit_matrix(rep, "xx", blocks.omega_xx);
        emit_matrix(rep, "xy", blocks.omega_xy);
        emit_matrix(rep, "yy", blocks.omega_yy);
        emit_matrix(rep, "pi", blocks.pi);
        rep.note("converted graph-style frame data to split-form blocks");
    } else {
        throw UsageError("unknown direction '" + opt.direction + "' (to-dw, from-dw)");
    }
}

} // namespace cli_detail

inline Report run_command(const std::string& command, const Scene& scene,
                          const RunOptions& opt = {}) {
    Report rep;
    rep.put("command", command);
    if (command == "check")
        cli_detail::run_check(scene, rep);
    else if (command == "removable")
        cli_detail::run_removable(scene, opt, rep);
    else if (command == "frame")
        cli_detail::run_frame(scene, opt, rep);
    else if (command == "partial-inverse")
        cli_detail::run_partial_inverse(scene, rep);
    else if (command == "split-verify")
        cli_detail::run_split_verify(scene, opt, rep);
    else if (command == "bracket-table")
        cli_detail::run_bracket_table(scene, opt, rep);
    else if (command == "spinor")
        cli_detail::run_spinor(scene, rep);
    else if (command == "dw-convert")
        cli_detail::run_dw_convert(scene, opt, rep);
    else
        throw UsageError("unknown command '" + command + "'");
    return rep;
}

} // namespace dirac
