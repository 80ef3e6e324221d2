#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dirac/splitting.hpp"

namespace dirac {

struct ParseError : std::runtime_error {
    std::size_t line = 0, column = 0;
    ParseError(std::size_t l, std::size_t c, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg),
          line(l),
          column(c) {}
};

/// Canonical expression printing for exterior elements; round-trips through
/// the scene grammar: "(coeff) dq1^dq2 + ...".
inline std::string element_to_string(const ExteriorElement& e) {
    if (e.is_zero()) return "0";
    std::string out;
    for (auto& [mask, c] : e.terms()) {
        if (!out.empty()) out += " + ";
        std::string coeff = "(" + c.to_string() + ")";
        if (mask == 0)
            out += coeff;
        else if (c == Scalar(e.chart(), Rational(1)))
            out += basis_name(*e.chart(), e.variance(), mask);
        else
            out += coeff + " " + basis_name(*e.chart(), e.variance(), mask);
    }
    return out;
}

inline std::string section_to_string(const GeneralizedSection& s) {
    std::string v = element_to_string(s.vector_element());
    std::string f = element_to_string(s.form_element());
    if (v == "0") return f;
    if (f == "0") return v;
    return v + " + " + f;
}

namespace scene_detail {

struct Token {
    enum Kind { Ident, Number, Symbol, End } kind = End;
    std::string text;
    std::size_t line = 0, column = 0;
};

inline std::vector<Token> tokenize(const std::string& text, std::size_t line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char ch = text[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        if (ch == '#') break;
        Token t;
        t.line = line;
        t.column = i + 1;
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            t.kind = Token::Ident;
            t.text = text.substr(i, j - i);
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
            std::size_t j = i;
            bool seen_e = false;
            while (j < text.size()) {
                char c2 = text[j];
                if (std::isdigit(static_cast<unsigned char>(c2)) || c2 == '.') {
                    ++j;
                } else if ((c2 == 'e' || c2 == 'E') && !seen_e && j + 1 < text.size() &&
                           (std::isdigit(static_cast<unsigned char>(text[j + 1])) ||
                            ((text[j + 1] == '+' || text[j + 1] == '-') && j + 2 < text.size() &&
                             std::isdigit(static_cast<unsigned char>(text[j + 2]))))) {
                    seen_e = true;
                    j += (text[j + 1] == '+' || text[j + 1] == '-') ? 2 : 1;
                } else {
                    break;
                }
            }
            t.kind = Token::Number;
            t.text = text.substr(i, j - i);
            i = j;
        } else if (std::string("+-*/^()=:,|").find(ch) != std::string::npos) {
            t.kind = Token::Symbol;
            t.text = std::string(1, ch);
            ++i;
        } else {
            throw ParseError(line, i + 1, std::string("unexpected character '") + ch + "'");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Token::End;
    end.line = line;
    end.column = text.size() + 1;
    out.push_back(end);
    return out;
}

/// Expression value: a scalar, or an exterior element with separate form
/// and multivector parts (mixed only for generalized sections).
struct Value {
    bool is_scalar = true;
    Scalar s;
    ExteriorElement form;
    ExteriorElement mv;

    static Value of_scalar(Scalar v) {
        Value out;
        out.is_scalar = true;
        out.s = std::move(v);
        return out;
    }
    static Value of_element(const ChartPtr& chart, ExteriorElement f, ExteriorElement m) {
        Value out;
        out.is_scalar = false;
        out.s = Scalar(chart);
        out.form = std::move(f);
        out.mv = std::move(m);
        return out;
    }
};

} // namespace scene_detail

struct SplitStatement {
    std::string reg, sing, pi, at;
};

struct Scene {
    ChartPtr chart;
    std::vector<std::pair<std::string, ExteriorElement>> forms;
    std::vector<std::pair<std::string, ExteriorElement>> bivectors;
    std::optional<std::pair<std::string, ExteriorElement>> volume;
    std::vector<std::pair<std::string, Point>> points;
    std::vector<std::pair<std::string, GeneralizedSection>> sections;
    std::vector<std::pair<std::string, DiracFrame>> frames;
    std::vector<std::vector<std::string>> frame_members; // section names, parallel to frames
    std::optional<SplitStatement> split;
    std::optional<SplitBlocks> blocks;
    std::optional<DWBlocks> dw;
    ProbeConfig probe;

    const ExteriorElement* find_form(const std::string& name) const {
        for (auto& [n, e] : forms)
            if (n == name) return &e;
        return nullptr;
    }
    const ExteriorElement* find_bivector(const std::string& name) const {
        for (auto& [n, e] : bivectors)
            if (n == name) return &e;
        return nullptr;
    }
    const Point* find_point(const std::string& name) const {
        for (auto& [n, p] : points)
            if (n == name) return &p;
        return nullptr;
    }
    const GeneralizedSection* find_section(const std::string& name) const {
        for (auto& [n, s] : sections)
            if (n == name) return &s;
        return nullptr;
    }
    const DiracFrame* find_frame(const std::string& name) const {
        for (auto& [n, f] : frames)
            if (n == name) return &f;
        return nullptr;
    }
    bool name_taken(const std::string& name) const {
        return find_form(name) || find_bivector(name) || find_point(name) || find_section(name) ||
               find_frame(name) || (volume && volume->first == name) ||
               (chart && chart->var_index(name));
    }
};

namespace scene_detail {

/// Recursive-descent expression parser with precedence
/// ^ (right-assoc) > unary - > * / juxtaposition > + -.
class ExprParser {
public:
    ExprParser(const std::vector<Token>& tokens, const Scene& scene)
        : tokens_(tokens), scene_(scene) {}

    Value parse_all() {
        Value v = parse_sum();
        expect_end();
        return v;
    }
    Value parse_sum() {
        Value v = parse_term();
        while (peek().kind == Token::Symbol && (peek().text == "+" || peek().text == "-")) {
            bool minus = next().text == "-";
            Value r = parse_term();
            v = add(v, minus ? neg(r) : r);
        }
        return v;
    }
    std::size_t position() const { return pos_; }
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }
    void expect_end() {
        if (peek().kind != Token::End)
            throw ParseError(peek().line, peek().column, "unexpected token '" + peek().text + "'");
    }

private:
    const std::vector<Token>& tokens_;
    const Scene& scene_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(peek().line, peek().column, msg);
    }

    Value parse_term() {
        Value v = parse_unary();
        while (true) {
            const Token& t = peek();
            if (t.kind == Token::Symbol && (t.text == "*" || t.text == "/")) {
                bool divide = next().text == "/";
                Value r = parse_unary();
                v = divide ? div(v, r) : mul(v, r);
            } else if (t.kind == Token::Ident || t.kind == Token::Number ||
                       (t.kind == Token::Symbol && t.text == "(")) {
                v = mul(v, parse_unary()); // juxtaposition multiplies
            } else {
                break;
            }
        }
        return v;
    }

    Value parse_unary() {
        if (peek().kind == Token::Symbol && peek().text == "-") {
            next();
            return neg(parse_unary());
        }
        return parse_power();
    }

    Value parse_power() {
        Value base = parse_atom();
        if (peek().kind == Token::Symbol && peek().text == "^") {
            const Token& op = next();
            Value exp = parse_unary(); // right-associative
            if (!base.is_scalar || !exp.is_scalar) return wedge_values(base, exp, op);
            if (!exp.s.is_polynomial() || !exp.s.num().is_constant())
                throw ParseError(op.line, op.column, "power exponent must be a constant");
            Rational e = exp.s.num().constant_value();
            if (e < 0 || e.get_den() != 1 || e > 12)
                throw ParseError(op.line, op.column, "power exponent must be a small nonnegative integer");
            return Value::of_scalar(base.s.pow(std::uint32_t(e.get_num().get_si())));
        }
        return base;
    }

    Value parse_atom() {
        const Token& t = peek();
        if (t.kind == Token::Number) {
            next();
            if (t.text.find('.') != std::string::npos || t.text.find('e') != std::string::npos ||
                t.text.find('E') != std::string::npos)
                throw ParseError(t.line, t.column, "expressions use exact integers and fractions only");
            return Value::of_scalar(Scalar(scene_.chart, Rational(t.text)));
        }
        if (t.kind == Token::Ident) return parse_ident();
        if (t.kind == Token::Symbol && t.text == "(") {
            next();
            Value v = parse_sum();
            if (!(peek().kind == Token::Symbol && peek().text == ")")) fail("expected ')'");
            next();
            return v;
        }
        fail("expected a number, identifier or '('");
    }

    Value parse_ident() {
        const Token& t = next();
        const ChartPtr& chart = scene_.chart;
        if (auto idx = chart->var_index(t.text))
            return Value::of_scalar(Scalar::variable(chart, *idx));
        if (t.text.size() > 1 && (t.text[0] == 'd' || t.text[0] == 'e')) {
            if (auto ci = chart->coord_index(t.text.substr(1))) {
                bool is_form = t.text[0] == 'd';
                ExteriorElement f(chart, Variance::Form), m(chart, Variance::Multivector);
                (is_form ? f : m).add_term(1u << *ci, Scalar(chart, Rational(1)));
                return Value::of_element(chart, std::move(f), std::move(m));
            }
        }
        if (const ExteriorElement* f = scene_.find_form(t.text))
            return Value::of_element(chart, *f, ExteriorElement(chart, Variance::Multivector));
        if (const ExteriorElement* b = scene_.find_bivector(t.text))
            return Value::of_element(chart, ExteriorElement(chart, Variance::Form), *b);
        throw ParseError(t.line, t.column, "unknown identifier '" + t.text + "'");
    }

    Value promote(const Value& v) const {
        if (!v.is_scalar) return v;
        ExteriorElement f(scene_.chart, Variance::Form);
        f.add_term(0, v.s);
        return Value::of_element(scene_.chart, std::move(f),
                                 ExteriorElement(scene_.chart, Variance::Multivector));
    }

    Value neg(const Value& v) const {
        if (v.is_scalar) return Value::of_scalar(-v.s);
        return Value::of_element(scene_.chart, -v.form, -v.mv);
    }
    Value add(const Value& a, const Value& b) const {
        if (a.is_scalar && b.is_scalar) return Value::of_scalar(a.s + b.s);
        Value l = promote(a), r = promote(b);
        // a bare scalar summand is a degree-0 form; adding it to a pure
        // multivector means the degree-0 part of that multivector
        if (a.is_scalar && r.form.is_zero() && !r.mv.is_zero()) {
            ExteriorElement m = r.mv;
            m.add_term(0, a.s);
            return Value::of_element(scene_.chart, ExteriorElement(scene_.chart, Variance::Form), m);
        }
        if (b.is_scalar && l.form.is_zero() && !l.mv.is_zero()) {
            ExteriorElement m = l.mv;
            m.add_term(0, b.s);
            return Value::of_element(scene_.chart, ExteriorElement(scene_.chart, Variance::Form), m);
        }
        return Value::of_element(scene_.chart, l.form + r.form, l.mv + r.mv);
    }
    Value mul(const Value& a, const Value& b) const {
        if (a.is_scalar && b.is_scalar) return Value::of_scalar(a.s * b.s);
        if (a.is_scalar) return Value::of_element(scene_.chart, b.form * a.s, b.mv * a.s);
        if (b.is_scalar) return Value::of_element(scene_.chart, a.form * b.s, a.mv * b.s);
        fail("cannot multiply two exterior elements with '*'; use '^' for the wedge product");
    }
    Value div(const Value& a, const Value& b) const {
        if (!b.is_scalar) fail("division by an exterior element");
        if (a.is_scalar) return Value::of_scalar(a.s / b.s);
        Scalar inv = Scalar(scene_.chart, Rational(1)) / b.s;
        return Value::of_element(scene_.chart, a.form * inv, a.mv * inv);
    }
    Value wedge_values(const Value& a, const Value& b, const Token& op) const {
        if (a.is_scalar || b.is_scalar)
            throw ParseError(op.line, op.column, "'^' between a scalar and a basis symbol");
        bool a_form = !a.form.is_zero(), a_mv = !a.mv.is_zero();
        bool b_form = !b.form.is_zero(), b_mv = !b.mv.is_zero();
        if ((a_form && a_mv) || (b_form && b_mv) || (a_form && b_mv) || (a_mv && b_form))
            throw ParseError(op.line, op.column, "wedge operands must both be forms or both vectors");
        if (a_mv || b_mv)
            return Value::of_element(scene_.chart, ExteriorElement(scene_.chart, Variance::Form),
                                     wedge(a.mv, b.mv));
        return Value::of_element(scene_.chart, wedge(a.form, b.form),
                                 ExteriorElement(scene_.chart, Variance::Multivector));
    }
};

inline Rational parse_rational(const std::vector<Token>& tokens, std::size_t& pos) {
    bool minus = false;
    if (tokens[pos].kind == Token::Symbol && (tokens[pos].text == "-" || tokens[pos].text == "+")) {
        minus = tokens[pos].text == "-";
        ++pos;
    }
    const Token& num = tokens[pos];
    if (num.kind != Token::Number || num.text.find('.') != std::string::npos)
        throw ParseError(num.line, num.column, "expected an integer or fraction");
    ++pos;
    Rational v(num.text);
    if (tokens[pos].kind == Token::Symbol && tokens[pos].text == "/") {
        ++pos;
        const Token& den = tokens[pos];
        if (den.kind != Token::Number || den.text.find('.') != std::string::npos)
            throw ParseError(den.line, den.column, "expected an integer denominator");
        ++pos;
        v /= Rational(den.text);
    }
    v.canonicalize();
    if (minus) v = -v;
    return v;
}

} // namespace scene_detail

/// Line-oriented scene parser. The chart and all radical declarations must
/// precede every object declaration (the chart is immutable once built).
inline Scene parse_scene(const std::string& text) {
    using scene_detail::Token;
    Scene scene;
    std::vector<std::string> coord_names;
    std::vector<std::pair<std::string, Polynomial>> radical_defs; // over coords only
    bool chart_final = false;
    std::size_t pending_blocks = 0; // 1 = split blocks, 2 = dw blocks

    auto finalize_chart = [&](std::size_t line) {
        if (chart_final) return;
        if (coord_names.empty()) throw ParseError(line, 1, "scene declares no chart");
        std::size_t total = coord_names.size() + radical_defs.size();
        std::vector<std::pair<std::string, Polynomial>> widened;
        for (auto& [sym, def] : radical_defs) {
            Polynomial w(total);
            for (auto& [mono, c] : def.terms()) {
                Monomial mm(total);
                for (std::size_t v = 0; v < mono.exps.size(); ++v) mm.exps[v] = mono.exps[v];
                w.add_term(mm, c);
            }
            widened.emplace_back(sym, std::move(w));
        }
        try {
            scene.chart = std::make_shared<Chart>(coord_names, widened);
        } catch (const ChartError& e) {
            throw ParseError(line, 1, e.what());
        }
        chart_final = true;
    };

    auto parse_expr = [&](const std::vector<Token>& tokens, std::size_t from) {
        std::vector<Token> rest(tokens.begin() + from, tokens.end());
        scene_detail::ExprParser p(rest, scene);
        return p.parse_all();
    };

    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        auto tokens = scene_detail::tokenize(raw, lineno);
        if (tokens.front().kind == Token::End) continue;
        const Token& head = tokens.front();
        if (head.kind != Token::Ident)
            throw ParseError(head.line, head.column, "expected a statement keyword");
        const std::string& kw = head.text;

        auto expect_ident = [&](std::size_t i) -> const Token& {
            if (tokens[i].kind != Token::Ident)
                throw ParseError(tokens[i].line, tokens[i].column, "expected an identifier");
            return tokens[i];
        };
        auto expect_symbol = [&](std::size_t i, const char* sym) {
            if (!(tokens[i].kind == Token::Symbol && tokens[i].text == sym))
                throw ParseError(tokens[i].line, tokens[i].column,
                                 std::string("expected '") + sym + "'");
        };
        auto fresh_name = [&](const Token& t) {
            if (scene.name_taken(t.text))
                throw ParseError(t.line, t.column, "name '" + t.text + "' is already declared");
            return t.text;
        };

        if (kw == "chart") {
            if (chart_final || !coord_names.empty())
                throw ParseError(head.line, head.column, "chart is already declared");
            for (std::size_t i = 1; tokens[i].kind != Token::End; ++i)
                coord_names.push_back(expect_ident(i).text);
            if (coord_names.empty())
                throw ParseError(head.line, head.column, "chart needs coordinate names");
        } else if (kw == "radical") {
            if (chart_final)
                throw ParseError(head.line, head.column,
                                 "radical declarations must precede object declarations");
            if (coord_names.empty())
                throw ParseError(head.line, head.column, "radical before chart");
            const Token& name = expect_ident(1);
            expect_symbol(2, "=");
            // parse the defining polynomial on a coordinates-only chart
            Scene tmp;
            tmp.chart = std::make_shared<Chart>(coord_names);
            std::vector<Token> rest(tokens.begin() + 3, tokens.end());
            scene_detail::ExprParser p(rest, tmp);
            scene_detail::Value v = p.parse_all();
            if (!v.is_scalar || !v.s.is_polynomial())
                throw ParseError(name.line, name.column,
                                 "radical defining expression must be a polynomial in the coordinates");
            for (auto& [sym, def] : radical_defs)
                if (sym == name.text)
                    throw ParseError(name.line, name.column, "radical '" + name.text + "' redeclared");
            radical_defs.emplace_back(name.text, v.s.num());
        } else if (kw == "form" || kw == "bivector" || kw == "vol") {
            finalize_chart(head.line);
            const Token& name = expect_ident(1);
            expect_symbol(2, "=");
            scene_detail::Value v = parse_expr(tokens, 3);
            if (v.is_scalar) {
                if (!v.s.is_zero())
                    throw ParseError(name.line, name.column, "expected an exterior expression");
                v = scene_detail::Value::of_element(scene.chart,
                                                    ExteriorElement(scene.chart, Variance::Form),
                                                    ExteriorElement(scene.chart, Variance::Multivector));
            }
            if (kw == "bivector") {
                if (!v.form.is_zero())
                    throw ParseError(name.line, name.column, "bivector expression contains d-symbols");
                scene.bivectors.emplace_back(fresh_name(name), v.mv);
            } else {
                if (!v.mv.is_zero())
                    throw ParseError(name.line, name.column, "form expression contains e-symbols");
                if (kw == "vol") {
                    if (scene.volume)
                        throw ParseError(name.line, name.column, "volume form redeclared");
                    scene.volume = {fresh_name(name), v.form};
                } else {
                    scene.forms.emplace_back(fresh_name(name), v.form);
                }
            }
        } else if (kw == "point") {
            finalize_chart(head.line);
            const Token& name = expect_ident(1);
            expect_symbol(2, "=");
            std::vector<Rational> vals(scene.chart->dim(), Rational(0));
            std::vector<bool> seen(scene.chart->dim(), false);
            std::size_t i = 3;
            while (tokens[i].kind != Token::End) {
                const Token& coord = expect_ident(i);
                auto ci = scene.chart->coord_index(coord.text);
                if (!ci)
                    throw ParseError(coord.line, coord.column,
                                     "unknown coordinate '" + coord.text + "'");
                if (seen[*ci])
                    throw ParseError(coord.line, coord.column,
                                     "coordinate '" + coord.text + "' assigned twice");
                expect_symbol(i + 1, ":");
                i += 2;
                vals[*ci] = scene_detail::parse_rational(tokens, i);
                seen[*ci] = true;
            }
            for (std::size_t c = 0; c < seen.size(); ++c)
                if (!seen[c])
                    throw ParseError(head.line, head.column,
                                     "point misses coordinate '" + scene.chart->coords()[c] + "'");
            try {
                scene.points.emplace_back(fresh_name(name), Point(scene.chart, vals));
            } catch (const ChartError& e) {
                throw ParseError(head.line, head.column, e.what());
            }
        } else if (kw == "section") {
            finalize_chart(head.line);
            const Token& name = expect_ident(1);
            expect_symbol(2, "=");
            scene_detail::Value v = parse_expr(tokens, 3);
            if (v.is_scalar || !v.form.is_homogeneous(1) || !v.mv.is_homogeneous(1))
                throw ParseError(name.line, name.column,
                                 "section expression must be homogeneous of degree 1");
            std::size_t n = scene.chart->dim();
            std::vector<Scalar> x(n, Scalar(scene.chart)), a(n, Scalar(scene.chart));
            for (std::size_t c = 0; c < n; ++c) {
                x[c] = v.mv.coefficient(1u << c);
                a[c] = v.form.coefficient(1u << c);
            }
            scene.sections.emplace_back(fresh_name(name),
                                        GeneralizedSection(scene.chart, x, a));
        } else if (kw == "frame") {
            finalize_chart(head.line);
            const Token& name = expect_ident(1);
            expect_symbol(2, "=");
            std::vector<GeneralizedSection> secs;
            std::vector<std::string> members;
            for (std::size_t i = 3; tokens[i].kind != Token::End; ++i) {
                const Token& sn = expect_ident(i);
                const GeneralizedSection* s = scene.find_section(sn.text);
                if (!s) throw ParseError(sn.line, sn.column, "unknown section '" + sn.text + "'");
                secs.push_back(*s);
                members.push_back(sn.text);
            }
            try {
                scene.frames.emplace_back(fresh_name(name), DiracFrame(scene.chart, secs));
                scene.frame_members.push_back(std::move(members));
            } catch (const ArithmeticError& e) {
                throw ParseError(head.line, head.column, e.what());
            }
        } else if (kw == "split") {
            finalize_chart(head.line);
            SplitStatement st;
            for (std::size_t i = 1; tokens[i].kind != Token::End; i += 3) {
                const Token& key = expect_ident(i);
                expect_symbol(i + 1, "=");
                const Token& val = expect_ident(i + 2);
                if (key.text == "reg")
                    st.reg = val.text;
                else if (key.text == "sing")
                    st.sing = val.text;
                else if (key.text == "pi")
                    st.pi = val.text;
                else if (key.text == "at")
                    st.at = val.text;
                else
                    throw ParseError(key.line, key.column, "unknown split key '" + key.text + "'");
            }
            if (!scene.find_form(st.reg))
                throw ParseError(head.line, head.column, "split: unknown form '" + st.reg + "'");
            if (!scene.find_form(st.sing))
                throw ParseError(head.line, head.column, "split: unknown form '" + st.sing + "'");
            if (!scene.find_bivector(st.pi))
                throw ParseError(head.line, head.column, "split: unknown bivector '" + st.pi + "'");
            if (!scene.find_point(st.at))
                throw ParseError(head.line, head.column, "split: unknown point '" + st.at + "'");
            scene.split = st;
        } else if (kw == "splitblocks" || kw == "dwblocks") {
            finalize_chart(head.line);
            std::size_t p = 0, q = 0;
            for (std::size_t i = 1; tokens[i].kind != Token::End; i += 3) {
                const Token& key = expect_ident(i);
                expect_symbol(i + 1, "=");
                const Token& val = tokens[i + 2];
                if (val.kind != Token::Number)
                    throw ParseError(val.line, val.column, "expected a block size");
                if (key.text == "p")
                    p = std::stoul(val.text);
                else if (key.text == "q")
                    q = std::stoul(val.text);
                else
                    throw ParseError(key.line, key.column, "unknown block key '" + key.text + "'");
            }
            if (p + q != scene.chart->dim())
                throw ParseError(head.line, head.column, "block sizes must sum to the chart dimension");
            auto zeros = [&](std::size_t r, std::size_t c) {
                return ScalarMatrix(r, std::vector<Scalar>(c, Scalar(scene.chart)));
            };
            if (kw == "splitblocks") {
                SplitBlocks b;
                b.chart = scene.chart;
                b.p = p;
                b.q = q;
                b.omega_xx = zeros(p, p);
                b.omega_xy = zeros(p, q);
                b.omega_yy = zeros(q, q);
                b.pi = zeros(q, q);
                scene.blocks = std::move(b);
                pending_blocks = 1;
            } else {
                DWBlocks b;
                b.chart = scene.chart;
                b.p = p;
                b.q = q;
                b.a = zeros(p, q);
                b.b = zeros(p, p);
                b.pi = zeros(q, q);
                b.c = zeros(p, q);
                scene.dw = std::move(b);
                pending_blocks = 2;
            }
        } else if (kw == "block" || kw == "dwblock") {
            if ((kw == "block" && pending_blocks != 1) || (kw == "dwblock" && pending_blocks != 2))
                throw ParseError(head.line, head.column,
                                 "block entry without a preceding block-size declaration");
            const Token& which = expect_ident(1);
            auto idx_of = [&](std::size_t i) {
                if (tokens[i].kind != Token::Number)
                    throw ParseError(tokens[i].line, tokens[i].column, "expected a 1-based index");
                return std::stoul(tokens[i].text);
            };
            std::size_t bi = idx_of(2), bj = idx_of(3);
            expect_symbol(4, "=");
            scene_detail::Value v = parse_expr(tokens, 5);
            if (!v.is_scalar)
                throw ParseError(which.line, which.column, "block entries are scalar expressions");
            auto put = [&](ScalarMatrix& m, bool antisym) {
                if (bi == 0 || bj == 0 || bi > m.size() || bj > m[0].size())
                    throw ParseError(which.line, which.column, "block index out of range");
                m[bi - 1][bj - 1] = v.s;
                if (antisym) {
                    if (bi == bj && !v.s.is_zero())
                        throw ParseError(which.line, which.column,
                                         "diagonal entry of an antisymmetric block must be zero");
                    if (bi != bj) m[bj - 1][bi - 1] = -v.s;
                }
            };
            if (kw == "block") {
                if (which.text == "xx")
                    put(scene.blocks->omega_xx, true);
                else if (which.text == "xy")
                    put(scene.blocks->omega_xy, false);
                else if (which.text == "yy")
                    put(scene.blocks->omega_yy, true);
                else if (which.text == "pi")
                    put(scene.blocks->pi, true);
                else
                    throw ParseError(which.line, which.column,
                                     "unknown block '" + which.text + "' (xx, xy, yy, pi)");
            } else {
                if (which.text == "A")
                    put(scene.dw->a, false);
                else if (which.text == "B")
                    put(scene.dw->b, true);
                else if (which.text == "pi")
                    put(scene.dw->pi, true);
                else
                    throw ParseError(which.line, which.column,
                                     "unknown dw block '" + which.text + "' (A, B, pi)");
            }
        } else if (kw == "probe") {
            for (std::size_t i = 1; tokens[i].kind != Token::End; i += 3) {
                const Token& key = expect_ident(i);
                expect_symbol(i + 1, "=");
                const Token& val = tokens[i + 2];
                if (val.kind != Token::Number)
                    throw ParseError(val.line, val.column, "expected a numeric probe value");
                if (key.text == "dirs")
                    scene.probe.directions = std::stoul(val.text);
                else if (key.text == "depth")
                    scene.probe.depth = std::stoul(val.text);
                else if (key.text == "t0")
                    scene.probe.t0 = std::stod(val.text);
                else if (key.text == "agree")
                    scene.probe.eps_agree = std::stod(val.text);
                else if (key.text == "conv")
                    scene.probe.eps_conv = std::stod(val.text);
                else
                    throw ParseError(key.line, key.column, "unknown probe key '" + key.text + "'");
            }
            try {
                scene.probe.validate();
            } catch (const ArithmeticError& e) {
                throw ParseError(head.line, head.column, e.what());
            }
        } else {
            throw ParseError(head.line, head.column, "unknown statement '" + kw + "'");
        }
    }
    finalize_chart(lineno == 0 ? 1 : lineno);
    return scene;
}

/// Parses a single expression against an existing scene's chart and names.
inline ExteriorElement parse_form_expression(const Scene& scene, const std::string& text) {
    auto tokens = scene_detail::tokenize(text, 1);
    scene_detail::ExprParser p(tokens, scene);
    scene_detail::Value v = p.parse_all();
    if (v.is_scalar) {
        ExteriorElement f(scene.chart, Variance::Form);
        f.add_term(0, v.s);
        return f;
    }
    if (!v.mv.is_zero()) throw ParseError(1, 1, "expected a form expression");
    return v.form;
}

} // namespace dirac
