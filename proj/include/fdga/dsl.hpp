#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fdga/path.hpp"
#include "fdga/splitting.hpp"

namespace fdga {
namespace dsl {

enum class DiagCode {
    lex_bad_char,
    lex_bad_number,
    syntax_unexpected_token,
    sem_undeclared_name,
    sem_duplicate_name,
    sem_inhomogeneous,
    sem_bad_section,
    sem_missing_field,
    sem_wrong_degree,
    sem_path_symbol,
    sem_validation,
};

inline const char* diag_code_name(DiagCode c) {
    switch (c) {
        case DiagCode::lex_bad_char: return "lex-bad-char";
        case DiagCode::lex_bad_number: return "lex-bad-number";
        case DiagCode::syntax_unexpected_token: return "syntax-unexpected-token";
        case DiagCode::sem_undeclared_name: return "undeclared-name";
        case DiagCode::sem_duplicate_name: return "duplicate-name";
        case DiagCode::sem_inhomogeneous: return "inhomogeneous-expression";
        case DiagCode::sem_bad_section: return "bad-section";
        case DiagCode::sem_missing_field: return "missing-field";
        case DiagCode::sem_wrong_degree: return "wrong-degree";
        case DiagCode::sem_path_symbol: return "path-symbol-outside-homotopy";
        case DiagCode::sem_validation: return "validation";
    }
    return "unknown";
}

struct Diagnostic {
    DiagCode code;
    int line = 0;
    int col = 0;
    std::string token;
    std::string message;

    std::string str() const {
        std::ostringstream os;
        os << "line " << line << ", col " << col << " [" << diag_code_name(code) << "] " << message;
        if (!token.empty()) os << " (at '" << token << "')";
        return os.str();
    }
};

// ---- expression tokens -------------------------------------------------

enum class Tok { number, ident, plus, minus, star, caret, lparen, rparen, comma, colon, equals, end };

struct Token {
    Tok kind;
    std::string text;
    Rat value;  // for numbers
    int col = 0;
};

inline bool lex_line(const std::string& s, int lineno, std::vector<Token>& out,
                     std::vector<Diagnostic>& diags) {
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        int col = static_cast<int>(i) + 1;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') break;  // comment
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            std::string num = s.substr(i, j - i);
            if (j < s.size() && s[j] == '/') {
                std::size_t k = j + 1;
                while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                if (k == j + 1) {
                    diags.push_back({DiagCode::lex_bad_number, lineno, col, s.substr(i, j + 1 - i),
                                     "expected digits after '/' in a rational literal"});
                    return false;
                }
                num = s.substr(i, k - i);
                j = k;
            }
            Token t{Tok::number, num, rat_from_string(num), col};
            out.push_back(std::move(t));
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
                ++j;
            out.push_back({Tok::ident, s.substr(i, j - i), Rat(0), col});
            i = j;
            continue;
        }
        switch (c) {
            case '+': out.push_back({Tok::plus, "+", Rat(0), col}); break;
            case '-': out.push_back({Tok::minus, "-", Rat(0), col}); break;
            case '*': out.push_back({Tok::star, "*", Rat(0), col}); break;
            case '^': out.push_back({Tok::caret, "^", Rat(0), col}); break;
            case '(': out.push_back({Tok::lparen, "(", Rat(0), col}); break;
            case ')': out.push_back({Tok::rparen, ")", Rat(0), col}); break;
            case ',': out.push_back({Tok::comma, ",", Rat(0), col}); break;
            case ':': out.push_back({Tok::colon, ":", Rat(0), col}); break;
            case '=': out.push_back({Tok::equals, "=", Rat(0), col}); break;
            default:
                diags.push_back({DiagCode::lex_bad_char, lineno, col, std::string(1, c),
                                 "character is not part of the expression grammar"});
                return false;
        }
        ++i;
    }
    out.push_back({Tok::end, "", Rat(0), static_cast<int>(s.size()) + 1});
    return true;
}

// ---- expression parser (sums of rational-coefficient monomials with ^
// powers, implicit or explicit *, parenthesized subexpressions) ----------

class ExprParser {
  public:
    ExprParser(const std::vector<Token>& toks, std::size_t start, int lineno, PresentationPtr carrier,
               int r, bool allow_path, std::vector<Diagnostic>& diags)
        : toks_(toks), pos_(start), lineno_(lineno), carrier_(std::move(carrier)), r_(r),
          allow_path_(allow_path), diags_(diags) {}

    std::optional<PathElement> parse_expr() {
        auto v = parse_sum();
        if (!v) return std::nullopt;
        if (cur().kind != Tok::end && cur().kind != Tok::comma) {
            error(DiagCode::syntax_unexpected_token, "expected end of expression");
            return std::nullopt;
        }
        return v;
    }

    std::size_t position() const { return pos_; }

  private:
    const Token& cur() const { return toks_[pos_]; }
    void advance() { ++pos_; }

    void error(DiagCode code, const std::string& msg) {
        diags_.push_back({code, lineno_, cur().col, cur().text, msg});
    }

    std::optional<PathElement> parse_sum() {
        bool neg = false;
        if (cur().kind == Tok::minus) {
            neg = true;
            advance();
        } else if (cur().kind == Tok::plus) {
            advance();
        }
        auto acc = parse_term();
        if (!acc) return std::nullopt;
        if (neg) *acc = path_scale(Rat(-1), *acc);
        while (cur().kind == Tok::plus || cur().kind == Tok::minus) {
            bool sub = cur().kind == Tok::minus;
            advance();
            auto t = parse_term();
            if (!t) return std::nullopt;
            if (sub) *t = path_scale(Rat(-1), *t);
            try {
                *acc = path_add(*acc, *t);
            } catch (const ValidationError&) {
                error(DiagCode::sem_inhomogeneous, "terms of different degree in one expression");
                return std::nullopt;
            }
        }
        return acc;
    }

    std::optional<PathElement> parse_term() {
        auto acc = parse_factor();
        if (!acc) return std::nullopt;
        for (;;) {
            if (cur().kind == Tok::star) {
                advance();
                auto f = parse_factor();
                if (!f) return std::nullopt;
                acc = mul_checked(*acc, *f);
                if (!acc) return std::nullopt;
            } else if (cur().kind == Tok::number || cur().kind == Tok::ident ||
                       cur().kind == Tok::lparen) {
                auto f = parse_factor();  // implicit multiplication
                if (!f) return std::nullopt;
                acc = mul_checked(*acc, *f);
                if (!acc) return std::nullopt;
            } else {
                break;
            }
        }
        return acc;
    }

    std::optional<PathElement> mul_checked(const PathElement& a, const PathElement& b) {
        try {
            return path_mul(a, b);
        } catch (const TruncationError& e) {
            error(DiagCode::sem_validation, e.what());
            return std::nullopt;
        }
    }

    std::optional<PathElement> parse_factor() {
        PathElement base = path_const(carrier_, r_, carrier_->unit());
        if (cur().kind == Tok::number) {
            base = path_scale(cur().value, base);
            advance();
        } else if (cur().kind == Tok::ident) {
            const std::string& name = cur().text;
            if (name == "t" || name == "dt") {
                if (!allow_path_) {
                    error(DiagCode::sem_path_symbol, "'" + name + "' is only valid inside a homotopy block");
                    return std::nullopt;
                }
                base = (name == "t") ? path_t(carrier_, r_) : path_dt(carrier_, r_);
                advance();
            } else {
                int gi = carrier_->gen_index(name);
                if (gi < 0) {
                    error(DiagCode::sem_undeclared_name, "'" + name + "' is not a declared generator");
                    return std::nullopt;
                }
                base = path_const(carrier_, r_, carrier_->gen_element(gi));
                advance();
            }
        } else if (cur().kind == Tok::lparen) {
            advance();
            auto inner = parse_sum();
            if (!inner) return std::nullopt;
            if (cur().kind != Tok::rparen) {
                error(DiagCode::syntax_unexpected_token, "expected ')'");
                return std::nullopt;
            }
            advance();
            base = *inner;
        } else {
            error(DiagCode::syntax_unexpected_token, "expected a number, name or '('");
            return std::nullopt;
        }
        if (cur().kind == Tok::caret) {
            advance();
            if (cur().kind != Tok::number || cur().value.get_den() != 1 || sgn(cur().value) < 0) {
                error(DiagCode::syntax_unexpected_token, "expected a non-negative integer exponent");
                return std::nullopt;
            }
            long e = cur().value.get_num().get_si();
            advance();
            PathElement acc = path_const(carrier_, r_, carrier_->unit());
            for (long i = 0; i < e; ++i) {
                auto m = mul_checked(acc, base);
                if (!m) return std::nullopt;
                acc = *m;
            }
            base = acc;
        }
        return base;
    }

    const std::vector<Token>& toks_;
    std::size_t pos_;
    int lineno_;
    PresentationPtr carrier_;
    int r_;
    bool allow_path_;
    std::vector<Diagnostic>& diags_;
};

// ---- definition files ---------------------------------------------------

struct MorphismDef {
    std::string name, source, target;
    DgaMorphism morphism;
};

struct HomotopyDef {
    std::string name, from, to;
    int r = 1;
    PathMorphism homotopy;
};

struct BigradingDef {
    std::string name, algebra;
    int r = 1;
    Bigrading bigrading;
};

struct DefinitionFile {
    int truncation = 8;
    std::vector<std::string> algebra_order;
    std::map<std::string, PresentationPtr> algebras;
    std::vector<MorphismDef> morphisms;
    std::vector<HomotopyDef> homotopies;
    std::vector<BigradingDef> bigradings;

    const PresentationPtr* algebra(const std::string& name) const {
        auto it = algebras.find(name);
        return it == algebras.end() ? nullptr : &it->second;
    }
    const MorphismDef* morphism(const std::string& name) const {
        for (const auto& m : morphisms)
            if (m.name == name) return &m;
        return nullptr;
    }
    const HomotopyDef* homotopy(const std::string& name) const {
        for (const auto& h : homotopies)
            if (h.name == name) return &h;
        return nullptr;
    }
    const BigradingDef* bigrading(const std::string& name) const {
        for (const auto& b : bigradings)
            if (b.name == name) return &b;
        return nullptr;
    }
};

struct ParseResult {
    std::optional<DefinitionFile> file;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return file.has_value() && diagnostics.empty(); }
};

namespace detail {

struct RawAlgebra {
    std::string name;
    int line = 0;
    std::vector<GeneratorSpec> gens;
    std::vector<std::pair<int, std::string>> relation_lines;
    std::vector<std::tuple<int, std::string, std::string>> d_lines;  // line, gen, expr
};

struct RawMorphism {
    std::string name, source, target;
    int line = 0;
    std::vector<std::tuple<int, std::string, std::string>> image_lines;
};

struct RawHomotopy {
    std::string name, from, to;
    int r = 1;
    bool r_set = false;
    int line = 0;
    std::vector<std::tuple<int, std::string, std::string>> image_lines;
};

struct RawBigrading {
    std::string name, algebra;
    int r = 1;
    int line = 0;
    std::vector<std::tuple<int, int, int, std::string>> piece_lines;  // line, c, q, exprs
};

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

inline bool parse_int(const std::string& s, int& out) {
    try {
        std::size_t used = 0;
        out = std::stoi(s, &used);
        return used == s.size();
    } catch (...) {
        return false;
    }
}

inline std::string strip_comment(const std::string& s) {
    auto pos = s.find('#');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

}  // namespace detail

/// Evaluate an expression string in a presentation (no t/dt allowed).
inline std::optional<Element> eval_element(const std::string& text, int lineno,
                                           const PresentationPtr& carrier,
                                           std::vector<Diagnostic>& diags) {
    std::vector<Token> toks;
    if (!lex_line(text, lineno, toks, diags)) return std::nullopt;
    ExprParser p(toks, 0, lineno, carrier, 0, false, diags);
    auto v = p.parse_expr();
    if (!v) return std::nullopt;
    if (!v->dt_part.empty() || v->t_part.size() > 1 ||
        (!v->t_part.empty() && v->t_part.begin()->first != 0)) {
        diags.push_back({DiagCode::sem_path_symbol, lineno, 1, "", "expression must not involve t or dt"});
        return std::nullopt;
    }
    return evaluate(*v, 0);
}

inline std::optional<PathElement> eval_path(const std::string& text, int lineno,
                                            const PresentationPtr& carrier, int r,
                                            std::vector<Diagnostic>& diags) {
    std::vector<Token> toks;
    if (!lex_line(text, lineno, toks, diags)) return std::nullopt;
    ExprParser p(toks, 0, lineno, carrier, r, true, diags);
    return p.parse_expr();
}

/// Parse a definition file: either a validated model or a list of located
/// diagnostics.
inline ParseResult parse(const std::string& text) {
    ParseResult res;
    std::vector<Diagnostic>& diags = res.diagnostics;

    // ---- phase 1: raw structure ----
    std::vector<detail::RawAlgebra> algebras;
    std::vector<detail::RawMorphism> morphisms;
    std::vector<detail::RawHomotopy> homotopies;
    std::vector<detail::RawBigrading> bigradings;
    int truncation = 8;
    bool truncation_seen = false;

    enum class Section { none, generators, relations, differential, morphism, homotopy, bigrading };
    Section section = Section::none;
    detail::RawAlgebra* cur_alg = nullptr;

    std::istringstream is(text);
    std::string raw_line;
    int lineno = 0;
    while (std::getline(is, raw_line)) {
        ++lineno;
        std::string line = detail::strip_comment(raw_line);
        std::string trimmed = line;
        while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
            trimmed.pop_back();
        std::size_t lead = 0;
        while (lead < trimmed.size() && std::isspace(static_cast<unsigned char>(trimmed[lead]))) ++lead;
        trimmed = trimmed.substr(lead);
        if (trimmed.empty()) continue;

        if (trimmed.front() == '[') {
            if (trimmed.back() != ']') {
                diags.push_back({DiagCode::sem_bad_section, lineno, 1, trimmed, "unterminated section header"});
                continue;
            }
            auto fields = detail::split_ws(trimmed.substr(1, trimmed.size() - 2));
            if (fields.empty()) {
                diags.push_back({DiagCode::sem_bad_section, lineno, 1, trimmed, "empty section header"});
                continue;
            }
            const std::string& kind = fields[0];
            if (kind == "algebra") {
                if (fields.size() != 2) {
                    diags.push_back({DiagCode::sem_bad_section, lineno, 1, trimmed,
                                     "[algebra NAME] takes exactly one name"});
                    continue;
                }
                algebras.push_back({fields[1], lineno, {}, {}, {}});
                cur_alg = &algebras.back();
                section = Section::none;
            } else if (kind == "generators" || kind == "relations" || kind == "d") {
                if (!cur_alg) {
                    algebras.push_back({"main", lineno, {}, {}, {}});
                    cur_alg = &algebras.back();
                }
                section = kind == "generators" ? Section::generators
                          : kind == "relations" ? Section::relations
                                                : Section::differential;
            } else if (kind == "morphism") {
                if (fields.size() != 2) {
                    diags.push_back({DiagCode::sem_bad_section, lineno, 1, trimmed,
                                     "[morphism NAME] takes exactly one name"});
                    continue;
                }
                morphisms.push_back({fields[1], "", "", lineno, {}});
                section = Section::morphism;
            } else if (kind == "homotopy") {
                if (fields.size() != 2) {
                    diags.push_back({DiagCode::sem_bad_section, lineno, 1, trimmed,
                                     "[homotopy NAME] takes exactly one name"});
                    continue;
                }
                homotopies.push_back({fields[1], "", "", 1, false, lineno, {}});
                section = Section::homotopy;
            } else if (kind == "bigrading") {
                std::string name = fields.size() >= 2 ? fields[1] : "main";
                if (fields.size() > 2) {
                    diags.push_back({DiagCode::sem_bad_section, lineno, 1, trimmed,
                                     "[bigrading NAME] takes at most one name"});
                    continue;
                }
                bigradings.push_back({name, "", 1, lineno, {}});
                section = Section::bigrading;
            } else {
                diags.push_back({DiagCode::sem_bad_section, lineno, 1, trimmed,
                                 "unknown section '" + kind + "'"});
            }
            continue;
        }

        auto fields = detail::split_ws(trimmed);
        if (section == Section::none && fields[0] == "truncation") {
            if (fields.size() != 2 || !detail::parse_int(fields[1], truncation) || truncation < 0) {
                diags.push_back({DiagCode::lex_bad_number, lineno, 1, trimmed,
                                 "truncation expects one non-negative integer"});
            } else {
                truncation_seen = true;
            }
            continue;
        }
        (void)truncation_seen;

        switch (section) {
            case Section::generators: {
                int deg = 0, wgt = 0;
                if (fields.size() != 3 || !detail::parse_int(fields[1], deg) ||
                    !detail::parse_int(fields[2], wgt)) {
                    diags.push_back({DiagCode::lex_bad_number, lineno, 1, trimmed,
                                     "generator lines are 'name degree weight'"});
                    break;
                }
                cur_alg->gens.push_back({fields[0], deg, wgt});
                break;
            }
            case Section::relations:
                cur_alg->relation_lines.push_back({lineno, trimmed});
                break;
            case Section::differential:
            case Section::morphism:
            case Section::homotopy: {
                auto eq = trimmed.find('=');
                if (section == Section::morphism) {
                    auto& m = morphisms.back();
                    if (fields[0] == "source" && fields.size() == 2) {
                        m.source = fields[1];
                        break;
                    }
                    if (fields[0] == "target" && fields.size() == 2) {
                        m.target = fields[1];
                        break;
                    }
                }
                if (section == Section::homotopy) {
                    auto& h = homotopies.back();
                    if (fields[0] == "from" && fields.size() == 2) {
                        h.from = fields[1];
                        break;
                    }
                    if (fields[0] == "to" && fields.size() == 2) {
                        h.to = fields[1];
                        break;
                    }
                    if (fields[0] == "r" && fields.size() == 2) {
                        if (!detail::parse_int(fields[1], h.r)) {
                            diags.push_back({DiagCode::lex_bad_number, lineno, 1, trimmed,
                                             "r expects an integer"});
                        } else {
                            h.r_set = true;
                        }
                        break;
                    }
                }
                if (eq == std::string::npos) {
                    diags.push_back({DiagCode::syntax_unexpected_token, lineno, 1, trimmed,
                                     "expected 'name = expression'"});
                    break;
                }
                std::string lhs = trimmed.substr(0, eq);
                std::string rhs = trimmed.substr(eq + 1);
                auto lhs_fields = detail::split_ws(lhs);
                if (lhs_fields.size() != 1) {
                    diags.push_back({DiagCode::syntax_unexpected_token, lineno, 1, lhs,
                                     "left side must be a single generator name"});
                    break;
                }
                if (section == Section::differential)
                    cur_alg->d_lines.push_back({lineno, lhs_fields[0], rhs});
                else if (section == Section::morphism)
                    morphisms.back().image_lines.push_back({lineno, lhs_fields[0], rhs});
                else
                    homotopies.back().image_lines.push_back({lineno, lhs_fields[0], rhs});
                break;
            }
            case Section::bigrading: {
                auto& b = bigradings.back();
                if (fields[0] == "algebra" && fields.size() == 2) {
                    b.algebra = fields[1];
                    break;
                }
                if (fields[0] == "r" && fields.size() == 2) {
                    if (!detail::parse_int(fields[1], b.r))
                        diags.push_back({DiagCode::lex_bad_number, lineno, 1, trimmed, "r expects an integer"});
                    break;
                }
                auto colon = trimmed.find(':');
                if (colon == std::string::npos) {
                    diags.push_back({DiagCode::syntax_unexpected_token, lineno, 1, trimmed,
                                     "expected 'p q : element, element, ...'"});
                    break;
                }
                auto head = detail::split_ws(trimmed.substr(0, colon));
                int c = 0, q = 0;
                if (head.size() != 2 || !detail::parse_int(head[0], c) || !detail::parse_int(head[1], q)) {
                    diags.push_back({DiagCode::lex_bad_number, lineno, 1, trimmed,
                                     "bidegree head must be two integers"});
                    break;
                }
                b.piece_lines.push_back({lineno, c, q, trimmed.substr(colon + 1)});
                break;
            }
            case Section::none:
                diags.push_back({DiagCode::sem_bad_section, lineno, 1, trimmed,
                                 "content outside of any section"});
                break;
        }
    }

    if (!diags.empty()) return res;

    // ---- phase 2: semantic build ----
    DefinitionFile out;
    out.truncation = truncation;
    for (const auto& raw : algebras) {
        if (out.algebras.count(raw.name)) {
            diags.push_back({DiagCode::sem_duplicate_name, raw.line, 1, raw.name,
                             "algebra '" + raw.name + "' is declared twice"});
            continue;
        }
        // free carrier for evaluating relation/d expressions
        std::vector<Element> zero_diffs;
        for (const auto& g : raw.gens) zero_diffs.push_back(Element{g.degree + 1, {}});
        PresentationPtr free_carrier;
        try {
            free_carrier = make_presentation(raw.gens, {}, zero_diffs, truncation);
        } catch (const FdgaError& e) {
            diags.push_back({DiagCode::sem_validation, raw.line, 1, raw.name, e.what()});
            continue;
        }
        std::vector<Element> rels;
        bool bad = false;
        for (const auto& [ln, expr] : raw.relation_lines) {
            auto e = eval_element(expr, ln, free_carrier, diags);
            if (!e) {
                bad = true;
                continue;
            }
            rels.push_back(*e);
        }
        std::vector<Element> dif = zero_diffs;
        for (const auto& [ln, gname, expr] : raw.d_lines) {
            int gi = free_carrier->gen_index(gname);
            if (gi < 0) {
                diags.push_back({DiagCode::sem_undeclared_name, ln, 1, gname,
                                 "'" + gname + "' is not a generator of this algebra"});
                bad = true;
                continue;
            }
            auto e = eval_element(expr, ln, free_carrier, diags);
            if (!e) {
                bad = true;
                continue;
            }
            if (!e->is_zero() && e->degree != raw.gens[gi].degree + 1) {
                diags.push_back({DiagCode::sem_wrong_degree, ln, 1, gname,
                                 "d(" + gname + ") must have degree " +
                                     std::to_string(raw.gens[gi].degree + 1)});
                bad = true;
                continue;
            }
            dif[gi] = *e;
        }
        if (bad) continue;
        try {
            out.algebras[raw.name] = make_presentation(raw.gens, rels, dif, truncation);
            out.algebra_order.push_back(raw.name);
        } catch (const FdgaError& e) {
            diags.push_back({DiagCode::sem_validation, raw.line, 1, raw.name, e.what()});
        }
    }
    if (!diags.empty()) return res;

    for (const auto& raw : morphisms) {
        if (out.morphism(raw.name)) {
            diags.push_back({DiagCode::sem_duplicate_name, raw.line, 1, raw.name,
                             "morphism '" + raw.name + "' is declared twice"});
            continue;
        }
        if (raw.source.empty() || raw.target.empty()) {
            diags.push_back({DiagCode::sem_missing_field, raw.line, 1, raw.name,
                             "morphism blocks need 'source' and 'target' lines"});
            continue;
        }
        auto src = out.algebra(raw.source);
        auto tgt = out.algebra(raw.target);
        if (!src || !tgt) {
            diags.push_back({DiagCode::sem_undeclared_name, raw.line, 1,
                             src ? raw.target : raw.source, "morphism references an undeclared algebra"});
            continue;
        }
        DgaMorphism f{*src, *tgt, {}};
        for (const auto& g : (*src)->generators()) f.images.push_back(Element{g.degree, {}});
        bool bad = false;
        for (const auto& [ln, gname, expr] : raw.image_lines) {
            int gi = (*src)->gen_index(gname);
            if (gi < 0) {
                diags.push_back({DiagCode::sem_undeclared_name, ln, 1, gname,
                                 "'" + gname + "' is not a generator of " + raw.source});
                bad = true;
                continue;
            }
            auto e = eval_element(expr, ln, *tgt, diags);
            if (!e) {
                bad = true;
                continue;
            }
            Element img = (*tgt)->normal_form(*e);
            if (img.is_zero()) img.degree = (*src)->generators()[gi].degree;
            if (!img.is_zero() && img.degree != (*src)->generators()[gi].degree) {
                diags.push_back({DiagCode::sem_wrong_degree, ln, 1, gname,
                                 "image must have degree " +
                                     std::to_string((*src)->generators()[gi].degree)});
                bad = true;
                continue;
            }
            f.images[gi] = img;
        }
        if (bad) continue;
        if (auto viol = check_morphism(f)) {
            diags.push_back({DiagCode::sem_validation, raw.line, 1, raw.name,
                             "morphism '" + raw.name + "' is invalid: " + viol->what});
            continue;
        }
        out.morphisms.push_back({raw.name, raw.source, raw.target, std::move(f)});
    }
    if (!diags.empty()) return res;

    for (const auto& raw : homotopies) {
        if (raw.from.empty() || raw.to.empty()) {
            diags.push_back({DiagCode::sem_missing_field, raw.line, 1, raw.name,
                             "homotopy blocks need 'from' and 'to' lines"});
            continue;
        }
        auto f = out.morphism(raw.from);
        auto g = out.morphism(raw.to);
        if (!f || !g) {
            diags.push_back({DiagCode::sem_undeclared_name, raw.line, 1, f ? raw.to : raw.from,
                             "homotopy references an undeclared morphism"});
            continue;
        }
        if (f->source != g->source || f->target != g->target) {
            diags.push_back({DiagCode::sem_validation, raw.line, 1, raw.name,
                             "endpoints do not share source and target"});
            continue;
        }
        PresentationPtr src = f->morphism.source, tgt = f->morphism.target;
        PathMorphism h{src, tgt, raw.r, {}};
        for (const auto& gen : src->generators()) h.images.push_back(path_zero(tgt, raw.r, gen.degree));
        bool bad = false;
        for (const auto& [ln, gname, expr] : raw.image_lines) {
            int gi = src->gen_index(gname);
            if (gi < 0) {
                diags.push_back({DiagCode::sem_undeclared_name, ln, 1, gname,
                                 "'" + gname + "' is not a generator of the source"});
                bad = true;
                continue;
            }
            auto e = eval_path(expr, ln, tgt, raw.r, diags);
            if (!e) {
                bad = true;
                continue;
            }
            if (!e->is_zero() && e->degree != src->generators()[gi].degree) {
                diags.push_back({DiagCode::sem_wrong_degree, ln, 1, gname,
                                 "path image must have degree " +
                                     std::to_string(src->generators()[gi].degree)});
                bad = true;
                continue;
            }
            h.images[gi] = *e;
        }
        if (bad) continue;
        out.homotopies.push_back({raw.name, raw.from, raw.to, raw.r, std::move(h)});
    }

    for (const auto& raw : bigradings) {
        std::string alg_name = raw.algebra.empty()
                                   ? (out.algebra_order.size() == 1 ? out.algebra_order[0] : "")
                                   : raw.algebra;
        auto alg = out.algebra(alg_name);
        if (!alg) {
            diags.push_back({DiagCode::sem_undeclared_name, raw.line, 1, raw.algebra,
                             "bigrading references an undeclared algebra"});
            continue;
        }
        Bigrading big;
        big.r = raw.r;
        std::map<int, std::map<int, std::vector<Vec>>> pieces;  // degree -> level -> vectors
        bool bad = false;
        for (const auto& [ln, c, q, exprs] : raw.piece_lines) {
            int n = c + q;
            int level = -c;
            std::vector<Token> toks;
            if (!lex_line(exprs, ln, toks, diags)) {
                bad = true;
                continue;
            }
            std::size_t pos = 0;
            while (toks[pos].kind != Tok::end) {
                ExprParser p(toks, pos, ln, *alg, 0, false, diags);
                auto v = p.parse_expr();
                if (!v) {
                    bad = true;
                    break;
                }
                pos = p.position();
                Element e = (*alg)->normal_form(evaluate(*v, 0));
                if (e.is_zero()) {
                    if (toks[pos].kind == Tok::comma) ++pos;
                    continue;
                }
                if (e.degree != n) {
                    diags.push_back({DiagCode::sem_wrong_degree, ln, 1, "",
                                     "element degree differs from p+q = " + std::to_string(n)});
                    bad = true;
                    break;
                }
                pieces[n][level].push_back((*alg)->coords(e, n));
                if (toks[pos].kind == Tok::comma) ++pos;
            }
        }
        if (bad) continue;
        for (auto& [n, by_level] : pieces) {
            std::vector<std::pair<int, Subspace>> out_pieces;
            for (auto& [lv, vs] : by_level)
                out_pieces.push_back({lv, Subspace::span(std::move(vs), (*alg)->dim(n))});
            big.summands[n] = std::move(out_pieces);
        }
        out.bigradings.push_back({raw.name, alg_name, raw.r, std::move(big)});
    }

    if (!diags.empty()) return res;
    res.file = std::move(out);
    return res;
}

// ---- printer -------------------------------------------------------------

inline std::string print_path_element(const AlgebraPresentation& alg, const PathElement& x) {
    if (x.is_zero()) return "0";
    std::string s;
    auto append = [&](const std::string& term) {
        if (!s.empty()) s += " + ";
        s += term;
    };
    for (const auto& [k, e] : x.t_part) {
        std::string t = k == 0 ? "" : (k == 1 ? "t" : "t^" + std::to_string(k));
        std::string coeff = "(" + alg.element_str(e) + ")";
        append(t.empty() ? coeff : t + "*" + coeff);
    }
    for (const auto& [k, e] : x.dt_part) {
        std::string t = k == 0 ? "dt" : (k == 1 ? "t*dt" : "t^" + std::to_string(k) + "*dt");
        append(t + "*(" + alg.element_str(e) + ")");
    }
    return s;
}

/// Canonical text rendering; parse(print(parse(text))) is a fixed point.
inline std::string print(const DefinitionFile& f) {
    std::ostringstream os;
    os << "truncation " << f.truncation << "\n";
    for (const auto& name : f.algebra_order) {
        const auto& a = *f.algebras.at(name);
        os << "\n[algebra " << name << "]\n";
        os << "[generators]\n";
        for (const auto& g : a.generators())
            os << g.name << " " << g.degree << " " << g.weight << "\n";
        if (!a.relations().empty()) {
            os << "[relations]\n";
            for (const auto& r : a.relations()) os << a.element_str(r) << "\n";
        }
        bool any_d = false;
        for (std::size_t i = 0; i < a.n_gens(); ++i)
            if (!a.gen_differential(i).is_zero()) any_d = true;
        if (any_d) {
            os << "[d]\n";
            for (std::size_t i = 0; i < a.n_gens(); ++i)
                if (!a.gen_differential(i).is_zero())
                    os << a.generators()[i].name << " = " << a.element_str(a.gen_differential(i)) << "\n";
        }
    }
    for (const auto& m : f.morphisms) {
        os << "\n[morphism " << m.name << "]\n";
        os << "source " << m.source << "\n";
        os << "target " << m.target << "\n";
        const auto& src = *m.morphism.source;
        const auto& tgt = *m.morphism.target;
        for (std::size_t i = 0; i < src.n_gens(); ++i)
            os << src.generators()[i].name << " = " << tgt.element_str(m.morphism.images[i]) << "\n";
    }
    for (const auto& h : f.homotopies) {
        os << "\n[homotopy " << h.name << "]\n";
        os << "from " << h.from << "\n";
        os << "to " << h.to << "\n";
        os << "r " << h.r << "\n";
        const auto& src = *h.homotopy.source;
        const auto& tgt = *h.homotopy.target;
        for (std::size_t i = 0; i < src.n_gens(); ++i)
            os << src.generators()[i].name << " = " << print_path_element(tgt, h.homotopy.images[i])
               << "\n";
    }
    for (const auto& b : f.bigradings) {
        os << "\n[bigrading " << b.name << "]\n";
        os << "algebra " << b.algebra << "\n";
        os << "r " << b.r << "\n";
        const auto& alg = *f.algebras.at(b.algebra);
        for (const auto& [n, pieces] : b.bigrading.summands)
            for (const auto& [lv, s] : pieces) {
                if (s.dim() == 0) continue;
                os << -lv << " " << n + lv << " :";
                bool first = true;
                for (const auto& v : s.basis()) {
                    os << (first ? " " : ", ") << alg.element_str(alg.from_coords(v, n));
                    first = false;
                }
                os << "\n";
            }
    }
    return os.str();
}

}  // namespace dsl
}  // namespace fdga
