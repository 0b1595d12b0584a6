#include "eclkit/syntax.hpp"

#include "eclkit/errors.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <vector>

namespace eclkit {

namespace {

enum class Tok {
    Int, XVar, YVar, CVar, ExpName,
    Plus, Minus, Star, Caret, LParen, RParen,
    Amp, Pipe, Bang, Eq, Ne, Lt, Le, Gt, Ge,
    End,
};

const char* tok_name(Tok t) {
    switch (t) {
    case Tok::Int: return "integer";
    case Tok::XVar: return "variable";
    case Tok::YVar: return "'y'";
    case Tok::CVar: return "constant name";
    case Tok::ExpName: return "'E'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Caret: return "'^'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Bang: return "'!'";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::End: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind;
    mpz_class value; // Int, or variable number for XVar/CVar
    int line, col;
};

std::vector<Token> lex(const std::string& text, int line_base, int col_base) {
    std::vector<Token> out;
    int line = line_base, col = col_base;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        char ch = text[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            advance(1);
            continue;
        }
        if (ch == '#') { // comment to end of line
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        int tl = line, tc = col;
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            mpz_class v(text.substr(i, j - i));
            advance(j - i);
            out.push_back({Tok::Int, std::move(v), tl, tc});
            continue;
        }
        if (ch == 'x' || ch == 'c') {
            size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j == i + 1) {
                throw ParseError(tl, tc, std::string("expected digits after '") + ch + "'");
            }
            mpz_class v(text.substr(i + 1, j - i - 1));
            if (sgn(v) <= 0) {
                throw ParseError(tl, tc, "variable numbers start at 1");
            }
            advance(j - i);
            out.push_back({ch == 'x' ? Tok::XVar : Tok::CVar, std::move(v), tl, tc});
            continue;
        }
        if (ch == 'y') {
            advance(1);
            out.push_back({Tok::YVar, 0, tl, tc});
            continue;
        }
        if (ch == 'E') {
            advance(1);
            out.push_back({Tok::ExpName, 0, tl, tc});
            continue;
        }
        auto push1 = [&](Tok t) {
            advance(1);
            out.push_back({t, 0, tl, tc});
        };
        switch (ch) {
        case '+': push1(Tok::Plus); continue;
        case '-': push1(Tok::Minus); continue;
        case '*': push1(Tok::Star); continue;
        case '^': push1(Tok::Caret); continue;
        case '(': push1(Tok::LParen); continue;
        case ')': push1(Tok::RParen); continue;
        case '&': push1(Tok::Amp); continue;
        case '|': push1(Tok::Pipe); continue;
        case '=': push1(Tok::Eq); continue;
        case '!':
            if (i + 1 < text.size() && text[i + 1] == '=') {
                advance(2);
                out.push_back({Tok::Ne, 0, tl, tc});
            } else {
                push1(Tok::Bang);
            }
            continue;
        case '<':
            if (i + 1 < text.size() && text[i + 1] == '=') {
                advance(2);
                out.push_back({Tok::Le, 0, tl, tc});
            } else {
                push1(Tok::Lt);
            }
            continue;
        case '>':
            if (i + 1 < text.size() && text[i + 1] == '=') {
                advance(2);
                out.push_back({Tok::Ge, 0, tl, tc});
            } else {
                push1(Tok::Gt);
            }
            continue;
        default:
            throw ParseError(tl, tc, std::string("unexpected character '") + ch + "'");
        }
    }
    out.push_back({Tok::End, 0, line, col});
    return out;
}

bool tokens_use_y(const std::vector<Token>& toks) {
    return std::any_of(toks.begin(), toks.end(),
                       [](const Token& t) { return t.kind == Tok::YVar; });
}

class Parser {
public:
    Parser(std::vector<Token> toks, bool y_first)
        : toks_(std::move(toks)), y_first_(y_first) {}

    const Token& peek() const { return toks_[pos_]; }
    const Token& get() { return toks_[pos_++]; }
    size_t mark() const { return pos_; }
    void rewind(size_t m) { pos_ = m; }

    bool accept(Tok t) {
        if (peek().kind == t) {
            ++pos_;
            return true;
        }
        return false;
    }

    Token expect(Tok t, const std::string& context) {
        if (peek().kind != t) {
            fail(std::string("expected ") + tok_name(t) + " " + context);
        }
        return get();
    }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        throw ParseError(t.line, t.col,
                         msg + ", found " + tok_name(t.kind));
    }

    int var_index(const Token& t) const {
        long k = 0;
        if (t.kind == Tok::YVar) return 1;
        if (!mpz_fits_slong_p(t.value.get_mpz_t())) {
            throw ParseError(t.line, t.col, "variable number too large");
        }
        k = mpz_get_si(t.value.get_mpz_t());
        if (t.kind == Tok::XVar) return static_cast<int>(k) + (y_first_ ? 1 : 0);
        return static_cast<int>(k); // CVar
    }

    ExpTerm parse_term_all() {
        ExpTerm t = parse_sum();
        if (peek().kind != Tok::End) fail("expected end of expression");
        return t;
    }

    ExpTerm parse_sum() {
        std::vector<ExpTerm> parts;
        bool negate = accept(Tok::Minus);
        ExpTerm first = parse_prod();
        parts.push_back(negate ? -first : first);
        for (;;) {
            if (accept(Tok::Plus)) {
                parts.push_back(parse_prod());
            } else if (accept(Tok::Minus)) {
                parts.push_back(-parse_prod());
            } else {
                break;
            }
        }
        if (parts.size() == 1) return parts[0];
        return ExpTerm::sum(std::move(parts));
    }

    ExpTerm parse_prod() {
        std::vector<ExpTerm> factors;
        factors.push_back(parse_pow());
        while (accept(Tok::Star)) factors.push_back(parse_pow());
        if (factors.size() == 1) return factors[0];
        return ExpTerm::product(std::move(factors));
    }

    ExpTerm parse_pow() {
        ExpTerm base = parse_atom();
        if (accept(Tok::Caret)) {
            Token e = expect(Tok::Int, "after '^'");
            return ExpTerm::power(std::move(base), e.value);
        }
        return base;
    }

    ExpTerm parse_atom() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Int: {
            Token v = get();
            return ExpTerm::constant(v.value);
        }
        case Tok::XVar:
        case Tok::YVar:
        case Tok::CVar: {
            Token v = get();
            return ExpTerm::variable(var_index(v));
        }
        case Tok::ExpName: {
            get();
            expect(Tok::LParen, "after 'E'");
            ExpTerm arg = parse_sum();
            expect(Tok::RParen, "to close 'E('");
            return ExpTerm::exp(std::move(arg));
        }
        case Tok::LParen: {
            get();
            ExpTerm inner = parse_sum();
            expect(Tok::RParen, "to close '('");
            return inner;
        }
        default:
            fail("expected integer, variable, 'E', or '('");
        }
    }

    ConstraintFormula parse_formula_all() {
        ConstraintFormula f = parse_or();
        if (peek().kind != Tok::End) fail("expected end of formula");
        return f;
    }

    ConstraintFormula parse_or() {
        ConstraintFormula f = parse_and();
        while (accept(Tok::Pipe)) {
            f = ConstraintFormula::disj(std::move(f), parse_and());
        }
        return f;
    }

    ConstraintFormula parse_and() {
        ConstraintFormula f = parse_unary();
        while (accept(Tok::Amp)) {
            f = ConstraintFormula::conj(std::move(f), parse_unary());
        }
        return f;
    }

    ConstraintFormula parse_unary() {
        if (accept(Tok::Bang)) return ConstraintFormula::negation(parse_unary());
        if (peek().kind == Tok::LParen) {
            // '(' may open a parenthesized formula or a parenthesized term
            // inside a comparison; try the formula reading first.
            size_t m = mark();
            try {
                get();
                ConstraintFormula inner = parse_or();
                expect(Tok::RParen, "to close '('");
                return inner;
            } catch (const ParseError&) {
                rewind(m);
            }
        }
        return parse_comparison();
    }

    ConstraintFormula parse_comparison() {
        ExpTerm lhs = parse_sum();
        Tok rel = peek().kind;
        switch (rel) {
        case Tok::Eq:
        case Tok::Ne:
        case Tok::Lt:
        case Tok::Le:
        case Tok::Gt:
        case Tok::Ge:
            get();
            break;
        default:
            fail("expected a relation ('=', '!=', '<', '<=', '>', '>=')");
        }
        ExpTerm rhs = parse_sum();
        switch (rel) {
        case Tok::Eq: return ConstraintFormula::atom(lhs, Relation::Eq, rhs);
        case Tok::Ne: return ConstraintFormula::atom(lhs, Relation::Ne, rhs);
        case Tok::Lt: return ConstraintFormula::atom(lhs, Relation::Lt, rhs);
        case Tok::Le: return ConstraintFormula::atom(lhs, Relation::Le, rhs);
        case Tok::Gt: return ConstraintFormula::atom(rhs, Relation::Lt, lhs);
        default: return ConstraintFormula::atom(rhs, Relation::Le, lhs);
        }
    }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    bool y_first_;
};

} // namespace

ExpTerm parse_term(const std::string& text, VarNaming* naming_out) {
    std::vector<Token> toks = lex(text, 1, 1);
    bool y_first = tokens_use_y(toks);
    if (naming_out) *naming_out = y_first ? VarNaming::YFirst : VarNaming::XNumbered;
    Parser p(std::move(toks), y_first);
    return p.parse_term_all();
}

ConstraintFormula parse_formula(const std::string& text) {
    std::vector<Token> toks = lex(text, 1, 1);
    bool y_first = tokens_use_y(toks);
    Parser p(std::move(toks), y_first);
    return p.parse_formula_all();
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
    size_t h = s.find('#');
    return h == std::string::npos ? s : s.substr(0, h);
}

} // namespace

KhovanskiiSystem parse_system(const std::string& text, VarNaming* naming_out,
                              const Limits& limits) {
    // Split into equation chunks, remembering source positions.
    struct Chunk {
        std::string text;
        int line, col;
    };
    std::vector<Chunk> chunks;
    std::optional<long> declared_vars;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string body = strip_comment(raw);
        std::string t = trim(body);
        if (t.empty()) continue;
        if (!declared_vars && chunks.empty() && t.rfind("vars", 0) == 0) {
            size_t colon = t.find(':');
            if (colon == std::string::npos) {
                throw ParseError(line_no, 1, "expected ':' after 'vars'");
            }
            std::string num = trim(t.substr(colon + 1));
            if (num.empty() ||
                !std::all_of(num.begin(), num.end(),
                             [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
                throw ParseError(line_no, 1, "expected a variable count after 'vars:'");
            }
            declared_vars = std::stol(num);
            if (*declared_vars < 1) {
                throw ParseError(line_no, 1, "variable count must be >= 1");
            }
            continue;
        }
        // split the line on ';'
        size_t start = 0;
        while (start <= body.size()) {
            size_t semi = body.find(';', start);
            std::string piece = body.substr(
                start, semi == std::string::npos ? std::string::npos : semi - start);
            if (!trim(piece).empty()) {
                chunks.push_back({piece, line_no, static_cast<int>(start) + 1});
            }
            if (semi == std::string::npos) break;
            start = semi + 1;
        }
    }
    if (chunks.empty()) throw ParseError(1, 1, "empty system: no equations found");

    std::vector<std::vector<Token>> token_lists;
    bool y_first = false;
    for (const auto& c : chunks) {
        token_lists.push_back(lex(c.text, c.line, c.col));
        y_first = y_first || tokens_use_y(token_lists.back());
    }
    if (naming_out) *naming_out = y_first ? VarNaming::YFirst : VarNaming::XNumbered;

    std::vector<CanonicalPoly> equations;
    int max_var = 0;
    for (auto& toks : token_lists) {
        Parser p(std::move(toks), y_first);
        ExpTerm t = p.parse_term_all();
        max_var = std::max(max_var, t.max_variable());
        equations.push_back(normalize(t, limits));
    }

    long n = declared_vars ? *declared_vars : max_var;
    if (n != static_cast<long>(equations.size()) || max_var > n) {
        throw ParseError(chunks[0].line, chunks[0].col,
                         "system is not square: " + std::to_string(equations.size()) +
                             " equation(s) in " + std::to_string(std::max<long>(n, max_var)) +
                             " variable(s)");
    }
    return KhovanskiiSystem(std::move(equations), limits);
}

Interval parse_interval(const std::string& text, Precision prec) {
    size_t open = text.find('[');
    size_t comma = text.find(',', open == std::string::npos ? 0 : open);
    size_t close = text.find(']', comma == std::string::npos ? 0 : comma);
    if (open == std::string::npos || comma == std::string::npos ||
        close == std::string::npos) {
        throw DomainError("expected interval syntax \"[lo, hi]\": '" + text + "'");
    }
    std::string lo = trim(text.substr(open + 1, comma - open - 1));
    std::string hi = trim(text.substr(comma + 1, close - comma - 1));
    if (lo.empty() || hi.empty()) {
        throw DomainError("expected interval syntax \"[lo, hi]\": '" + text + "'");
    }
    return Interval::from_endpoints(lo, hi, prec);
}

IntervalBox parse_box(const std::string& text, Precision prec) {
    IntervalBox box;
    size_t start = 0;
    while (start < text.size()) {
        size_t semi = text.find(';', start);
        std::string piece =
            text.substr(start, semi == std::string::npos ? std::string::npos
                                                         : semi - start);
        if (!trim(piece).empty()) box.push_back(parse_interval(piece, prec));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    if (box.empty()) throw DomainError("empty box specification");
    return box;
}

namespace {

std::string var_name(int index, VarNaming naming) {
    switch (naming) {
    case VarNaming::XNumbered: return "x" + std::to_string(index);
    case VarNaming::YFirst:
        return index == 1 ? "y" : "x" + std::to_string(index - 1);
    case VarNaming::CNumbered: return "c" + std::to_string(index);
    }
    return "x" + std::to_string(index);
}

// sign-split rendering: (is_negative, body without sign)
struct Signed {
    bool neg = false;
    std::string body;
};

std::string join_signed(const std::vector<Signed>& parts) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i == 0) {
            out += parts[i].neg ? "-" : "";
        } else {
            out += parts[i].neg ? " - " : " + ";
        }
        out += parts[i].body;
    }
    return out;
}

std::string term_factor(const ExpTerm& t, VarNaming naming);
Signed term_signed(const ExpTerm& t, VarNaming naming);

std::string term_sum(const ExpTerm& t, VarNaming naming) {
    if (t.kind() != ExpTerm::Kind::Sum) {
        Signed s = term_signed(t, naming);
        return (s.neg ? "-" : "") + s.body;
    }
    std::vector<Signed> parts;
    for (const auto& c : t.children()) parts.push_back(term_signed(c, naming));
    if (parts.empty()) return "0";
    return join_signed(parts);
}

Signed term_signed(const ExpTerm& t, VarNaming naming) {
    switch (t.kind()) {
    case ExpTerm::Kind::Constant: {
        Signed s;
        mpz_class v = t.constant_value();
        s.neg = sgn(v) < 0;
        s.body = mpz_class(abs(v)).get_str();
        return s;
    }
    case ExpTerm::Kind::Product: {
        Signed s;
        std::vector<std::string> factors;
        for (size_t i = 0; i < t.children().size(); ++i) {
            const ExpTerm& f = t.children()[i];
            if (i == 0 && f.kind() == ExpTerm::Kind::Constant) {
                mpz_class v = f.constant_value();
                s.neg = sgn(v) < 0;
                mpz_class a = abs(v);
                if (a != 1 || t.children().size() == 1) factors.push_back(a.get_str());
                continue;
            }
            factors.push_back(term_factor(f, naming));
        }
        if (factors.empty()) factors.push_back("1");
        for (size_t i = 0; i < factors.size(); ++i) {
            if (i) s.body += "*";
            s.body += factors[i];
        }
        return s;
    }
    default: {
        Signed s;
        s.body = term_factor(t, naming);
        return s;
    }
    }
}

std::string term_factor(const ExpTerm& t, VarNaming naming) {
    switch (t.kind()) {
    case ExpTerm::Kind::Constant: {
        const mpz_class& v = t.constant_value();
        return sgn(v) < 0 ? "(" + v.get_str() + ")" : v.get_str();
    }
    case ExpTerm::Kind::Variable:
        return var_name(t.variable_index(), naming);
    case ExpTerm::Kind::Sum:
        return "(" + term_sum(t, naming) + ")";
    case ExpTerm::Kind::Product:
        return "(" + term_sum(t, naming) + ")";
    case ExpTerm::Kind::Power: {
        const ExpTerm& base = t.children()[0];
        std::string b = term_factor(base, naming);
        if (base.kind() == ExpTerm::Kind::Power) b = "(" + b + ")";
        return b + "^" + t.exponent().get_str();
    }
    case ExpTerm::Kind::Exp:
        return "E(" + term_sum(t.children()[0], naming) + ")";
    }
    return "?";
}

Signed mono_signed(const Monomial& m, VarNaming naming) {
    Signed s;
    s.neg = sgn(m.coeff) < 0;
    mpz_class a = abs(m.coeff);
    std::vector<std::string> factors;
    if (a != 1 || (m.powers.empty() && m.atoms.empty())) {
        factors.push_back(a.get_str());
    }
    for (const auto& [var, e] : m.powers) {
        std::string f = var_name(var, naming);
        if (e != 1) f += "^" + std::to_string(e);
        factors.push_back(std::move(f));
    }
    for (const auto& atom : m.atoms) {
        std::string f = "E(" + print_poly(*atom.arg, naming) + ")";
        if (atom.mult != 1) f += "^" + atom.mult.get_str();
        factors.push_back(std::move(f));
    }
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i) s.body += "*";
        s.body += factors[i];
    }
    return s;
}

} // namespace

std::string print_term(const ExpTerm& t, VarNaming naming) {
    return term_sum(t, naming);
}

std::string print_poly(const CanonicalPoly& p, VarNaming naming) {
    if (p.is_zero()) return "0";
    std::vector<Signed> parts;
    for (const auto& m : p.monomials()) parts.push_back(mono_signed(m, naming));
    return join_signed(parts);
}

std::string print_system(const KhovanskiiSystem& s, VarNaming naming) {
    std::string out = "vars: " + std::to_string(s.dimension()) + "\n";
    for (const auto& f : s.equations()) out += print_poly(f, naming) + "\n";
    return out;
}

std::string print_system_inline(const KhovanskiiSystem& s, VarNaming naming) {
    std::string out;
    for (size_t i = 0; i < s.equations().size(); ++i) {
        if (i) out += "; ";
        out += print_poly(s.equations()[i], naming);
    }
    return out;
}

namespace {

const char* rel_text(Relation r) {
    switch (r) {
    case Relation::Eq: return " = ";
    case Relation::Ne: return " != ";
    case Relation::Lt: return " < ";
    case Relation::Le: return " <= ";
    }
    return " ? ";
}

std::string formula_text(const ConstraintFormula& f, VarNaming naming, int parent) {
    // parent precedence: 0 = or, 1 = and
    switch (f.kind()) {
    case ConstraintFormula::Kind::Atom:
        return print_term(f.lhs(), naming) + rel_text(f.relation()) +
               print_term(f.rhs(), naming);
    case ConstraintFormula::Kind::And:
        return formula_text(f.left(), naming, 1) + " & " +
               formula_text(f.right(), naming, 1);
    case ConstraintFormula::Kind::Or: {
        std::string s = formula_text(f.left(), naming, 0) + " | " +
                        formula_text(f.right(), naming, 0);
        return parent >= 1 ? "(" + s + ")" : s;
    }
    case ConstraintFormula::Kind::Not:
        return "!(" + formula_text(f.left(), naming, 0) + ")";
    }
    return "?";
}

} // namespace

std::string print_formula(const ConstraintFormula& f, VarNaming naming) {
    return formula_text(f, naming, 0);
}

} // namespace eclkit
