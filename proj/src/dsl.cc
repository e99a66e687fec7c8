// Copyright 2026 The gptlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gptlab/dsl.h"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace gpt {

std::string to_string(DslErrorKind k) {
    switch (k) {
        case DslErrorKind::Lexical:
            return "lexical";
        case DslErrorKind::Syntax:
            return "syntax";
        case DslErrorKind::UnknownIdentifier:
            return "unknown-identifier";
        case DslErrorKind::UnknownGate:
            return "unknown-gate";
        case DslErrorKind::TypeMismatch:
            return "type-mismatch";
        case DslErrorKind::UnboundVariable:
            return "unbound-variable";
        case DslErrorKind::DuplicateVariable:
            return "duplicate-variable";
        case DslErrorKind::InvalidArgument:
            return "invalid-argument";
        case DslErrorKind::Wiring:
            return "wiring";
        case DslErrorKind::CyclicWiring:
            return "cyclic-wiring";
    }
    return "unknown";
}

DslError::DslError(DslErrorKind kind, SourcePos pos, const std::string &msg)
    : std::invalid_argument(std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + to_string(kind) +
                            " error: " + msg),
      kind(kind),
      pos(pos) {
}

// ---------------------------------------------------------------------------
// Expressions.

ExprPtr Expr::lit(long long v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Lit;
    e->value = v;
    return e;
}

ExprPtr Expr::var(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Var;
    e->name = std::move(name);
    return e;
}

ExprPtr Expr::unary(Kind k, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(a);
    return e;
}

ExprPtr Expr::binary(Kind k, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

namespace {

long long apply_op(Expr::Kind k, long long a, long long b) {
    switch (k) {
        case Expr::Kind::Not:
            return a == 0;
        case Expr::Kind::And:
            return a != 0 && b != 0;
        case Expr::Kind::Or:
            return a != 0 || b != 0;
        case Expr::Kind::Xor:
            return a ^ b;
        case Expr::Kind::Eq:
            return a == b;
        case Expr::Kind::Ne:
            return a != b;
        default:
            return 0;
    }
}

}  // namespace

long long Expr::eval(const std::vector<std::pair<std::string, long long>> &env) const {
    switch (kind) {
        case Kind::Lit:
            return value;
        case Kind::Var:
            for (const auto &[n, v] : env) {
                if (n == name) {
                    return v;
                }
            }
            throw DslError(DslErrorKind::UnboundVariable, {}, "variable '" + name + "' is not bound");
        case Kind::Not:
            return apply_op(kind, lhs->eval(env), 0);
        default:
            return apply_op(kind, lhs->eval(env), rhs->eval(env));
    }
}

bool expr_equal(const ExprPtr &a, const ExprPtr &b) {
    if (!a || !b) {
        return !a && !b;
    }
    return *a == *b;
}

bool operator==(const Expr &a, const Expr &b) {
    if (a.kind != b.kind) {
        return false;
    }
    switch (a.kind) {
        case Expr::Kind::Lit:
            return a.value == b.value;
        case Expr::Kind::Var:
            return a.name == b.name;
        default:
            return expr_equal(a.lhs, b.lhs) && expr_equal(a.rhs, b.rhs);
    }
}

size_t CircuitAST::device_count() const {
    size_t n = 0;
    for (const auto &s : stmts) {
        if (std::holds_alternative<Prepare>(s.node) || std::holds_alternative<Apply>(s.node) ||
            std::holds_alternative<Measure>(s.node)) {
            ++n;
        }
    }
    return n;
}

// ---------------------------------------------------------------------------
// Lexer.

namespace {

enum class Tok { Ident, Number, Sym, Newline, End };

struct Token {
    Tok kind;
    std::string text;
    SourcePos pos;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto is_ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
    while (i < src.size()) {
        char c = src[i];
        SourcePos pos{line, col};
        if (c == '\n') {
            out.push_back({Tok::Newline, "\n", pos});
            advance(1);
        } else if (c == ' ' || c == '\t' || c == '\r') {
            advance(1);
        } else if (c == '#') {
            while (i < src.size() && src[i] != '\n') {
                advance(1);
            }
        } else if (is_ident_start(c)) {
            size_t j = i;
            while (j < src.size() && (is_ident(src[j]) ||
                                      (src[j] == '-' && j + 1 < src.size() && is_ident_start(src[j + 1])))) {
                ++j;
            }
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), pos});
            advance(j - i);
        } else if (is_digit(c) || (c == '-' && i + 1 < src.size() && is_digit(src[i + 1]))) {
            size_t j = i + 1;
            while (j < src.size() && is_digit(src[j])) {
                ++j;
            }
            if (j < src.size() && src[j] == '/') {
                ++j;
                if (j >= src.size() || !is_digit(src[j])) {
                    throw DslError(DslErrorKind::Lexical, pos, "malformed rational literal");
                }
                while (j < src.size() && is_digit(src[j])) {
                    ++j;
                }
            }
            if (j < src.size() && (src[j] == '.' || src[j] == 'e' || src[j] == 'E')) {
                throw DslError(DslErrorKind::Lexical, pos, "floating-point literals are not allowed; use p/q");
            }
            out.push_back({Tok::Number, std::string(src.substr(i, j - i)), pos});
            advance(j - i);
        } else if (src.substr(i, 2) == "->" || src.substr(i, 2) == "==" || src.substr(i, 2) == "!=") {
            out.push_back({Tok::Sym, std::string(src.substr(i, 2)), pos});
            advance(2);
        } else if (c == '(' || c == ')' || c == ',' || c == ':' || c == ';') {
            out.push_back({Tok::Sym, std::string(1, c), pos});
            advance(1);
        } else {
            throw DslError(DslErrorKind::Lexical, pos, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::End, "", {line, col}});
    return out;
}

const std::set<std::string> kKeywords = {"theory", "system", "prepare", "apply", "measure", "aux",
                                         "accept", "post-select", "and", "or", "not", "xor"};

bool is_var_name(const std::string &s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) {
        return false;
    }
    for (char c : s) {
        if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_')) {
            return false;
        }
    }
    return !kKeywords.count(s);
}

// ---------------------------------------------------------------------------
// Parser.

class Parser {
   public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {
    }

    CircuitAST file() {
        CircuitAST ast;
        skip_separators();
        expect_keyword("theory");
        ast.theory = ident("theory name");
        end_statement();
        while (true) {
            skip_separators();
            const Token &t = peek();
            if (t.kind == Tok::End) {
                throw DslError(DslErrorKind::Syntax, t.pos, "missing accept clause");
            }
            if (t.kind != Tok::Ident) {
                throw DslError(DslErrorKind::Syntax, t.pos, "expected a statement, got '" + t.text + "'");
            }
            if (t.text == "accept") {
                ast.accept_pos = t.pos;
                next();
                ast.accept = expr();
                end_statement();
                skip_separators();
                if (peek().kind != Tok::End) {
                    throw DslError(DslErrorKind::Syntax, peek().pos, "statements after the accept clause");
                }
                return ast;
            }
            ast.stmts.push_back(statement());
            end_statement();
        }
    }

   private:
    const Token &peek() const {
        return toks_[i_];
    }
    const Token &next() {
        return toks_[i_++];
    }
    bool at_sym(const char *s) const {
        return peek().kind == Tok::Sym && peek().text == s;
    }
    bool at_keyword(const char *s) const {
        return peek().kind == Tok::Ident && peek().text == s;
    }
    void expect_sym(const char *s) {
        if (!at_sym(s)) {
            throw DslError(DslErrorKind::Syntax, peek().pos,
                           std::string("expected '") + s + "', got " + describe(peek()));
        }
        next();
    }
    void expect_keyword(const char *s) {
        if (!at_keyword(s)) {
            throw DslError(DslErrorKind::Syntax, peek().pos,
                           std::string("expected '") + s + "', got " + describe(peek()));
        }
        next();
    }
    static std::string describe(const Token &t) {
        switch (t.kind) {
            case Tok::End:
                return "end of input";
            case Tok::Newline:
                return "end of line";
            default:
                return "'" + t.text + "'";
        }
    }
    std::string ident(const char *what) {
        if (peek().kind != Tok::Ident || kKeywords.count(peek().text)) {
            throw DslError(DslErrorKind::Syntax, peek().pos, std::string("expected ") + what + ", got " + describe(peek()));
        }
        return next().text;
    }
    void skip_separators() {
        while (peek().kind == Tok::Newline || at_sym(";")) {
            next();
        }
    }
    void end_statement() {
        if (peek().kind == Tok::End || peek().kind == Tok::Newline || at_sym(";")) {
            return;
        }
        throw DslError(DslErrorKind::Syntax, peek().pos, "expected end of statement, got " + describe(peek()));
    }

    std::vector<std::string> names(const char *what) {
        std::vector<std::string> out;
        while (peek().kind == Tok::Ident && !kKeywords.count(peek().text)) {
            out.push_back(next().text);
        }
        if (out.empty()) {
            throw DslError(DslErrorKind::Syntax, peek().pos, std::string("expected ") + what + ", got " + describe(peek()));
        }
        return out;
    }

    Ctor ctor() {
        Ctor c;
        c.name = ident("constructor name");
        expect_sym("(");
        if (!at_sym(")")) {
            while (true) {
                if (peek().kind != Tok::Number) {
                    throw DslError(DslErrorKind::Syntax, peek().pos, "expected a rational argument, got " + describe(peek()));
                }
                const Token &t = next();
                try {
                    c.args.push_back(parse_rational(t.text));
                } catch (const std::exception &e) {
                    throw DslError(DslErrorKind::Lexical, t.pos, e.what());
                }
                if (at_sym(")")) {
                    break;
                }
                expect_sym(",");
            }
        }
        expect_sym(")");
        return c;
    }

    Stmt statement() {
        Stmt s;
        s.pos = peek().pos;
        const std::string kw = next().text;
        if (kw == "system" || kw == "aux") {
            std::string name = ident("wire name");
            expect_sym(":");
            std::string type = ident("system type");
            if (kw == "system") {
                s.node = SystemDecl{name, type};
            } else {
                s.node = AuxDecl{name, type};
            }
        } else if (kw == "prepare") {
            Prepare p;
            p.ctor = ctor();
            expect_sym("->");
            p.outputs = names("output wires");
            s.node = std::move(p);
        } else if (kw == "apply") {
            Apply a;
            a.gate = ident("gate name");
            a.inputs = names("input wires");
            expect_sym("->");
            a.outputs = names("output wires");
            s.node = std::move(a);
        } else if (kw == "measure") {
            Measure m;
            m.ctor = ctor();
            m.inputs = names("input wires");
            expect_sym("->");
            m.vars = names("outcome variables");
            for (const auto &v : m.vars) {
                if (v != "_" && !is_var_name(v)) {
                    throw DslError(DslErrorKind::Syntax, s.pos, "outcome variable '" + v + "' must be a lowercase identifier");
                }
            }
            s.node = std::move(m);
        } else if (kw == "post-select") {
            s.node = PostSelect{expr()};
        } else {
            throw DslError(DslErrorKind::Syntax, s.pos, "unknown statement '" + kw + "'");
        }
        return s;
    }

    ExprPtr expr() {
        if (peek().kind == Tok::End || peek().kind == Tok::Newline || at_sym(";")) {
            throw DslError(DslErrorKind::Syntax, peek().pos, "expected an expression, got " + describe(peek()));
        }
        return or_expr();
    }
    ExprPtr or_expr() {
        ExprPtr e = and_expr();
        while (at_keyword("or")) {
            next();
            e = Expr::binary(Expr::Kind::Or, e, and_expr());
        }
        return e;
    }
    ExprPtr and_expr() {
        ExprPtr e = not_expr();
        while (at_keyword("and")) {
            next();
            e = Expr::binary(Expr::Kind::And, e, not_expr());
        }
        return e;
    }
    ExprPtr not_expr() {
        if (at_keyword("not")) {
            next();
            return Expr::unary(Expr::Kind::Not, not_expr());
        }
        return cmp_expr();
    }
    ExprPtr cmp_expr() {
        ExprPtr e = xor_expr();
        while (at_sym("==") || at_sym("!=")) {
            auto k = next().text == "==" ? Expr::Kind::Eq : Expr::Kind::Ne;
            e = Expr::binary(k, e, xor_expr());
        }
        return e;
    }
    ExprPtr xor_expr() {
        ExprPtr e = atom();
        while (at_keyword("xor")) {
            next();
            e = Expr::binary(Expr::Kind::Xor, e, atom());
        }
        return e;
    }
    ExprPtr atom() {
        const Token &t = peek();
        if (at_sym("(")) {
            next();
            ExprPtr e = expr();
            expect_sym(")");
            return e;
        }
        if (t.kind == Tok::Number) {
            if (t.text.find('/') != std::string::npos || t.text[0] == '-') {
                throw DslError(DslErrorKind::Syntax, t.pos, "expression literals are non-negative integers");
            }
            next();
            try {
                return Expr::lit(std::stoll(t.text));
            } catch (const std::out_of_range &) {
                throw DslError(DslErrorKind::Lexical, t.pos, "integer literal out of range");
            }
        }
        if (t.kind == Tok::Ident && is_var_name(t.text)) {
            next();
            return Expr::var(t.text);
        }
        throw DslError(DslErrorKind::Syntax, t.pos, "expected a variable, literal or '(', got " + describe(t));
    }

    std::vector<Token> toks_;
    size_t i_ = 0;
};

int precedence(Expr::Kind k) {
    switch (k) {
        case Expr::Kind::Or:
            return 1;
        case Expr::Kind::And:
            return 2;
        case Expr::Kind::Not:
            return 3;
        case Expr::Kind::Eq:
        case Expr::Kind::Ne:
            return 4;
        case Expr::Kind::Xor:
            return 5;
        default:
            return 6;
    }
}

std::string print_expr(const Expr &e, int min_prec) {
    std::string s;
    const int p = precedence(e.kind);
    switch (e.kind) {
        case Expr::Kind::Lit:
            s = std::to_string(e.value);
            break;
        case Expr::Kind::Var:
            s = e.name;
            break;
        case Expr::Kind::Not:
            s = "not " + print_expr(*e.lhs, p);
            break;
        default: {
            const char *op = e.kind == Expr::Kind::Or    ? " or "
                             : e.kind == Expr::Kind::And ? " and "
                             : e.kind == Expr::Kind::Xor ? " xor "
                             : e.kind == Expr::Kind::Eq  ? " == "
                                                         : " != ";
            s = print_expr(*e.lhs, p) + op + print_expr(*e.rhs, p + 1);
        }
    }
    return p < min_prec ? "(" + s + ")" : s;
}

std::string join(const std::vector<std::string> &v) {
    std::string s;
    for (size_t k = 0; k < v.size(); ++k) {
        s += (k ? " " : "") + v[k];
    }
    return s;
}

std::string print_ctor(const Ctor &c) {
    std::string s = c.name + "(";
    for (size_t k = 0; k < c.args.size(); ++k) {
        s += (k ? ", " : "") + to_string(c.args[k]);
    }
    return s + ")";
}

}  // namespace

CircuitAST parse(std::string_view text) {
    Parser p(lex(text));
    return p.file();
}

std::string print(const Expr &e) {
    return print_expr(e, 0);
}

std::string print(const CircuitAST &ast) {
    std::ostringstream out;
    out << "theory " << ast.theory << "\n";
    for (const auto &s : ast.stmts) {
        std::visit(
            [&](const auto &n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, SystemDecl>) {
                    out << "system " << n.name << " : " << n.type;
                } else if constexpr (std::is_same_v<T, AuxDecl>) {
                    out << "aux " << n.name << " : " << n.type;
                } else if constexpr (std::is_same_v<T, Prepare>) {
                    out << "prepare " << print_ctor(n.ctor) << " -> " << join(n.outputs);
                } else if constexpr (std::is_same_v<T, Apply>) {
                    out << "apply " << n.gate << " " << join(n.inputs) << " -> " << join(n.outputs);
                } else if constexpr (std::is_same_v<T, Measure>) {
                    out << "measure " << print_ctor(n.ctor) << " " << join(n.inputs) << " -> " << join(n.vars);
                } else {
                    out << "post-select " << print(*n.expr);
                }
            },
            s.node);
        out << "\n";
    }
    out << "accept " << (ast.accept ? print(*ast.accept) : "") << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Validation.

namespace {

void check_bound(const Expr &e, const std::set<std::string> &bound, SourcePos pos) {
    if (e.kind == Expr::Kind::Var && !bound.count(e.name)) {
        throw DslError(DslErrorKind::UnboundVariable, pos, "outcome variable '" + e.name + "' is not bound by an earlier measurement");
    }
    if (e.lhs) {
        check_bound(*e.lhs, bound, pos);
    }
    if (e.rhs) {
        check_bound(*e.rhs, bound, pos);
    }
}

struct Binding {
    SystemType type;
    int live_wire = -1;
};

/// Rethrows errors from the theory's constructors with a source position.
[[noreturn]] void rethrow_at(SourcePos pos, DslErrorKind unknown_kind) {
    try {
        throw;
    } catch (const UnsupportedError &e) {
        throw DslError(unknown_kind, pos, e.what());
    } catch (const WiringError &e) {
        throw DslError(DslErrorKind::TypeMismatch, pos, e.what());
    } catch (const PreconditionError &e) {
        std::string msg = e.what();
        bool mismatch = msg.find("type mismatch") != std::string::npos;
        throw DslError(mismatch ? DslErrorKind::TypeMismatch : DslErrorKind::InvalidArgument, pos, msg);
    }
}

/// Sums out the factors whose variable is `_`.
void bind_outcomes(Device<Rational> &dev, const std::vector<int> &factor_radices, const std::vector<std::string> &vars,
                   SourcePos pos) {
    std::vector<int> radices = factor_radices;
    if (radices.empty()) {
        radices = {static_cast<int>(dev.outcomes.size())};
    }
    if (radices.size() != vars.size()) {
        throw DslError(DslErrorKind::TypeMismatch, pos,
                       "measurement has " + std::to_string(radices.size()) + " outcome factor(s) but " +
                           std::to_string(vars.size()) + " variable(s) are bound");
    }
    std::vector<int> kept_radices;
    for (size_t k = 0; k < vars.size(); ++k) {
        if (vars[k] != "_") {
            dev.vars.push_back(vars[k]);
            kept_radices.push_back(radices[k]);
        }
    }
    if (dev.vars.size() == vars.size() || dev.vars.empty()) {
        if (!dev.vars.empty()) {
            dev.radices = kept_radices;
        }
        return;
    }
    size_t kept_count = 1;
    for (int r : kept_radices) {
        kept_count *= r;
    }
    std::vector<Mat<Rational>> summed(kept_count, Mat<Rational>::Zero(dev.outcomes[0].rows(), dev.outcomes[0].cols()));
    for (size_t idx = 0; idx < dev.outcomes.size(); ++idx) {
        size_t rem = idx, kept = 0, scale = 1;
        for (size_t k = vars.size(); k-- > 0;) {
            int digit = static_cast<int>(rem % radices[k]);
            rem /= radices[k];
            if (vars[k] != "_") {
                kept += digit * scale;
                scale *= radices[k];
            }
        }
        summed[kept] += dev.outcomes[idx];
    }
    dev.outcomes = std::move(summed);
    dev.radices = kept_radices;
}

struct CompiledExpr {
    Expr::Kind kind;
    long long value;
    int lhs = -1, rhs = -1;
};

int compile_node(const Expr &e, const std::map<std::string, int> &index, std::vector<CompiledExpr> &out) {
    CompiledExpr c{e.kind, e.value};
    if (e.kind == Expr::Kind::Var) {
        auto it = index.find(e.name);
        if (it == index.end()) {
            throw DslError(DslErrorKind::UnboundVariable, {}, "outcome variable '" + e.name + "' is not bound");
        }
        c.value = it->second;
    }
    if (e.lhs) {
        c.lhs = compile_node(*e.lhs, index, out);
    }
    if (e.rhs) {
        c.rhs = compile_node(*e.rhs, index, out);
    }
    out.push_back(c);
    return static_cast<int>(out.size()) - 1;
}

long long run(const std::vector<CompiledExpr> &prog, int node, const OutcomeString &z) {
    const auto &c = prog[node];
    switch (c.kind) {
        case Expr::Kind::Lit:
            return c.value;
        case Expr::Kind::Var:
            return z[c.value];
        case Expr::Kind::Not:
            return apply_op(c.kind, run(prog, c.lhs, z), 0);
        default:
            return apply_op(c.kind, run(prog, c.lhs, z), run(prog, c.rhs, z));
    }
}

}  // namespace

OutcomePredicate compile_predicate(const ExprPtr &e, const std::vector<std::string> &variables) {
    std::map<std::string, int> index;
    for (size_t k = 0; k < variables.size(); ++k) {
        index[variables[k]] = static_cast<int>(k);
    }
    auto prog = std::make_shared<std::vector<CompiledExpr>>();
    int root = compile_node(*e, index, *prog);
    return [prog, root](const OutcomeString &z) { return run(*prog, root, z) != 0; };
}

Circuit<Rational> validate(const CircuitAST &ast, const TheorySpec &theory, const Guards &guards) {
    if (ast.theory != theory.name) {
        throw DslError(DslErrorKind::UnknownIdentifier, {1, 1},
                       "file declares theory '" + ast.theory + "' but theory '" + theory.name + "' was supplied");
    }
    if (!ast.accept) {
        throw DslError(DslErrorKind::Syntax, ast.accept_pos, "missing accept clause");
    }
    Circuit<Rational> c;
    c.units = theory.unit_map();
    std::map<std::string, Binding> names;
    std::set<std::string> bound_vars;
    std::vector<ExprPtr> post;

    auto lookup = [&](const std::string &name, SourcePos pos) -> Binding & {
        auto it = names.find(name);
        if (it == names.end()) {
            throw DslError(DslErrorKind::UnknownIdentifier, pos, "wire '" + name + "' is not declared");
        }
        return it->second;
    };
    auto consume = [&](const std::vector<std::string> &inputs, SourcePos pos) {
        std::set<std::string> seen;
        std::vector<int> wires;
        SystemList types;
        for (const auto &n : inputs) {
            if (!seen.insert(n).second) {
                throw DslError(DslErrorKind::Wiring, pos, "wire '" + n + "' used twice in one statement");
            }
            Binding &b = lookup(n, pos);
            if (b.live_wire < 0) {
                throw DslError(DslErrorKind::Wiring, pos, "wire '" + n + "' is consumed before it is produced");
            }
            wires.push_back(b.live_wire);
            types.push_back(b.type);
            b.live_wire = -1;
        }
        return std::pair{wires, types};
    };
    auto output_types = [&](const std::vector<std::string> &outputs, SourcePos pos) {
        std::set<std::string> seen;
        SystemList types;
        for (const auto &n : outputs) {
            if (!seen.insert(n).second) {
                throw DslError(DslErrorKind::Wiring, pos, "wire '" + n + "' produced twice in one statement");
            }
            Binding &b = lookup(n, pos);
            if (b.live_wire >= 0) {
                throw DslError(DslErrorKind::Wiring, pos, "wire '" + n + "' is produced again before being consumed");
            }
            types.push_back(b.type);
        }
        return types;
    };
    auto produce = [&](const std::vector<std::string> &outputs) {
        std::vector<int> wires;
        for (const auto &n : outputs) {
            Binding &b = names.at(n);
            b.live_wire = c.add_wire(n, b.type);
            wires.push_back(b.live_wire);
        }
        return wires;
    };
    auto declare = [&](const std::string &name, const std::string &type, SourcePos pos) -> Binding & {
        if (names.count(name)) {
            throw DslError(DslErrorKind::Wiring, pos, "wire '" + name + "' is declared twice");
        }
        if (!theory.has_system(type)) {
            throw DslError(DslErrorKind::UnknownIdentifier, pos,
                           "theory '" + theory.name + "' has no system type '" + type + "'");
        }
        return names[name] = Binding{theory.system(type).type, -1};
    };

    for (const auto &s : ast.stmts) {
        const SourcePos pos = s.pos;
        if (auto *d = std::get_if<SystemDecl>(&s.node)) {
            declare(d->name, d->type, pos);
        } else if (auto *a = std::get_if<AuxDecl>(&s.node)) {
            Binding &b = declare(a->name, a->type, pos);
            b.live_wire = c.add_aux(a->name, b.type);
        } else if (auto *p = std::get_if<Prepare>(&s.node)) {
            SystemList types = output_types(p->outputs, pos);
            DevicePrototype proto;
            try {
                proto = make_state(theory, p->ctor.name, p->ctor.args, types);
            } catch (...) {
                rethrow_at(pos, DslErrorKind::UnknownIdentifier);
            }
            if (proto.out_types != types) {
                throw DslError(DslErrorKind::TypeMismatch, pos, "state '" + p->ctor.name + "' does not match the output wire types");
            }
            Device<Rational> dev;
            dev.kind = DeviceKind::Preparation;
            dev.label = p->ctor.name;
            dev.out_types = types;
            dev.outcomes = std::move(proto.outcomes);
            dev.outputs = produce(p->outputs);
            c.devices.push_back(std::move(dev));
        } else if (auto *ap = std::get_if<Apply>(&s.node)) {
            auto [in_wires, in_types] = consume(ap->inputs, pos);
            DevicePrototype proto;
            try {
                proto = make_gate(theory, ap->gate, in_types);
            } catch (...) {
                rethrow_at(pos, DslErrorKind::UnknownGate);
            }
            SystemList types = output_types(ap->outputs, pos);
            if (proto.out_types != types) {
                throw DslError(DslErrorKind::TypeMismatch, pos, "gate '" + ap->gate + "' output types do not match the output wires");
            }
            Device<Rational> dev;
            dev.kind = DeviceKind::Transformation;
            dev.label = ap->gate;
            dev.in_types = in_types;
            dev.out_types = types;
            dev.inputs = in_wires;
            dev.outcomes = std::move(proto.outcomes);
            dev.outputs = produce(ap->outputs);
            c.devices.push_back(std::move(dev));
        } else if (auto *m = std::get_if<Measure>(&s.node)) {
            auto [in_wires, in_types] = consume(m->inputs, pos);
            DevicePrototype proto;
            try {
                proto = make_measurement(theory, m->ctor.name, m->ctor.args, in_types);
            } catch (...) {
                rethrow_at(pos, DslErrorKind::UnknownIdentifier);
            }
            Device<Rational> dev;
            dev.kind = DeviceKind::Measurement;
            dev.label = m->ctor.name;
            dev.in_types = in_types;
            dev.inputs = in_wires;
            dev.outcomes = std::move(proto.outcomes);
            bind_outcomes(dev, proto.factor_radices, m->vars, pos);
            for (const auto &v : dev.vars) {
                if (!bound_vars.insert(v).second) {
                    throw DslError(DslErrorKind::DuplicateVariable, pos, "outcome variable '" + v + "' is bound twice");
                }
            }
            c.devices.push_back(std::move(dev));
        } else if (auto *ps = std::get_if<PostSelect>(&s.node)) {
            check_bound(*ps->expr, bound_vars, pos);
            post.push_back(ps->expr);
        }
    }
    check_bound(*ast.accept, bound_vars, ast.accept_pos);

    try {
        analyze(c, guards);
    } catch (const WiringError &e) {
        std::string msg = e.what();
        bool cyclic = msg.find("cyclic") != std::string::npos;
        throw DslError(cyclic ? DslErrorKind::CyclicWiring : DslErrorKind::Wiring, {}, msg);
    }
    const auto vars = c.variables();
    c.accept = compile_predicate(ast.accept, vars);
    if (!post.empty()) {
        std::vector<OutcomePredicate> preds;
        for (const auto &e : post) {
            preds.push_back(compile_predicate(e, vars));
        }
        c.post_select = [preds](const OutcomeString &z) {
            for (const auto &p : preds) {
                if (!p(z)) {
                    return false;
                }
            }
            return true;
        };
    }
    return c;
}

}  // namespace gpt
