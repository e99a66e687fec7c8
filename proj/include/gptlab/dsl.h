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


#ifndef GPTLAB_DSL_H
#define GPTLAB_DSL_H

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gptlab/core.h"
#include "gptlab/theories.h"

namespace gpt {

struct SourcePos {
    int line = 0;
    int col = 0;
};

enum class DslErrorKind {
    Lexical,
    Syntax,
    UnknownIdentifier,
    UnknownGate,
    TypeMismatch,
    UnboundVariable,
    DuplicateVariable,
    InvalidArgument,
    Wiring,
    CyclicWiring,
};

std::string to_string(DslErrorKind k);

class DslError : public std::invalid_argument {
   public:
    DslError(DslErrorKind kind, SourcePos pos, const std::string &msg);
    DslErrorKind kind;
    SourcePos pos;
};

/// Boolean/integer expression over outcome variables.
struct Expr {
    enum class Kind { Lit, Var, Not, And, Or, Xor, Eq, Ne };
    Kind kind = Kind::Lit;
    long long value = 0;
    std::string name;
    std::shared_ptr<const Expr> lhs;
    std::shared_ptr<const Expr> rhs;

    static std::shared_ptr<const Expr> lit(long long v);
    static std::shared_ptr<const Expr> var(std::string name);
    static std::shared_ptr<const Expr> unary(Kind k, std::shared_ptr<const Expr> e);
    static std::shared_ptr<const Expr> binary(Kind k, std::shared_ptr<const Expr> a, std::shared_ptr<const Expr> b);

    long long eval(const std::vector<std::pair<std::string, long long>> &env) const;
};

using ExprPtr = std::shared_ptr<const Expr>;

bool operator==(const Expr &a, const Expr &b);
bool expr_equal(const ExprPtr &a, const ExprPtr &b);

struct Ctor {
    std::string name;
    std::vector<Rational> args;
    bool operator==(const Ctor &) const = default;
};

struct SystemDecl {
    std::string name;
    std::string type;
    bool operator==(const SystemDecl &) const = default;
};

struct AuxDecl {
    std::string name;
    std::string type;
    bool operator==(const AuxDecl &) const = default;
};

struct Prepare {
    Ctor ctor;
    std::vector<std::string> outputs;
    bool operator==(const Prepare &) const = default;
};

struct Apply {
    std::string gate;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    bool operator==(const Apply &) const = default;
};

/// `_` in `vars` discards that factor of the outcome.
struct Measure {
    Ctor ctor;
    std::vector<std::string> inputs;
    std::vector<std::string> vars;
    bool operator==(const Measure &) const = default;
};

struct PostSelect {
    ExprPtr expr;
    bool operator==(const PostSelect &o) const { return expr_equal(expr, o.expr); }
};

struct Stmt {
    std::variant<SystemDecl, AuxDecl, Prepare, Apply, Measure, PostSelect> node;
    SourcePos pos;
    /// Positions are ignored.
    bool operator==(const Stmt &o) const { return node == o.node; }
};

struct CircuitAST {
    std::string theory;
    std::vector<Stmt> stmts;
    ExprPtr accept;
    SourcePos accept_pos;

    bool operator==(const CircuitAST &o) const {
        return theory == o.theory && stmts == o.stmts && expr_equal(accept, o.accept);
    }
    size_t device_count() const;
};

CircuitAST parse(std::string_view text);

/// Canonical text: one statement per line, minimal parentheses.
std::string print(const CircuitAST &ast);
std::string print(const Expr &e);

Circuit<Rational> validate(const CircuitAST &ast, const TheorySpec &theory, const Guards &guards = {});

/// Compiles an expression against a variable order (outcome-string layout).
OutcomePredicate compile_predicate(const ExprPtr &e, const std::vector<std::string> &variables);

}  // namespace gpt

#endif
