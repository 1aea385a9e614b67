#pragma once

// MiniHL: a small keyword-structured language used as the high-level side of
// translation exercises.
//
//   VAR SUM = 0
//   IF SUM == 2 THEN SUM = 3 ELSE SUM = 5 ENDIF
//   WHILE X < 3 DO X = X + 1 ENDWHILE
//
// Declarations come first. Statements are separated by newlines or `;`.
// Expressions use + - * / over 8-bit words; conditions compare with
// == != < <= > >= (signed) and combine with AND, OR, NOT. Keywords and
// names are case-insensitive; names are stored upper-cased.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acsim/isa.hpp"
#include "acsim/word.hpp"

namespace acsim::minihl {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Literal, Variable, Negate, Binary };

    Kind kind = Kind::Literal;
    Word literal;
    std::string name;
    char op = '+';  // + - * /
    ExprPtr lhs, rhs;

    static ExprPtr lit(Word w) { return std::make_shared<Expr>(Expr{Kind::Literal, w, {}, '+', {}, {}}); }
    static ExprPtr var(std::string n) { return std::make_shared<Expr>(Expr{Kind::Variable, {}, std::move(n), '+', {}, {}}); }
    static ExprPtr neg(ExprPtr e) { return std::make_shared<Expr>(Expr{Kind::Negate, {}, {}, '-', std::move(e), {}}); }
    static ExprPtr bin(char op, ExprPtr l, ExprPtr r) {
        return std::make_shared<Expr>(Expr{Kind::Binary, {}, {}, op, std::move(l), std::move(r)});
    }

    bool simple() const { return kind == Kind::Literal || kind == Kind::Variable; }
};

enum class RelOp { Eq, Ne, Lt, Le, Gt, Ge };

constexpr std::string_view rel_text(RelOp r) {
    switch (r) {
        case RelOp::Eq: return "==";
        case RelOp::Ne: return "!=";
        case RelOp::Lt: return "<";
        case RelOp::Le: return "<=";
        case RelOp::Gt: return ">";
        case RelOp::Ge: return ">=";
    }
    return "?";
}

struct Cond;
using CondPtr = std::shared_ptr<const Cond>;

struct Cond {
    enum class Kind { Compare, And, Or, Not };

    Kind kind = Kind::Compare;
    RelOp rel = RelOp::Eq;
    ExprPtr lhs, rhs;
    CondPtr a, b;

    static CondPtr cmp(RelOp r, ExprPtr l, ExprPtr rr) {
        return std::make_shared<Cond>(Cond{Kind::Compare, r, std::move(l), std::move(rr), {}, {}});
    }
    static CondPtr both(CondPtr x, CondPtr y) { return std::make_shared<Cond>(Cond{Kind::And, RelOp::Eq, {}, {}, std::move(x), std::move(y)}); }
    static CondPtr either(CondPtr x, CondPtr y) { return std::make_shared<Cond>(Cond{Kind::Or, RelOp::Eq, {}, {}, std::move(x), std::move(y)}); }
    static CondPtr negate(CondPtr x) { return std::make_shared<Cond>(Cond{Kind::Not, RelOp::Eq, {}, {}, std::move(x), {}}); }
};

struct Stmt;
using Block = std::vector<Stmt>;

struct Stmt {
    enum class Kind { Assign, If, While };

    Kind kind = Kind::Assign;
    std::string target;  // Assign
    ExprPtr value;       // Assign
    CondPtr cond;        // If, While
    Block body;          // then-branch or loop body
    std::optional<Block> else_body;
    int line = 0;

    static Stmt assign(std::string t, ExprPtr v) {
        Stmt s;
        s.kind = Kind::Assign;
        s.target = std::move(t);
        s.value = std::move(v);
        return s;
    }
    static Stmt if_(CondPtr c, Block then_body, std::optional<Block> else_body = std::nullopt) {
        Stmt s;
        s.kind = Kind::If;
        s.cond = std::move(c);
        s.body = std::move(then_body);
        s.else_body = std::move(else_body);
        return s;
    }
    static Stmt while_(CondPtr c, Block body) {
        Stmt s;
        s.kind = Kind::While;
        s.cond = std::move(c);
        s.body = std::move(body);
        return s;
    }
};

struct Ast {
    std::vector<std::pair<std::string, Word>> vars;  // declaration order
    Block body;

    bool declares(std::string_view name) const {
        for (const auto& [n, w] : vars)
            if (n == name) return true;
        return false;
    }

    /// Maximum nesting depth of IF/WHILE blocks (0 for straight-line code).
    int depth() const { return block_depth(body); }

    /// Total statement count including nested statements.
    int statement_count() const { return block_count(body); }

private:
    static int block_depth(const Block& b) {
        int d = 0;
        for (const auto& s : b) {
            if (s.kind == Stmt::Kind::Assign) continue;
            int inner = block_depth(s.body);
            if (s.else_body) inner = std::max(inner, block_depth(*s.else_body));
            d = std::max(d, inner + 1);
        }
        return d;
    }
    static int block_count(const Block& b) {
        int n = 0;
        for (const auto& s : b) {
            ++n;
            n += block_count(s.body);
            if (s.else_body) n += block_count(*s.else_body);
        }
        return n;
    }
};

class ParseError : public std::runtime_error {
public:
    enum class Kind { SyntaxError, UndeclaredVariable };

    ParseError(Kind kind, int line, int column, const std::string& msg)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " +
                             (kind == Kind::SyntaxError ? "SyntaxError: " : "UndeclaredVariable: ") + msg),
          kind_(kind), line_(line), column_(column) {}

    Kind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    Kind kind_;
    int line_;
    int column_;
};

namespace detail {

inline const std::set<std::string>& keywords() {
    static const std::set<std::string> k = {"VAR", "IF", "THEN", "ELSE", "ENDIF", "WHILE", "DO", "ENDWHILE", "AND", "OR", "NOT"};
    return k;
}

/// Names the translator needs for itself or the assembler would misread.
inline bool reserved_name(const std::string& upper) {
    if (keywords().count(upper) || opcode_from_name(upper)) return true;
    if (upper.size() > 1 && upper[0] == 'L' &&
        std::all_of(upper.begin() + 1, upper.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return true;
    return false;
}

struct Token {
    enum class Kind { Ident, Number, Op, Sep, End };

    Kind kind = Kind::End;
    std::string text;  // upper-cased for identifiers
    NumericLiteral number;
    int line = 1;
    int column = 1;
};

inline std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (c == '\n' || c == ';') {
            out.push_back({Token::Kind::Sep, std::string(1, c), {}, line, col});
            advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            t.kind = Token::Kind::Ident;
            t.text = to_upper(src.substr(i, j - i));
            advance(j - i);
            out.push_back(std::move(t));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isxdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < src.size() && (src[j] == 'h' || src[j] == 'H')) ++j;
            const auto text = src.substr(i, j - i);
            const auto lit = parse_numeric_literal(text);
            if (!lit) throw ParseError(ParseError::Kind::SyntaxError, line, col, "bad number '" + std::string(text) + "'");
            t.kind = Token::Kind::Number;
            t.text = std::string(text);
            t.number = *lit;
            advance(j - i);
            out.push_back(std::move(t));
            continue;
        }
        static constexpr std::string_view two[] = {"==", "!=", "<=", ">="};
        bool matched = false;
        for (auto op : two) {
            if (src.substr(i, 2) == op) {
                t.kind = Token::Kind::Op;
                t.text = std::string(op);
                advance(2);
                out.push_back(std::move(t));
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string_view("+-*/()<>=").find(c) != std::string_view::npos) {
            t.kind = Token::Kind::Op;
            t.text = std::string(1, c);
            advance(1);
            out.push_back(std::move(t));
            continue;
        }
        throw ParseError(ParseError::Kind::SyntaxError, line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Token::Kind::End, "", {}, line, col});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Ast parse_program() {
        Ast ast;
        skip_seps();
        while (is_kw("VAR")) {
            const Token& kw = take();
            const Token& name = expect_ident("variable name");
            check_name(name);
            if (ast.declares(name.text))
                throw error(name, "variable '" + name.text + "' is declared twice");
            expect_op("=");
            const Word init = parse_signed_literal();
            ast.vars.emplace_back(name.text, init);
            (void)kw;
            end_statement();
        }
        ast_ = &ast;
        ast.body = parse_block({});
        if (peek().kind != Token::Kind::End) {
            if (is_kw("VAR")) throw error(peek(), "declarations must precede statements");
            throw error(peek(), "unexpected '" + peek().text + "'");
        }
        return ast;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    bool is_kw(std::string_view kw, std::size_t ahead = 0) const {
        return peek(ahead).kind == Token::Kind::Ident && peek(ahead).text == kw;
    }
    bool is_op(std::string_view op) const { return peek().kind == Token::Kind::Op && peek().text == op; }

    ParseError error(const Token& t, const std::string& msg) const {
        return ParseError(ParseError::Kind::SyntaxError, t.line, t.column, msg);
    }

    void skip_seps() {
        while (peek().kind == Token::Kind::Sep) take();
    }

    void expect_kw(std::string_view kw) {
        if (!is_kw(kw)) throw error(peek(), "expected " + std::string(kw) + describe_found());
        take();
    }
    void expect_op(std::string_view op) {
        if (!is_op(op)) throw error(peek(), "expected '" + std::string(op) + "'" + describe_found());
        take();
    }
    const Token& expect_ident(std::string_view what) {
        if (peek().kind != Token::Kind::Ident || keywords().count(peek().text))
            throw error(peek(), "expected " + std::string(what) + describe_found());
        return take();
    }
    std::string describe_found() const {
        const Token& t = peek();
        if (t.kind == Token::Kind::End) return " but found end of input";
        if (t.kind == Token::Kind::Sep) return " but found end of line";
        return " but found '" + t.text + "'";
    }

    void check_name(const Token& t) const {
        if (reserved_name(t.text)) throw error(t, "'" + t.text + "' is reserved and cannot name a variable");
    }

    /// After a statement: a separator, or a keyword/end that closes the block.
    void end_statement() {
        if (peek().kind == Token::Kind::Sep) {
            skip_seps();
            return;
        }
        if (peek().kind == Token::Kind::End || is_kw("ELSE") || is_kw("ENDIF") || is_kw("ENDWHILE")) return;
        throw error(peek(), "expected end of statement" + describe_found());
    }

    Word parse_signed_literal() {
        bool negative = false;
        if (is_op("-")) {
            take();
            negative = true;
        }
        if (peek().kind != Token::Kind::Number) throw error(peek(), "expected a number" + describe_found());
        const Token& t = take();
        return literal_word(t, negative);
    }

    Word literal_word(const Token& t, bool negative) const {
        NumericLiteral lit = t.number;
        if (negative) {
            if (lit.hex) throw error(t, "hex literals cannot be negated in place; use 0 - " + t.text);
            lit.value = -lit.value;
        }
        const auto w = literal_to_word(lit);
        if (!w) throw error(t, "literal '" + std::string(negative ? "-" : "") + t.text + "' does not fit a word");
        return *w;
    }

    Block parse_block(std::set<std::string> terminators) {
        Block block;
        skip_seps();
        while (peek().kind != Token::Kind::End) {
            if (peek().kind == Token::Kind::Ident && terminators.count(peek().text)) break;
            if (is_kw("ELSE") || is_kw("ENDIF") || is_kw("ENDWHILE"))
                throw error(peek(), "unexpected " + peek().text);
            block.push_back(parse_statement());
            end_statement();
        }
        return block;
    }

    Stmt parse_statement() {
        const Token& start = peek();
        if (is_kw("IF")) {
            take();
            CondPtr c = parse_cond();
            expect_kw("THEN");
            Block then_body = parse_block({"ELSE", "ENDIF"});
            std::optional<Block> else_body;
            if (is_kw("ELSE")) {
                take();
                else_body = parse_block({"ENDIF"});
            }
            expect_kw("ENDIF");
            Stmt s = Stmt::if_(std::move(c), std::move(then_body), std::move(else_body));
            s.line = start.line;
            return s;
        }
        if (is_kw("WHILE")) {
            take();
            CondPtr c = parse_cond();
            expect_kw("DO");
            Block body = parse_block({"ENDWHILE"});
            expect_kw("ENDWHILE");
            Stmt s = Stmt::while_(std::move(c), std::move(body));
            s.line = start.line;
            return s;
        }
        if (is_kw("VAR")) throw error(start, "declarations must precede statements");
        const Token& name = expect_ident("a statement");
        require_declared(name);
        expect_op("=");
        Stmt s = Stmt::assign(name.text, parse_expr());
        s.line = start.line;
        return s;
    }

    void require_declared(const Token& name) const {
        if (!ast_->declares(name.text))
            throw ParseError(ParseError::Kind::UndeclaredVariable, name.line, name.column,
                             "variable '" + name.text + "' is not declared");
    }

    CondPtr parse_cond() {
        CondPtr c = parse_and();
        while (is_kw("OR")) {
            take();
            c = Cond::either(c, parse_and());
        }
        return c;
    }

    CondPtr parse_and() {
        CondPtr c = parse_not();
        while (is_kw("AND")) {
            take();
            c = Cond::both(c, parse_not());
        }
        return c;
    }

    CondPtr parse_not() {
        if (is_kw("NOT")) {
            take();
            return Cond::negate(parse_not());
        }
        if (is_op("(")) {
            // Either a parenthesized condition or a comparison whose left
            // operand starts with '('. Try the condition first.
            const std::size_t save = pos_;
            try {
                take();
                CondPtr c = parse_cond();
                expect_op(")");
                if (!is_relop() && !is_arith_op()) return c;
            } catch (const ParseError&) {
            }
            pos_ = save;
        }
        return parse_comparison();
    }

    bool is_relop() const {
        return peek().kind == Token::Kind::Op &&
               (peek().text == "==" || peek().text == "!=" || peek().text == "<" || peek().text == "<=" ||
                peek().text == ">" || peek().text == ">=");
    }
    bool is_arith_op() const {
        return peek().kind == Token::Kind::Op &&
               (peek().text == "+" || peek().text == "-" || peek().text == "*" || peek().text == "/");
    }

    CondPtr parse_comparison() {
        ExprPtr l = parse_expr();
        if (!is_relop()) {
            if (is_op("=")) throw error(peek(), "use '==' to compare");
            throw error(peek(), "expected a comparison operator" + describe_found());
        }
        const std::string op = take().text;
        ExprPtr r = parse_expr();
        const RelOp rel = op == "==" ? RelOp::Eq : op == "!=" ? RelOp::Ne : op == "<" ? RelOp::Lt
                        : op == "<=" ? RelOp::Le : op == ">" ? RelOp::Gt : RelOp::Ge;
        return Cond::cmp(rel, std::move(l), std::move(r));
    }

    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        while (is_op("+") || is_op("-")) {
            const char op = take().text[0];
            e = Expr::bin(op, e, parse_term());
        }
        return e;
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        while (is_op("*") || is_op("/")) {
            const char op = take().text[0];
            e = Expr::bin(op, e, parse_factor());
        }
        return e;
    }

    ExprPtr parse_factor() {
        if (is_op("-")) {
            take();
            if (peek().kind == Token::Kind::Number && !peek().number.hex) return Expr::lit(literal_word(take(), true));
            return Expr::neg(parse_factor());
        }
        if (is_op("(")) {
            take();
            ExprPtr e = parse_expr();
            expect_op(")");
            return e;
        }
        if (peek().kind == Token::Kind::Number) return Expr::lit(literal_word(take(), false));
        if (peek().kind == Token::Kind::Ident && !keywords().count(peek().text)) {
            const Token& name = take();
            require_declared(name);
            return Expr::var(name.text);
        }
        throw error(peek(), "expected an expression" + describe_found());
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const Ast* ast_ = nullptr;
};

}  // namespace detail

inline Ast parse(std::string_view text) {
    detail::Parser p(detail::lex(text));
    return p.parse_program();
}

// ---------------------------------------------------------------------------
// Reference interpreter

using Env = std::map<std::string, Word>;

struct InterpretLimits {
    std::uint64_t max_iterations = 1000;  // loop back-edges across all loops
};

class InterpretError : public std::runtime_error {
public:
    enum class Kind { DivideByZero, LoopLimit };

    InterpretError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Word arithmetic identical to the machine ALU.
inline Word apply_binary(char op, Word a, Word b) {
    switch (op) {
        case '+': return alu(Opcode::ADD, a, b).value;
        case '-': return alu(Opcode::SUB, a, b).value;
        case '*': return alu(Opcode::MUL, a, b).value;
        case '/':
            if (b.value() == 0) throw InterpretError(InterpretError::Kind::DivideByZero, "division by zero");
            return alu(Opcode::DIV, a, b).value;
    }
    throw std::invalid_argument("unknown operator");
}

namespace detail {

class Interpreter {
public:
    Interpreter(Env env, InterpretLimits limits) : env_(std::move(env)), limits_(limits) {}

    Env run(const Block& b) {
        exec(b);
        return env_;
    }

private:
    Word eval(const Expr& e) const {
        switch (e.kind) {
            case Expr::Kind::Literal: return e.literal;
            case Expr::Kind::Variable: return env_.at(e.name);
            case Expr::Kind::Negate: return Word::wrap(-eval(*e.lhs).value());
            case Expr::Kind::Binary: return apply_binary(e.op, eval(*e.lhs), eval(*e.rhs));
        }
        return {};
    }

    bool test(const Cond& c) const {
        switch (c.kind) {
            case Cond::Kind::Compare: {
                const int l = eval(*c.lhs).value();
                const int r = eval(*c.rhs).value();
                switch (c.rel) {
                    case RelOp::Eq: return l == r;
                    case RelOp::Ne: return l != r;
                    case RelOp::Lt: return l < r;
                    case RelOp::Le: return l <= r;
                    case RelOp::Gt: return l > r;
                    case RelOp::Ge: return l >= r;
                }
                return false;
            }
            case Cond::Kind::And: return test(*c.a) && test(*c.b);
            case Cond::Kind::Or: return test(*c.a) || test(*c.b);
            case Cond::Kind::Not: return !test(*c.a);
        }
        return false;
    }

    void exec(const Block& b) {
        for (const auto& s : b) {
            switch (s.kind) {
                case Stmt::Kind::Assign: env_[s.target] = eval(*s.value); break;
                case Stmt::Kind::If:
                    if (test(*s.cond))
                        exec(s.body);
                    else if (s.else_body)
                        exec(*s.else_body);
                    break;
                case Stmt::Kind::While:
                    while (test(*s.cond)) {
                        exec(s.body);
                        if (++back_edges_ > limits_.max_iterations)
                            throw InterpretError(InterpretError::Kind::LoopLimit,
                                                 "more than " + std::to_string(limits_.max_iterations) + " loop iterations");
                    }
                    break;
            }
        }
    }

    Env env_;
    InterpretLimits limits_;
    std::uint64_t back_edges_ = 0;
};

}  // namespace detail

/// Initial environment: declared initializers overridden by `overrides`.
/// Throws std::invalid_argument for names the program does not declare.
inline Env initial_env(const Ast& ast, const Env& overrides = {}) {
    Env env;
    for (const auto& [n, w] : ast.vars) env[n] = w;
    for (const auto& [n, w] : overrides) {
        const std::string key = to_upper(n);
        if (!env.count(key)) throw std::invalid_argument("environment binds undeclared variable '" + n + "'");
        env[key] = w;
    }
    return env;
}

inline Env interpret(const Ast& ast, const Env& env0 = {}, InterpretLimits limits = {}) {
    detail::Interpreter interp(initial_env(ast, env0), limits);
    return interp.run(ast.body);
}

// ---------------------------------------------------------------------------
// Pretty printer (canonical MiniHL text)

namespace detail {

inline int precedence(const Expr& e) {
    if (e.kind != Expr::Kind::Binary) return 3;
    return (e.op == '*' || e.op == '/') ? 2 : 1;
}

inline std::string print_expr(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Literal: return std::to_string(e.literal.value());
        case Expr::Kind::Variable: return e.name;
        case Expr::Kind::Negate: {
            const std::string inner = print_expr(*e.lhs);
            return (e.lhs->kind == Expr::Kind::Variable) ? "-" + inner : "-(" + inner + ")";
        }
        case Expr::Kind::Binary: {
            std::string l = print_expr(*e.lhs);
            std::string r = print_expr(*e.rhs);
            if (precedence(*e.lhs) < precedence(e)) l = "(" + l + ")";
            // Right operand parenthesized at equal precedence: - and / are not associative.
            if (precedence(*e.rhs) <= precedence(e) && e.rhs->kind == Expr::Kind::Binary) r = "(" + r + ")";
            if (e.rhs->kind == Expr::Kind::Literal && e.rhs->literal.value() < 0) r = "(" + r + ")";
            return l + " " + e.op + " " + r;
        }
    }
    return "";
}

inline std::string print_cond(const Cond& c) {
    switch (c.kind) {
        case Cond::Kind::Compare: return print_expr(*c.lhs) + " " + std::string(rel_text(c.rel)) + " " + print_expr(*c.rhs);
        case Cond::Kind::And: return "(" + print_cond(*c.a) + " AND " + print_cond(*c.b) + ")";
        case Cond::Kind::Or: return "(" + print_cond(*c.a) + " OR " + print_cond(*c.b) + ")";
        case Cond::Kind::Not: return "NOT (" + print_cond(*c.a) + ")";
    }
    return "";
}

inline void print_block(const Block& b, int indent, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    for (const auto& s : b) {
        switch (s.kind) {
            case Stmt::Kind::Assign: out += pad + s.target + " = " + print_expr(*s.value) + "\n"; break;
            case Stmt::Kind::If:
                out += pad + "IF " + print_cond(*s.cond) + " THEN\n";
                print_block(s.body, indent + 1, out);
                if (s.else_body) {
                    out += pad + "ELSE\n";
                    print_block(*s.else_body, indent + 1, out);
                }
                out += pad + "ENDIF\n";
                break;
            case Stmt::Kind::While:
                out += pad + "WHILE " + print_cond(*s.cond) + " DO\n";
                print_block(s.body, indent + 1, out);
                out += pad + "ENDWHILE\n";
                break;
        }
    }
}

}  // namespace detail

inline std::string to_source(const Ast& ast) {
    std::string out;
    for (const auto& [n, w] : ast.vars) out += "VAR " + n + " = " + std::to_string(w.value()) + "\n";
    detail::print_block(ast.body, 0, out);
    return out;
}

}  // namespace acsim::minihl
