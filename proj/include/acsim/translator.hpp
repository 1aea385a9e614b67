#pragma once

// MiniHL -> assembly translation and differential checking of candidate
// translations against the reference interpreter.

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "acsim/assembler.hpp"
#include "acsim/json_io.hpp"
#include "acsim/machine.hpp"
#include "acsim/minihl.hpp"

namespace acsim {

namespace detail {

/// Emits accumulator code. Expressions leave their value in ACC; complex
/// right operands are spilled to temporaries _T0, _T1, ... allocated as a
/// stack. Conditions compile to short-circuit jump chains.
class CodeGen {
public:
    explicit CodeGen(const minihl::Ast& ast) : ast_(ast) {}

    SourceUnit run() {
        block(ast_.body);
        instr("HLT");
        SourceUnit out;
        out.origin = "translation";
        out.lines = std::move(lines_);
        for (const auto& [name, init] : ast_.vars) out.lines.push_back(name + ": " + std::to_string(init.value()));
        for (int t = 0; t < max_temps_; ++t) out.lines.push_back(temp_name(t) + ": 0");
        return out;
    }

private:
    using Expr = minihl::Expr;
    using Cond = minihl::Cond;
    using Stmt = minihl::Stmt;
    using RelOp = minihl::RelOp;

    static std::string temp_name(int t) { return "_T" + std::to_string(t); }

    std::string fresh_label() { return "L" + std::to_string(next_label_++); }

    void instr(const std::string& text) { lines_.push_back("    " + text); }
    void label(const std::string& name) { lines_.push_back(name + ":"); }

    int push_temp() {
        const int t = temps_in_use_++;
        max_temps_ = std::max(max_temps_, temps_in_use_);
        return t;
    }
    void pop_temp() { --temps_in_use_; }

    static std::string operand_of(const Expr& e) {
        return e.kind == Expr::Kind::Literal ? "#" + std::to_string(e.literal.value()) : e.name;
    }

    static std::string mnemonic_for(char op) {
        switch (op) {
            case '+': return "ADD";
            case '-': return "SUB";
            case '*': return "MUL";
            case '/': return "DIV";
        }
        throw std::invalid_argument("unknown operator");
    }

    void expr(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Literal:
            case Expr::Kind::Variable:
                instr("LOD " + operand_of(e));
                return;
            case Expr::Kind::Negate:
                if (e.lhs->simple()) {
                    instr("LOD #0");
                    instr("SUB " + operand_of(*e.lhs));
                } else {
                    expr(*e.lhs);
                    const int t = push_temp();
                    instr("STO " + temp_name(t));
                    instr("LOD #0");
                    instr("SUB " + temp_name(t));
                    pop_temp();
                }
                return;
            case Expr::Kind::Binary:
                combine(*e.lhs, *e.rhs, mnemonic_for(e.op));
                return;
        }
    }

    /// ACC <- lhs, then `op rhs`. Used for arithmetic and for CMP.
    void combine(const Expr& lhs, const Expr& rhs, const std::string& op) {
        if (rhs.simple()) {
            expr(lhs);
            instr(op + " " + operand_of(rhs));
            return;
        }
        expr(rhs);
        const int t = push_temp();
        instr("STO " + temp_name(t));
        expr(lhs);
        instr(op + " " + temp_name(t));
        pop_temp();
    }

    /// Compares with a relation normalized to ==, !=, < or <= by swapping
    /// operands. CMP yields N exactly when lhs < rhs.
    RelOp compare(const Cond& c) {
        switch (c.rel) {
            case RelOp::Gt: combine(*c.rhs, *c.lhs, "CMP"); return RelOp::Lt;
            case RelOp::Ge: combine(*c.rhs, *c.lhs, "CMP"); return RelOp::Le;
            default: combine(*c.lhs, *c.rhs, "CMP"); return c.rel;
        }
    }

    void jump_if_true(const Cond& c, const std::string& target) {
        switch (c.kind) {
            case Cond::Kind::Compare:
                switch (compare(c)) {
                    case RelOp::Eq: instr("JZ " + target); break;
                    case RelOp::Ne: instr("JNZ " + target); break;
                    case RelOp::Lt: instr("JN " + target); break;
                    default:
                        instr("JN " + target);
                        instr("JZ " + target);
                        break;
                }
                return;
            case Cond::Kind::And: {
                const std::string skip = fresh_label();
                jump_if_false(*c.a, skip);
                jump_if_true(*c.b, target);
                label(skip);
                return;
            }
            case Cond::Kind::Or:
                jump_if_true(*c.a, target);
                jump_if_true(*c.b, target);
                return;
            case Cond::Kind::Not:
                jump_if_false(*c.a, target);
                return;
        }
    }

    void jump_if_false(const Cond& c, const std::string& target) {
        switch (c.kind) {
            case Cond::Kind::Compare:
                switch (compare(c)) {
                    case RelOp::Eq: instr("JNZ " + target); break;
                    case RelOp::Ne: instr("JZ " + target); break;
                    case RelOp::Lt: {
                        const std::string skip = fresh_label();
                        instr("JN " + skip);
                        instr("JMP " + target);
                        label(skip);
                        break;
                    }
                    default: {
                        const std::string skip = fresh_label();
                        instr("JN " + skip);
                        instr("JZ " + skip);
                        instr("JMP " + target);
                        label(skip);
                        break;
                    }
                }
                return;
            case Cond::Kind::And:
                jump_if_false(*c.a, target);
                jump_if_false(*c.b, target);
                return;
            case Cond::Kind::Or: {
                const std::string skip = fresh_label();
                jump_if_true(*c.a, skip);
                jump_if_false(*c.b, target);
                label(skip);
                return;
            }
            case Cond::Kind::Not:
                jump_if_true(*c.a, target);
                return;
        }
    }

    void block(const minihl::Block& b) {
        for (const auto& s : b) statement(s);
    }

    void statement(const Stmt& s) {
        switch (s.kind) {
            case Stmt::Kind::Assign:
                expr(*s.value);
                instr("STO " + s.target);
                return;
            case Stmt::Kind::If: {
                const std::string else_label = fresh_label();
                jump_if_false(*s.cond, else_label);
                block(s.body);
                if (s.else_body) {
                    const std::string end_label = fresh_label();
                    instr("JMP " + end_label);
                    label(else_label);
                    block(*s.else_body);
                    label(end_label);
                } else {
                    label(else_label);
                }
                return;
            }
            case Stmt::Kind::While: {
                const std::string top = fresh_label();
                const std::string end = fresh_label();
                label(top);
                jump_if_false(*s.cond, end);
                block(s.body);
                instr("JMP " + top);
                label(end);
                return;
            }
        }
    }

    const minihl::Ast& ast_;
    std::vector<std::string> lines_;
    int next_label_ = 0;
    int temps_in_use_ = 0;
    int max_temps_ = 0;
};

}  // namespace detail

/// Compiles MiniHL to assembly: code, HLT, then one data cell per variable
/// (in declaration order) and the expression temporaries.
inline SourceUnit translate(const minihl::Ast& ast) { return detail::CodeGen(ast).run(); }

// ---------------------------------------------------------------------------
// Differential checking

/// Worst-case micro-steps per instruction (direct-mode ALU operations).
inline constexpr std::uint64_t kMaxMicroStepsPerInstruction = 7;

/// Machine step budget matching an interpreter iteration budget. Between two
/// backward jumps a structured translation executes each instruction at most
/// once, so a program that finishes within `max_iterations` loop iterations
/// finishes within this many micro-steps.
inline std::uint64_t step_budget_for(std::uint64_t max_iterations, int instruction_count) {
    return kMaxMicroStepsPerInstruction * (max_iterations + 1) * static_cast<std::uint64_t>(instruction_count + 1);
}

struct CheckLimits {
    std::uint64_t max_iterations = 1000;
};

/// How a run ended, in terms both sides share.
enum class OutcomeStatus { Completed, NonTerminating, Fault };

constexpr std::string_view outcome_name(OutcomeStatus s) {
    return s == OutcomeStatus::Completed ? "Completed" : s == OutcomeStatus::NonTerminating ? "NonTerminating" : "Fault";
}

struct Outcome {
    OutcomeStatus status = OutcomeStatus::Completed;
    minihl::Env env;

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct Counterexample {
    minihl::Env input;
    Outcome expected;
    Outcome actual;
};

struct Verdict {
    bool correct = true;
    std::optional<Counterexample> counterexample;
    int cases_run = 0;
};

class CheckError : public std::runtime_error {
public:
    enum class Kind { AssembleFailed, MissingVariableCell };

    CheckError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Interpreter side of a differential case.
inline Outcome reference_outcome(const minihl::Ast& ast, const minihl::Env& env, const CheckLimits& limits) {
    try {
        return {OutcomeStatus::Completed, minihl::interpret(ast, env, {limits.max_iterations})};
    } catch (const minihl::InterpretError& e) {
        return {e.kind() == minihl::InterpretError::Kind::LoopLimit ? OutcomeStatus::NonTerminating : OutcomeStatus::Fault,
                minihl::initial_env(ast, env)};
    }
}

/// Machine side of a differential case: load, preset variable cells, run.
inline Outcome machine_outcome(const minihl::Ast& ast, const Program& prog, const minihl::Env& env,
                               const CheckLimits& limits) {
    MachineState state = load(prog);
    const minihl::Env init = minihl::initial_env(ast, env);
    for (const auto& [name, value] : init) state.ram[prog.symbols.find(name)->addr.value()] = value;
    RunLimits rl;
    rl.max_steps = step_budget_for(limits.max_iterations, prog.code_cells() / 2);
    rl.max_back_jumps = limits.max_iterations;
    const RunOutcome r = run(std::move(state), rl);
    Outcome out;
    out.status = r.status == RunStatus::Halted ? OutcomeStatus::Completed
               : r.status == RunStatus::Fault  ? OutcomeStatus::Fault
                                               : OutcomeStatus::NonTerminating;
    for (const auto& [name, value] : init) {
        (void)value;
        out.env[name] = r.final_state.ram[prog.symbols.find(name)->addr.value()];
    }
    if (out.status != OutcomeStatus::Completed) out.env = init;
    return out;
}

/// Assembles a candidate and checks every AST variable has a data cell.
inline Program prepare_candidate(const minihl::Ast& ast, const SourceUnit& candidate) {
    Program prog;
    try {
        prog = assemble(candidate);
    } catch (const AssembleError& e) {
        throw CheckError(CheckError::Kind::AssembleFailed, std::string("candidate does not assemble:\n") + e.what());
    }
    for (const auto& [name, init] : ast.vars) {
        (void)init;
        const Symbol* s = prog.symbols.find(name);
        if (!s || s->kind != SymbolKind::DataCell)
            throw CheckError(CheckError::Kind::MissingVariableCell, "candidate has no data cell for variable '" + name + "'");
    }
    return prog;
}

/// Runs the candidate and the interpreter over each environment; the first
/// disagreement becomes the counterexample.
inline Verdict check_translation(const minihl::Ast& ast, const SourceUnit& candidate, const std::vector<minihl::Env>& envs,
                                 const CheckLimits& limits = {}) {
    const Program prog = prepare_candidate(ast, candidate);
    Verdict v;
    for (const auto& env : envs) {
        ++v.cases_run;
        Outcome expected = reference_outcome(ast, env, limits);
        Outcome actual = machine_outcome(ast, prog, env, limits);
        if (!(expected == actual)) {
            v.correct = false;
            v.counterexample = Counterexample{minihl::initial_env(ast, env), std::move(expected), std::move(actual)};
            break;
        }
    }
    return v;
}

inline constexpr int kBoundaryValues[] = {-128, -1, 0, 1, 127};

namespace detail {

inline void collect_literals(const minihl::Expr& e, std::set<int>& out) {
    if (e.kind == minihl::Expr::Kind::Literal) out.insert(e.literal.value());
    if (e.lhs) collect_literals(*e.lhs, out);
    if (e.rhs) collect_literals(*e.rhs, out);
}

inline void collect_literals(const minihl::Cond& c, std::set<int>& out) {
    if (c.lhs) collect_literals(*c.lhs, out);
    if (c.rhs) collect_literals(*c.rhs, out);
    if (c.a) collect_literals(*c.a, out);
    if (c.b) collect_literals(*c.b, out);
}

inline void collect_literals(const minihl::Block& b, std::set<int>& out) {
    for (const auto& s : b) {
        if (s.value) collect_literals(*s.value, out);
        if (s.cond) collect_literals(*s.cond, out);
        collect_literals(s.body, out);
        if (s.else_body) collect_literals(*s.else_body, out);
    }
}

}  // namespace detail

/// Literals of the program and their neighbours (c-1, c, c+1), wrapped and
/// deduplicated, in ascending order.
inline std::vector<int> literal_values(const minihl::Ast& ast) {
    std::set<int> lits;
    detail::collect_literals(ast.body, lits);
    std::set<int> out;
    for (int c : lits)
        for (int d : {-1, 0, 1}) out.insert(Word::wrap(c + d).value());
    return {out.begin(), out.end()};
}

/// Sample environments: the first five cycle the boundary values
/// {-128, -1, 0, 1, 127} across variables, the next ones cycle the program's
/// literal values (see literal_values), the rest are uniform random words
/// from a seeded generator.
inline std::vector<minihl::Env> sample_envs(const minihl::Ast& ast, int count, std::uint64_t seed) {
    std::vector<minihl::Env> out;
    const std::vector<int> lits = literal_values(ast);
    const int nlits = static_cast<int>(lits.size());
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> word(-128, 127);
    for (int i = 0; i < count; ++i) {
        minihl::Env env;
        int j = 0;
        for (const auto& [name, init] : ast.vars) {
            (void)init;
            if (i < 5)
                env[name] = Word::of(kBoundaryValues[(i + j) % 5]);
            else if (i < 5 + nlits)
                env[name] = Word::of(lits[static_cast<std::size_t>((i - 5 + j) % nlits)]);
            else
                env[name] = Word::of(word(rng));
            ++j;
        }
        out.push_back(std::move(env));
    }
    return out;
}

inline json env_to_json(const minihl::Env& env) {
    json j = json::object();
    for (const auto& [k, v] : env) j[k] = v.value();
    return j;
}

inline minihl::Env env_from_json(const json& j) {
    minihl::Env env;
    for (const auto& [k, v] : j.items()) {
        const int x = v.get<int>();
        if (x < -128 || x > 127) throw std::out_of_range("environment value out of range for '" + k + "'");
        env[to_upper(k)] = Word::of(x);
    }
    return env;
}

inline json to_json(const Verdict& v) {
    json j{{"type", "verdict"}, {"correct", v.correct}, {"casesRun", v.cases_run}, {"counterexample", nullptr}};
    if (v.counterexample) {
        const auto& c = *v.counterexample;
        j["counterexample"] = {{"input", env_to_json(c.input)},
                               {"expected", env_to_json(c.expected.env)},
                               {"actual", env_to_json(c.actual.env)},
                               {"expectedStatus", std::string(outcome_name(c.expected.status))},
                               {"actualStatus", std::string(outcome_name(c.actual.status))}};
    }
    return j;
}

}  // namespace acsim
