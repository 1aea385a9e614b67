#pragma once

// Exercise bank, grading and mistake categorization.
//
// Oracle cases name cells either by label ("RESULT") or by address ("[20]").
// Expected values in the shipped bank are computed by the oracle functions
// below, never typed in.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
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

enum class ExerciseKind { WriteAssembly, CompleteAssembly, ExplainTrace };

constexpr std::string_view exercise_kind_name(ExerciseKind k) {
    return k == ExerciseKind::WriteAssembly ? "WriteAssembly" : k == ExerciseKind::CompleteAssembly ? "CompleteAssembly" : "ExplainTrace";
}

enum class MistakeCategory { JumpLogic, AddressingMode, HighLevelMapping, ArithmeticOrFlags, NonTermination, Other };

constexpr std::string_view category_name(MistakeCategory c) {
    switch (c) {
        case MistakeCategory::JumpLogic: return "JumpLogic";
        case MistakeCategory::AddressingMode: return "AddressingMode";
        case MistakeCategory::HighLevelMapping: return "HighLevelMapping";
        case MistakeCategory::ArithmeticOrFlags: return "ArithmeticOrFlags";
        case MistakeCategory::NonTermination: return "NonTermination";
        case MistakeCategory::Other: return "Other";
    }
    return "Other";
}

struct LearningObjective {
    std::string tag;
    std::string text;
};

inline const std::vector<LearningObjective>& learning_objectives() {
    static const std::vector<LearningObjective> table = {
        {"LO1", "Know what each main CPU component does."},
        {"LO2", "Relate high-level control structures to assembly and machine code."},
        {"LO3", "Write small but meaningful programs in a minimal assembly language."},
        {"LO4", "Describe the usual instructions of an accumulator CPU."},
        {"LO5", "Walk through the steps the CPU sub-components take for one instruction."},
        {"LO6", "Name the traffic on the address, data and control buses at each step."},
        {"LO7", "Choose between immediate and direct addressing."},
        {"LO8", "Use the Z and N flags in small examples."},
        {"LO9", "Translate a program with one control structure to assembly."},
        {"LO10", "Translate programs with sequenced and nested control structures."},
    };
    return table;
}

struct CellValue {
    std::string ref;  // label or "[addr]"
    Word value;

    friend bool operator==(const CellValue&, const CellValue&) = default;
};

struct OracleCase {
    std::vector<CellValue> inputs;
    std::vector<CellValue> expected;
};

struct Exercise {
    std::string id;
    std::string prompt;
    ExerciseKind kind = ExerciseKind::WriteAssembly;
    std::vector<OracleCase> cases;
    std::uint64_t step_budget = 10000;
    std::vector<std::string> objectives;
    SourceUnit reference_solution;
    std::string oracle;  // how the expected values were produced
};

struct CaseResult {
    int index = 0;
    bool passed = false;
    std::optional<RunStatus> status;  // empty when the case could not run
    std::uint64_t steps = 0;
    std::vector<CellValue> expected;
    std::vector<CellValue> actual;
    std::string message;
};

struct AttemptReport {
    std::string exercise_id;
    bool passed = false;
    std::vector<CaseResult> case_results;
    double elapsed_seconds = 0;
    std::set<MistakeCategory> mistake_categories;
    std::vector<std::uint64_t> step_counts;
    std::vector<std::string> diagnostics;
};

/// Address of a case cell reference in `prog`, if any.
inline std::optional<int> resolve_cell(std::string_view ref, const Program& prog) {
    if (ref.size() > 2 && ref.front() == '[' && ref.back() == ']') {
        const auto lit = parse_numeric_literal(ref.substr(1, ref.size() - 2));
        if (lit && Addr::valid(lit->value)) return lit->value;
        return std::nullopt;
    }
    if (const Symbol* s = prog.symbols.find(ref)) return s->addr.value();
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Instruction-level execution log used by the categorizer.

struct ExecutedInstruction {
    int addr = 0;
    Instruction instr;
    std::string operand_ref;  // data symbol name, number, or "#v"
    bool taken = false;
    Word acc;
    Flags flags;
};

struct CaseRun {
    RunStatus status = RunStatus::StepLimit;
    std::uint64_t steps = 0;
    MachineState final_state;
    std::vector<ExecutedInstruction> log;
    std::string missing_cell;  // set when an input cell does not resolve
};

namespace detail {

inline std::string operand_ref(const Instruction& in, const Program& prog) {
    if (in.mode == Mode::Immediate) return "#" + std::to_string(in.operand);
    if (in.mode == Mode::None) return "";
    if (const Symbol* s = prog.symbols.at(Addr::of(in.operand), SymbolKind::DataCell)) return to_upper(s->name);
    return std::to_string(in.operand);
}

}  // namespace detail

inline constexpr std::size_t kMaxLoggedInstructions = 200000;

inline CaseRun run_case(const Program& prog, const OracleCase& c, std::uint64_t step_budget, bool keep_log) {
    CaseRun out;
    MachineState state = load(prog);
    for (const auto& in : c.inputs) {
        const auto addr = resolve_cell(in.ref, prog);
        if (!addr) {
            out.missing_cell = in.ref;
            out.final_state = state;
            return out;
        }
        state.ram[*addr] = in.value;
    }
    int start = state.pc.value();
    while (state.runnable() && out.steps < step_budget) {
        if (state.phase == Phase::Fetch1) start = state.pc.value();
        detail::advance(state, false);
        ++out.steps;
        if (!keep_log || out.log.size() >= kMaxLoggedInstructions) continue;
        if (state.phase != Phase::Fetch1 && state.runnable()) continue;
        const auto instr = detail::try_decode(state);
        if (!instr) continue;
        ExecutedInstruction e;
        e.addr = start;
        e.instr = *instr;
        e.operand_ref = detail::operand_ref(*instr, prog);
        e.taken = is_jump(instr->op) && jump_taken(instr->op, state.flags);
        e.acc = state.acc;
        e.flags = state.flags;
        out.log.push_back(std::move(e));
    }
    out.status = state.halted ? RunStatus::Halted : state.fault ? RunStatus::Fault : RunStatus::StepLimit;
    out.final_state = std::move(state);
    return out;
}

// ---------------------------------------------------------------------------
// Control-flow graphs

/// Basic-block graph of the code reachable from address 0. Successors are
/// ordered (fall-through first, then jump target); a block with no
/// successor ends in HLT or an undecodable word.
struct ControlFlowGraph {
    std::vector<std::vector<int>> succ;  // block 0 is the entry
};

inline ControlFlowGraph build_cfg(const Program& prog) {
    const auto ram = ram_image(prog);
    std::map<int, std::vector<int>> isucc;  // per instruction address
    std::vector<int> work{0};
    while (!work.empty()) {
        const int a = work.back();
        work.pop_back();
        if (isucc.count(a)) continue;
        std::vector<int> next;
        try {
            const Instruction in = decode(ram[a], ram[(a + 1) % kRamSize]);
            const int fall = (a + 2) % kRamSize;
            if (in.op == Opcode::HLT) {
            } else if (in.op == Opcode::JMP) {
                next = {in.operand};
            } else if (is_conditional_jump(in.op)) {
                next = {fall, in.operand};
            } else {
                next = {fall};
            }
        } catch (const IsaError&) {
        }
        isucc[a] = next;
        for (int n : next) work.push_back(n);
    }
    std::map<int, int> preds;
    for (const auto& [a, ns] : isucc)
        for (int n : ns) ++preds[n];
    auto is_head = [&](int a) {
        if (a == 0 || preds[a] != 1) return true;
        for (const auto& [p, ns] : isucc)
            if (std::find(ns.begin(), ns.end(), a) != ns.end()) return ns.size() != 1 || p == a;
        return true;
    };
    std::map<int, int> block_of;
    std::vector<int> heads;
    for (const auto& [a, ns] : isucc) {
        (void)ns;
        if (is_head(a)) {
            block_of[a] = static_cast<int>(heads.size());
            heads.push_back(a);
        }
    }
    std::sort(heads.begin(), heads.end());
    for (std::size_t i = 0; i < heads.size(); ++i) block_of[heads[i]] = static_cast<int>(i);
    ControlFlowGraph g;
    g.succ.resize(heads.size());
    for (std::size_t i = 0; i < heads.size(); ++i) {
        int a = heads[i];
        for (std::size_t guard = 0; guard <= isucc.size(); ++guard) {
            const auto& ns = isucc.at(a);
            if (ns.size() == 1 && !block_of.count(ns[0])) {
                a = ns[0];
                continue;
            }
            for (int n : ns) g.succ[i].push_back(block_of.at(n));
            break;
        }
    }
    return g;
}

/// Rooted isomorphism preserving successor order.
inline bool cfg_isomorphic(const ControlFlowGraph& a, const ControlFlowGraph& b) {
    if (a.succ.size() != b.succ.size()) return false;
    if (a.succ.empty()) return true;
    std::map<int, int> fwd, bwd;
    std::vector<std::pair<int, int>> work{{0, 0}};
    while (!work.empty()) {
        const auto [u, v] = work.back();
        work.pop_back();
        const auto f = fwd.find(u);
        const auto r = bwd.find(v);
        if (f != fwd.end() || r != bwd.end()) {
            if (f == fwd.end() || r == bwd.end() || f->second != v || r->second != u) return false;
            continue;
        }
        fwd[u] = v;
        bwd[v] = u;
        if (a.succ[u].size() != b.succ[v].size()) return false;
        for (std::size_t i = 0; i < a.succ[u].size(); ++i) work.push_back({a.succ[u][i], b.succ[v][i]});
    }
    return fwd.size() == a.succ.size();
}

// ---------------------------------------------------------------------------
// Categorization
//
// Rules, applied to every failing case:
//   StepLimit                                   -> NonTermination
//   first diverging instruction involves a jump -> JumpLogic
//   same mnemonic, different addressing mode    -> AddressingMode
//   different ALU mnemonic, or same ALU mnemonic
//   and mode with a different ACC or flag result -> ArithmeticOrFlags
//   submission faults where the reference runs  -> ArithmeticOrFlags
// Over the whole submission:
//   CFG not isomorphic to the reference         -> HighLevelMapping
// Nothing fired -> Other.

namespace detail {

inline bool alu_like(Opcode op) { return op != Opcode::STO && op != Opcode::HLT && op != Opcode::NOP && !is_jump(op); }

inline std::optional<MistakeCategory> first_divergence(const CaseRun& sub, const CaseRun& ref) {
    const std::size_t n = std::min(sub.log.size(), ref.log.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = sub.log[i];
        const auto& r = ref.log[i];
        const bool jumpy = is_jump(s.instr.op) || is_jump(r.instr.op);
        if (jumpy) {
            if (s.instr.op != r.instr.op || s.taken != r.taken) return MistakeCategory::JumpLogic;
            continue;
        }
        if (s.instr.op == r.instr.op && s.instr.mode != r.instr.mode) return MistakeCategory::AddressingMode;
        if (s.instr.op != r.instr.op) {
            if (alu_like(s.instr.op) && alu_like(r.instr.op)) return MistakeCategory::ArithmeticOrFlags;
            return std::nullopt;
        }
        if (s.acc != r.acc || !(s.flags == r.flags)) {
            if (alu_like(s.instr.op)) return MistakeCategory::ArithmeticOrFlags;
            return std::nullopt;
        }
        if (s.operand_ref != r.operand_ref) return std::nullopt;
    }
    if (sub.status == RunStatus::Fault && ref.status != RunStatus::Fault) return MistakeCategory::ArithmeticOrFlags;
    return std::nullopt;
}

}  // namespace detail

inline std::set<MistakeCategory> categorize_mistakes(const AttemptReport& draft, const SourceUnit& reference_solution,
                                                     const Exercise& ex, const Program& submission) {
    std::set<MistakeCategory> out;
    if (draft.passed) return out;
    Program ref;
    try {
        ref = assemble(reference_solution);
    } catch (const AssembleError&) {
        return {MistakeCategory::Other};
    }
    if (!cfg_isomorphic(build_cfg(submission), build_cfg(ref))) out.insert(MistakeCategory::HighLevelMapping);
    for (const auto& cr : draft.case_results) {
        if (cr.passed || !cr.status) continue;
        if (*cr.status == RunStatus::StepLimit) {
            out.insert(MistakeCategory::NonTermination);
            continue;
        }
        const OracleCase& c = ex.cases.at(static_cast<std::size_t>(cr.index));
        const CaseRun s = run_case(submission, c, ex.step_budget, true);
        const CaseRun r = run_case(ref, c, ex.step_budget, true);
        if (auto cat = detail::first_divergence(s, r)) out.insert(*cat);
    }
    if (out.empty()) out.insert(MistakeCategory::Other);
    return out;
}

// ---------------------------------------------------------------------------
// Grading

inline AttemptReport grade_attempt(const Exercise& ex, const SourceUnit& submission, double elapsed_seconds) {
    AttemptReport report;
    report.exercise_id = ex.id;
    report.elapsed_seconds = elapsed_seconds;
    Program prog;
    try {
        prog = assemble(submission);
    } catch (const AssembleError& e) {
        bool illegal_mode = false;
        for (const auto& d : e.diagnostics()) {
            report.diagnostics.push_back(format_diagnostic(d, submission.origin));
            illegal_mode = illegal_mode || d.kind == Diagnostic::Kind::IllegalMode;
        }
        report.mistake_categories = {illegal_mode ? MistakeCategory::AddressingMode : MistakeCategory::Other};
        return report;
    }
    bool all = !ex.cases.empty();
    for (std::size_t i = 0; i < ex.cases.size(); ++i) {
        const OracleCase& c = ex.cases[i];
        CaseResult cr;
        cr.index = static_cast<int>(i);
        cr.expected = c.expected;
        const CaseRun run = run_case(prog, c, ex.step_budget, false);
        if (!run.missing_cell.empty()) {
            cr.message = "no cell named '" + run.missing_cell + "'";
        } else {
            cr.status = run.status;
            cr.steps = run.steps;
            bool ok = run.status == RunStatus::Halted;
            for (const auto& e : c.expected) {
                const auto addr = resolve_cell(e.ref, prog);
                if (!addr) {
                    cr.message = "no cell named '" + e.ref + "'";
                    ok = false;
                    continue;
                }
                const Word got = run.final_state.ram[*addr];
                cr.actual.push_back({e.ref, got});
                ok = ok && got == e.value;
            }
            if (run.status == RunStatus::StepLimit)
                cr.message = "step budget of " + std::to_string(ex.step_budget) + " exhausted";
            else if (run.status == RunStatus::Fault)
                cr.message = run.final_state.fault->detail;
            cr.passed = ok;
        }
        report.step_counts.push_back(cr.steps);
        all = all && cr.passed;
        report.case_results.push_back(std::move(cr));
    }
    report.passed = all;
    if (!report.passed) report.mistake_categories = categorize_mistakes(report, ex.reference_solution, ex, prog);
    return report;
}

// ---------------------------------------------------------------------------
// JSON

inline json cells_to_json(const std::vector<CellValue>& cells) {
    json j = json::object();
    for (const auto& c : cells) j[c.ref] = c.value.value();
    return j;
}

inline std::vector<CellValue> cells_from_json(const json& j) {
    std::vector<CellValue> out;
    for (const auto& [k, v] : j.items()) {
        const int x = v.get<int>();
        if (x < -128 || x > 127) throw std::out_of_range("cell value out of range for '" + k + "'");
        out.push_back({k, Word::of(x)});
    }
    return out;
}

inline json exercise_to_json(const Exercise& ex) {
    json cases = json::array();
    for (const auto& c : ex.cases) cases.push_back({{"inputs", cells_to_json(c.inputs)}, {"expected", cells_to_json(c.expected)}});
    return json{{"id", ex.id},
                {"prompt", ex.prompt},
                {"kind", std::string(exercise_kind_name(ex.kind))},
                {"cases", cases},
                {"stepBudget", ex.step_budget},
                {"objectives", ex.objectives},
                {"referenceSolution", ex.reference_solution.text()},
                {"oracle", ex.oracle}};
}

inline Exercise exercise_from_json(const json& j) {
    Exercise ex;
    ex.id = j.at("id").get<std::string>();
    ex.prompt = j.value("prompt", "");
    const auto kind = j.value("kind", "WriteAssembly");
    if (kind == "WriteAssembly")
        ex.kind = ExerciseKind::WriteAssembly;
    else if (kind == "CompleteAssembly")
        ex.kind = ExerciseKind::CompleteAssembly;
    else if (kind == "ExplainTrace")
        ex.kind = ExerciseKind::ExplainTrace;
    else
        throw std::runtime_error("unknown exercise kind '" + kind + "'");
    for (const auto& c : j.at("cases")) ex.cases.push_back({cells_from_json(c.at("inputs")), cells_from_json(c.at("expected"))});
    ex.step_budget = j.value("stepBudget", std::uint64_t{10000});
    ex.objectives = j.value("objectives", std::vector<std::string>{});
    ex.reference_solution = SourceUnit::from_text(j.at("referenceSolution").get<std::string>(), ex.id + ".reference");
    ex.oracle = j.value("oracle", "");
    return ex;
}

inline json to_json(const AttemptReport& r) {
    json cases = json::array();
    for (const auto& c : r.case_results) {
        cases.push_back({{"case", c.index},
                         {"passed", c.passed},
                         {"status", c.status ? json(std::string(run_status_name(*c.status))) : json(nullptr)},
                         {"steps", c.steps},
                         {"expected", cells_to_json(c.expected)},
                         {"actual", cells_to_json(c.actual)},
                         {"message", c.message}});
    }
    json cats = json::array();
    for (auto c : r.mistake_categories) cats.push_back(std::string(category_name(c)));
    return json{{"exerciseId", r.exercise_id},    {"passed", r.passed},         {"caseResults", cases},
                {"elapsedSeconds", r.elapsed_seconds}, {"mistakeCategories", cats}, {"stepCounts", r.step_counts},
                {"diagnostics", r.diagnostics}};
}

// ---------------------------------------------------------------------------
// Oracles

namespace oracle {

inline int wrap(long long v) { return static_cast<int>(((v + 128) % 256 + 256) % 256) - 128; }

inline int add(int a, int b) { return wrap(static_cast<long long>(a) + b); }

inline int parity(int v) { return v % 2 != 0 ? 1 : 0; }

/// 1 when repeated n -> n/2 (even) or 3n+1 (odd) reaches 1.
inline int collatz_reaches_one(long long n, int max_iterations = 100000) {
    for (int i = 0; i < max_iterations && n > 1; ++i) n = n % 2 == 0 ? n / 2 : 3 * n + 1;
    return n == 1 ? 1 : 0;
}

/// Runs a MiniHL program and reads back the named variables.
inline std::vector<CellValue> minihl_outputs(std::string_view program, const minihl::Env& inputs,
                                             const std::vector<std::string>& outputs) {
    const minihl::Env env = minihl::interpret(minihl::parse(program), inputs);
    std::vector<CellValue> out;
    for (const auto& name : outputs) out.push_back({name, env.at(name)});
    return out;
}

}  // namespace oracle

// ---------------------------------------------------------------------------
// Shipped bank

namespace bank_source {

inline constexpr std::string_view kAddImmediate = R"(// RESULT = X + 20
        LOD X
        ADD #20
        STO RESULT
        HLT
X:      0
RESULT: 0
)";

inline constexpr std::string_view kAddDirect = R"(// RESULT = X + contents of cell 20
        LOD X
        ADD 20
        STO RESULT
        HLT
X:      0
RESULT: 0
)";

inline constexpr std::string_view kIfElseMinihl = "VAR SUM = 0\nIF SUM == 2 THEN SUM = 3 ELSE SUM = 5 ENDIF\n";

inline constexpr std::string_view kIfElseComplete = R"(        LOD SUM
        CMP #2
        JNZ ELSE
        LOD #3
        JMP ENDIF
ELSE:   LOD #5
ENDIF:  STO SUM
        HALT
SUM:    0
)";

inline constexpr std::string_view kIfElseIncomplete = R"(        LOD SUM
        CMP #2
        JNZ ELSE
        LOD #3
ELSE:   LOD #5
ENDIF:  STO SUM
        HALT
SUM:    0
)";

inline constexpr std::string_view kOddEven = R"(// RESULT = 1 when VAR1 is odd, 0 when even
        LOD VAR1
        DIV #2
        MUL #2
        CMP VAR1
        JZ EVEN
        LOD #1
        STO RESULT
        HLT
EVEN:   LOD #0
        STO RESULT
        HLT
VAR1:   0
RESULT: 0
)";

inline constexpr std::string_view kHighLow = R"(// HIGH = larger of VAR1, VAR2; LOW = smaller (signed)
        LOD VAR1
        CMP VAR2
        JN SECOND
        STO HIGH
        LOD VAR2
        STO LOW
        HLT
SECOND: STO LOW
        LOD VAR2
        STO HIGH
        HLT
VAR1:   0
VAR2:   0
HIGH:   0
LOW:    0
)";

inline constexpr std::string_view kCollatz = R"(// SAT = 1 once N (positive) reaches 1 under n -> n/2, 3n+1.
// The value is kept as three base-40 digits H:M:L; N is scratch after setup.
        LOD N
        DIV #40
        STO M
        MUL #-40
        ADD N
        STO L
STEP:   LOD L
        DIV #2
        MUL #-2
        ADD L
        JZ EVEN
        LOD L           // odd: 3v+1 with carries
        MUL #3
        ADD #1
        STO N
        DIV #40
        STO C
        MUL #-40
        ADD N
        STO L
        LOD M
        MUL #3
        ADD C
        STO N
        DIV #40
        STO C
        MUL #-40
        ADD N
        STO M
        LOD H
        MUL #3
        ADD C
        STO H
EVEN:   LOD H           // halve, remainders move down a digit
        DIV #2
        STO C
        MUL #-2
        ADD H
        MUL #40
        ADD M
        STO N
        LOD C
        STO H
        LOD N
        DIV #2
        STO M
        MUL #-2
        ADD N
        MUL #40
        ADD L
        DIV #2
        STO L
        LOD H
        ADD M
        JNZ STEP
        LOD L
        CMP #1
        JNZ STEP
        LOD #1
        STO SAT
        HLT
N:      0
H:      0
M:      0
L:      0
C:      0
SAT:    0
)";

inline constexpr std::string_view kCountOddMinihl = R"(VAR N = 0
VAR I = 0
VAR COUNT = 0
I = 1
WHILE I <= N DO
  IF I - I / 2 * 2 != 0 THEN COUNT = COUNT + 1 ENDIF
  I = I + 1
ENDWHILE
)";

inline constexpr std::string_view kCountOdd = R"(// COUNT = number of odd values in 1..N
        LOD #1
        STO I
LOOP:   LOD I
        CMP N
        JN BODY
        JZ BODY
        HLT
BODY:   LOD I
        DIV #2
        MUL #2
        CMP I
        JZ NEXT
        LOD COUNT
        ADD #1
        STO COUNT
NEXT:   LOD I
        ADD #1
        STO I
        JMP LOOP
N:      0
I:      0
COUNT:  0
)";

}  // namespace bank_source

inline Exercise make_add_immediate() {
    Exercise ex;
    ex.id = "addImmediate";
    ex.kind = ExerciseKind::ExplainTrace;
    ex.prompt =
        "Step through the program below one micro-instruction at a time. For ADD #20, list what the Control Unit, "
        "ALU and buses do at each step.";
    ex.objectives = {"LO1", "LO5", "LO6", "LO7"};
    ex.reference_solution = SourceUnit::from_text(bank_source::kAddImmediate, "addImmediate.s");
    ex.oracle = "RESULT = wrap8(X + 20)";
    for (int x : {0, 5, 100, 107, -20, -128}) ex.cases.push_back({{{"X", Word::of(x)}}, {{"RESULT", Word::of(oracle::add(x, 20))}}});
    return ex;
}

inline Exercise make_add_direct() {
    Exercise ex;
    ex.id = "addDirect";
    ex.kind = ExerciseKind::ExplainTrace;
    ex.prompt =
        "Same as addImmediate but with ADD 20, which adds the contents of memory cell 20. Point out the extra step "
        "and its bus traffic.";
    ex.objectives = {"LO4", "LO5", "LO6", "LO7"};
    ex.reference_solution = SourceUnit::from_text(bank_source::kAddDirect, "addDirect.s");
    ex.oracle = "RESULT = wrap8(X + RAM[20])";
    for (auto [x, m] : {std::pair{5, 7}, {0, -3}, {100, 50}, {-128, -1}, {20, 20}, {1, 0}})
        ex.cases.push_back({{{"X", Word::of(x)}, {"[20]", Word::of(m)}}, {{"RESULT", Word::of(oracle::add(x, m))}}});
    return ex;
}

inline Exercise make_complete_if_else() {
    Exercise ex;
    ex.id = "completeIfElse";
    ex.kind = ExerciseKind::CompleteAssembly;
    ex.prompt = std::string("This listing should implement ") + std::string(bank_source::kIfElseMinihl.substr(12)) +
                "One instruction is missing after LOD #3. Add it.\n\n" + std::string(bank_source::kIfElseIncomplete);
    ex.objectives = {"LO2", "LO4", "LO9"};
    ex.reference_solution = SourceUnit::from_text(bank_source::kIfElseComplete, "completeIfElse.s");
    ex.oracle = "MiniHL interpreter on the IF-THEN-ELSE program";
    for (int sum : {2, 9, -128, -1, 0, 1, 3, 127}) {
        const minihl::Env in{{"SUM", Word::of(sum)}};
        ex.cases.push_back({{{"SUM", Word::of(sum)}}, oracle::minihl_outputs(bank_source::kIfElseMinihl, in, {"SUM"})});
    }
    return ex;
}

inline Exercise make_odd_even() {
    Exercise ex;
    ex.id = "oddEven";
    ex.kind = ExerciseKind::WriteAssembly;
    ex.prompt = "Write a program that stores 1 in RESULT when the value in VAR1 is odd and 0 when it is even.";
    ex.objectives = {"LO3", "LO4", "LO8", "LO9"};
    ex.reference_solution = SourceUnit::from_text(bank_source::kOddEven, "oddEven.s");
    ex.oracle = "RESULT = VAR1 mod 2 != 0";
    std::vector<int> inputs;
    for (int v = 0; v <= 20; ++v) inputs.push_back(v);
    for (int v : {-1, -2, -7, -128, 127, 100}) inputs.push_back(v);
    for (int v : inputs) ex.cases.push_back({{{"VAR1", Word::of(v)}}, {{"RESULT", Word::of(oracle::parity(v))}}});
    return ex;
}

inline constexpr std::uint64_t kHighLowSeed = 7;

inline Exercise make_high_low() {
    Exercise ex;
    ex.id = "highLow";
    ex.kind = ExerciseKind::WriteAssembly;
    ex.prompt =
        "VAR1 and VAR2 hold signed bytes. Store the larger in HIGH and the smaller in LOW. Try VAR1 = 7Fh, VAR2 = 80h.";
    ex.objectives = {"LO3", "LO8", "LO9"};
    ex.reference_solution = SourceUnit::from_text(bank_source::kHighLow, "highLow.s");
    ex.oracle = "HIGH = max(VAR1, VAR2), LOW = min(VAR1, VAR2), signed";
    std::vector<std::pair<int, int>> pairs = {{Word::from_byte(0x7F).value(), Word::from_byte(0x80).value()},
                                              {Word::from_byte(0x80).value(), Word::from_byte(0x7F).value()},
                                              {5, 5}};
    std::mt19937_64 rng(kHighLowSeed);
    std::uniform_int_distribution<int> word(-128, 127);
    for (int i = 0; i < 10; ++i) {
        const int a = word(rng);
        pairs.push_back({a, word(rng)});
    }
    for (auto [a, b] : pairs)
        ex.cases.push_back({{{"VAR1", Word::of(a)}, {"VAR2", Word::of(b)}},
                            {{"HIGH", Word::of(std::max(a, b))}, {"LOW", Word::of(std::min(a, b))}}});
    return ex;
}

inline Exercise make_collatz() {
    Exercise ex;
    ex.id = "collatz";
    ex.kind = ExerciseKind::WriteAssembly;
    ex.prompt =
        "Write a program that sets SAT to 1 when the positive number in N reaches 1 under the Collatz map "
        "(halve when even, 3n+1 when odd). Intermediate values exceed one byte.";
    ex.objectives = {"LO2", "LO3", "LO10"};
    ex.reference_solution = SourceUnit::from_text(bank_source::kCollatz, "collatz.s");
    ex.step_budget = 100000;
    ex.oracle = "brute-force Collatz iteration in 64-bit integers";
    for (int n = 1; n <= 30; ++n)
        ex.cases.push_back({{{"N", Word::of(n)}}, {{"SAT", Word::of(oracle::collatz_reaches_one(n))}}});
    return ex;
}

inline Exercise make_count_odd() {
    Exercise ex;
    ex.id = "countOdd";
    ex.kind = ExerciseKind::WriteAssembly;
    ex.prompt = std::string("Translate this program to assembly:\n\n") + std::string(bank_source::kCountOddMinihl);
    ex.objectives = {"LO2", "LO9", "LO10"};
    ex.reference_solution = SourceUnit::from_text(bank_source::kCountOdd, "countOdd.s");
    ex.step_budget = 50000;
    ex.oracle = "MiniHL interpreter on the prompt program";
    for (int n : {0, 1, 2, 7, 10, 50, 126, -5}) {
        const minihl::Env in{{"N", Word::of(n)}};
        ex.cases.push_back({{{"N", Word::of(n)}}, oracle::minihl_outputs(bank_source::kCountOddMinihl, in, {"COUNT"})});
    }
    return ex;
}

inline const std::vector<Exercise>& builtin_exercises() {
    static const std::vector<Exercise> bank = {make_add_immediate(), make_add_direct(), make_complete_if_else(),
                                               make_odd_even(),      make_high_low(),   make_collatz(),
                                               make_count_odd()};
    return bank;
}

inline const Exercise* find_exercise(std::string_view id, const std::vector<Exercise>& bank = builtin_exercises()) {
    for (const auto& ex : bank)
        if (ex.id == id) return &ex;
    return nullptr;
}

}  // namespace acsim
