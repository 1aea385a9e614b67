#pragma once

// Micro-step execution engine.
//
// Each instruction runs as a fixed schedule of micro-steps, one bus
// transaction per step:
//
//   Fetch1   MAR <- PC, read RAM[PC] into MDR
//   Fetch2   IR.OP <- MDR, PC <- PC + 1
//   Fetch3   MAR <- PC, read RAM[PC] into MDR
//   Fetch4   IR.ARG <- MDR, PC <- PC + 1
//   Decode   the control unit identifies the instruction (no bus traffic)
//   Execute1 / Execute2   instruction specific; direct-mode ALU operands are
//            read in Execute1 and combined in Execute2
//
// The engine is pull based: callers ask for steps. Every step yields a
// TraceRecord with the register transfers, bus events and a narration key.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "acsim/assembler.hpp"
#include "acsim/digest.hpp"
#include "acsim/isa.hpp"
#include "acsim/word.hpp"

namespace acsim {

enum class Phase : std::uint8_t { Fetch1, Fetch2, Fetch3, Fetch4, Decode, Execute1, Execute2 };

constexpr std::string_view phase_name(Phase p) {
    switch (p) {
        case Phase::Fetch1: return "Fetch1";
        case Phase::Fetch2: return "Fetch2";
        case Phase::Fetch3: return "Fetch3";
        case Phase::Fetch4: return "Fetch4";
        case Phase::Decode: return "Decode";
        case Phase::Execute1: return "Execute1";
        case Phase::Execute2: return "Execute2";
    }
    return "?";
}

inline constexpr std::string_view kEditPhase = "Edit";

enum class FaultKind : std::uint8_t { DivideByZero = 1, IllegalInstruction = 2 };

struct Fault {
    FaultKind kind;
    std::string detail;

    friend bool operator==(const Fault&, const Fault&) = default;
};

constexpr std::string_view fault_name(FaultKind k) {
    return k == FaultKind::DivideByZero ? "DivideByZero" : "IllegalInstruction";
}

struct MachineState {
    Addr pc;
    Word ir_op;
    Word ir_arg;
    Word acc;
    Addr mar;
    Word mdr;
    Flags flags;
    std::array<Word, kRamSize> ram{};
    Phase phase = Phase::Fetch1;
    bool halted = false;
    std::optional<Fault> fault;
    std::uint64_t records = 0;  // trace records produced so far (micro-steps and edits)

    bool runnable() const { return !halted && !fault; }

    friend bool operator==(const MachineState&, const MachineState&) = default;
};

/// Fixed-order serialization: PC, IR.OP, IR.ARG, ACC, MAR, MDR, flags
/// (bit0 Z, bit1 N), phase, halted, fault code, then the 128 RAM bytes.
inline std::array<std::uint8_t, 10 + kRamSize> serialize_state(const MachineState& s) {
    std::array<std::uint8_t, 10 + kRamSize> out{};
    out[0] = static_cast<std::uint8_t>(s.pc.value());
    out[1] = s.ir_op.byte();
    out[2] = s.ir_arg.byte();
    out[3] = s.acc.byte();
    out[4] = static_cast<std::uint8_t>(s.mar.value());
    out[5] = s.mdr.byte();
    out[6] = static_cast<std::uint8_t>((s.flags.z ? 1 : 0) | (s.flags.n ? 2 : 0));
    out[7] = static_cast<std::uint8_t>(s.phase);
    out[8] = s.halted ? 1 : 0;
    out[9] = s.fault ? static_cast<std::uint8_t>(s.fault->kind) : 0;
    for (int i = 0; i < kRamSize; ++i) out[10 + i] = s.ram[i].byte();
    return out;
}

inline std::string state_digest(const MachineState& s) {
    const auto bytes = serialize_state(s);
    return sha256_hex(bytes);
}

enum class Bus : std::uint8_t { Address, Data, Control };
enum class Signal : std::uint8_t { Read, Write, Halt };

constexpr std::string_view bus_name(Bus b) {
    return b == Bus::Address ? "Address" : b == Bus::Data ? "Data" : "Control";
}
constexpr std::string_view signal_name(Signal s) {
    return s == Signal::Read ? "READ" : s == Signal::Write ? "WRITE" : "HALT";
}

struct BusEvent {
    Bus bus;
    int value = 0;                // address or data payload
    Signal signal = Signal::Read;  // control payload

    static BusEvent address(int a) { return {Bus::Address, a, Signal::Read}; }
    static BusEvent data(Word w) { return {Bus::Data, w.value(), Signal::Read}; }
    static BusEvent control(Signal s) { return {Bus::Control, 0, s}; }

    friend bool operator==(const BusEvent&, const BusEvent&) = default;
};

/// One register transfer, e.g. {"PC", "MAR", 4}. Destinations are PC,
/// IR.OP, IR.ARG, ACC, MAR, MDR, Z, N, RAM[a], HALT or FAULT.
struct Transfer {
    std::string source;
    std::string destination;
    int value = 0;

    friend bool operator==(const Transfer&, const Transfer&) = default;
};

using ParamValue = std::variant<int, std::string>;
using Params = std::map<std::string, ParamValue>;

struct Narration {
    std::string key;
    Params params;

    friend bool operator==(const Narration&, const Narration&) = default;
};

struct TraceRecord {
    std::uint64_t step = 0;
    std::string phase;
    std::vector<Transfer> transfers;
    std::vector<BusEvent> bus;
    Narration narration;
    std::string digest;  // empty when the producer skipped hashing

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// Narration keys the engine can emit, with the parameters it supplies.
inline const std::map<std::string, std::vector<std::string>>& narration_schema() {
    static const std::map<std::string, std::vector<std::string>> schema = {
        {"fetch.addr", {"pc", "value"}},
        {"fetch.opcode", {"value", "hex", "pc"}},
        {"fetch.operand_addr", {"pc", "value"}},
        {"fetch.operand", {"value", "pc"}},
        {"decode", {"text", "mnemonic", "mode", "operand"}},
        {"decode.illegal", {"hex", "reason"}},
        {"exec.read", {"addr", "value"}},
        {"exec.load", {"value"}},
        {"exec.alu", {"mnemonic", "left", "right", "result"}},
        {"exec.compare", {"left", "right", "z", "n"}},
        {"exec.not", {"value", "result"}},
        {"exec.store", {"addr", "value"}},
        {"exec.jump", {"mnemonic", "target"}},
        {"exec.branch.taken", {"mnemonic", "target"}},
        {"exec.branch.not_taken", {"mnemonic", "pc"}},
        {"exec.nop", {}},
        {"exec.halt", {}},
        {"fault.divide_by_zero", {"left"}},
        {"edit", {"target", "value"}},
    };
    return schema;
}

class MachineError : public std::runtime_error {
public:
    enum class Kind { NotRunnable, OutOfRange, UnknownTarget };

    MachineError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Fresh machine with the program image in RAM.
inline MachineState load(const Program& prog) {
    MachineState s;
    s.ram = ram_image(prog);
    s.pc = prog.entry;
    return s;
}

inline MachineState load_ram(const std::array<Word, kRamSize>& ram) {
    MachineState s;
    s.ram = ram;
    return s;
}

namespace detail {

inline std::string ram_name(int a) { return "RAM[" + std::to_string(a) + "]"; }

inline std::optional<Instruction> try_decode(const MachineState& s, std::string* reason = nullptr) {
    try {
        return decode(s.ir_op, s.ir_arg);
    } catch (const IsaError& e) {
        if (reason) *reason = e.what();
        return std::nullopt;
    }
}

inline void set_flags(MachineState& s, TraceRecord& rec, Flags f) {
    s.flags = f;
    rec.transfers.push_back({"ALU", "Z", f.z ? 1 : 0});
    rec.transfers.push_back({"ALU", "N", f.n ? 1 : 0});
}

inline void raise_fault(MachineState& s, TraceRecord& rec, FaultKind kind, std::string detail) {
    rec.transfers.push_back({"CU", "FAULT", static_cast<int>(kind)});
    s.fault = Fault{kind, std::move(detail)};
    s.phase = Phase::Fetch1;
}

/// ALU step shared by immediate Execute1 and direct Execute2.
inline void apply_alu(MachineState& s, TraceRecord& rec, Opcode op, Word operand) {
    const Word before = s.acc;
    if (op == Opcode::DIV && operand.value() == 0) {
        rec.narration = {"fault.divide_by_zero", {{"left", before.value()}}};
        raise_fault(s, rec, FaultKind::DivideByZero, "division of " + std::to_string(before.value()) + " by zero");
        return;
    }
    const AluResult r = alu(op, s.acc, operand);
    if (r.writes_acc) {
        s.acc = r.value;
        rec.transfers.push_back({"ALU", "ACC", r.value.value()});
    }
    set_flags(s, rec, r.flags);
    if (op == Opcode::LOD) {
        rec.narration = {"exec.load", {{"value", r.value.value()}}};
    } else if (op == Opcode::CMP) {
        rec.narration = {"exec.compare",
                         {{"left", before.value()}, {"right", operand.value()},
                          {"z", r.flags.z ? 1 : 0}, {"n", r.flags.n ? 1 : 0}}};
    } else {
        rec.narration = {"exec.alu",
                         {{"mnemonic", std::string(mnemonic(op))}, {"left", before.value()},
                          {"right", operand.value()}, {"result", r.value.value()}}};
    }
}

/// Advances one micro-step in place. Hashing is optional so bulk runs that
/// discard the trace stay cheap.
inline TraceRecord advance(MachineState& s, bool with_digest) {
    if (!s.runnable())
        throw MachineError(MachineError::Kind::NotRunnable,
                           s.halted ? "machine is halted" : "machine is faulted");
    TraceRecord rec;
    rec.step = ++s.records;
    rec.phase = std::string(phase_name(s.phase));

    auto read_to_mdr = [&](int addr) {
        s.mar = Addr::of(addr);
        s.mdr = s.ram[addr];
        rec.bus = {BusEvent::address(addr), BusEvent::control(Signal::Read), BusEvent::data(s.mdr)};
    };

    switch (s.phase) {
        case Phase::Fetch1:
        case Phase::Fetch3: {
            const int pc = s.pc.value();
            rec.transfers.push_back({"PC", "MAR", pc});
            read_to_mdr(pc);
            rec.transfers.push_back({ram_name(pc), "MDR", s.mdr.value()});
            rec.narration = {s.phase == Phase::Fetch1 ? "fetch.addr" : "fetch.operand_addr",
                             {{"pc", pc}, {"value", s.mdr.value()}}};
            s.phase = s.phase == Phase::Fetch1 ? Phase::Fetch2 : Phase::Fetch4;
            break;
        }
        case Phase::Fetch2:
        case Phase::Fetch4: {
            const bool opcode = s.phase == Phase::Fetch2;
            (opcode ? s.ir_op : s.ir_arg) = s.mdr;
            rec.transfers.push_back({"MDR", opcode ? "IR.OP" : "IR.ARG", s.mdr.value()});
            // PC wraps inside RAM; a program running off the end restarts at 0.
            s.pc = Addr::of((s.pc.value() + 1) % kRamSize);
            rec.transfers.push_back({"PC+1", "PC", s.pc.value()});
            if (opcode)
                rec.narration = {"fetch.opcode", {{"value", s.mdr.value()}, {"hex", s.mdr.hex()}, {"pc", s.pc.value()}}};
            else
                rec.narration = {"fetch.operand", {{"value", s.mdr.value()}, {"pc", s.pc.value()}}};
            s.phase = opcode ? Phase::Fetch3 : Phase::Decode;
            break;
        }
        case Phase::Decode: {
            std::string reason;
            const auto instr = try_decode(s, &reason);
            if (!instr) {
                rec.narration = {"decode.illegal", {{"hex", s.ir_op.hex()}, {"reason", reason}}};
                raise_fault(s, rec, FaultKind::IllegalInstruction, reason);
                break;
            }
            rec.narration = {"decode",
                             {{"text", instr->text()}, {"mnemonic", std::string(mnemonic(instr->op))},
                              {"mode", std::string(mode_name(instr->mode))}, {"operand", instr->operand}}};
            s.phase = Phase::Execute1;
            break;
        }
        case Phase::Execute1: {
            std::string reason;
            const auto instr = try_decode(s, &reason);
            if (!instr) {
                rec.narration = {"decode.illegal", {{"hex", s.ir_op.hex()}, {"reason", reason}}};
                raise_fault(s, rec, FaultKind::IllegalInstruction, reason);
                break;
            }
            const Opcode op = instr->op;
            s.phase = Phase::Fetch1;
            if (is_alu_operand_op(op)) {
                if (instr->mode == Mode::Direct) {
                    rec.transfers.push_back({"IR.ARG", "MAR", instr->operand});
                    read_to_mdr(instr->operand);
                    rec.transfers.push_back({ram_name(instr->operand), "MDR", s.mdr.value()});
                    rec.narration = {"exec.read", {{"addr", instr->operand}, {"value", s.mdr.value()}}};
                    s.phase = Phase::Execute2;
                } else {
                    apply_alu(s, rec, op, Word::of(instr->operand));
                }
            } else if (op == Opcode::STO) {
                const int a = instr->operand;
                s.mar = Addr::of(a);
                s.mdr = s.acc;
                rec.transfers.push_back({"IR.ARG", "MAR", a});
                rec.transfers.push_back({"ACC", "MDR", s.acc.value()});
                rec.bus = {BusEvent::address(a), BusEvent::data(s.acc), BusEvent::control(Signal::Write)};
                s.ram[a] = s.mdr;
                rec.transfers.push_back({"MDR", ram_name(a), s.mdr.value()});
                rec.narration = {"exec.store", {{"addr", a}, {"value", s.acc.value()}}};
            } else if (is_jump(op)) {
                const bool taken = jump_taken(op, s.flags);
                if (taken) {
                    s.pc = Addr::of(instr->operand);
                    rec.transfers.push_back({"IR.ARG", "PC", instr->operand});
                }
                const std::string name(mnemonic(op));
                if (op == Opcode::JMP)
                    rec.narration = {"exec.jump", {{"mnemonic", name}, {"target", instr->operand}}};
                else if (taken)
                    rec.narration = {"exec.branch.taken", {{"mnemonic", name}, {"target", instr->operand}}};
                else
                    rec.narration = {"exec.branch.not_taken", {{"mnemonic", name}, {"pc", s.pc.value()}}};
            } else if (op == Opcode::NOT) {
                const Word before = s.acc;
                const AluResult r = alu(Opcode::NOT, s.acc, Word{});
                s.acc = r.value;
                rec.transfers.push_back({"ALU", "ACC", r.value.value()});
                set_flags(s, rec, r.flags);
                rec.narration = {"exec.not", {{"value", before.value()}, {"result", r.value.value()}}};
            } else if (op == Opcode::NOP) {
                rec.narration = {"exec.nop", {}};
            } else if (op == Opcode::HLT) {
                rec.bus = {BusEvent::control(Signal::Halt)};
                rec.transfers.push_back({"CU", "HALT", 1});
                s.halted = true;
                rec.narration = {"exec.halt", {}};
            }
            break;
        }
        case Phase::Execute2: {
            std::string reason;
            const auto instr = try_decode(s, &reason);
            if (!instr || !is_alu_operand_op(instr->op) || instr->mode != Mode::Direct) {
                if (reason.empty()) reason = "instruction register changed during execution";
                rec.narration = {"decode.illegal", {{"hex", s.ir_op.hex()}, {"reason", reason}}};
                raise_fault(s, rec, FaultKind::IllegalInstruction, reason);
                break;
            }
            s.phase = Phase::Fetch1;
            apply_alu(s, rec, instr->op, s.mdr);
            break;
        }
    }
    if (with_digest) rec.digest = state_digest(s);
    return rec;
}

}  // namespace detail

/// Advances exactly one micro-step. Throws MachineError(NotRunnable) when the
/// machine is halted or faulted; faults raised by the step itself are
/// recorded in the returned state.
inline std::pair<MachineState, TraceRecord> micro_step(MachineState state) {
    TraceRecord rec = detail::advance(state, true);
    return {std::move(state), std::move(rec)};
}

/// Runs micro-steps until the next instruction's Fetch1 is pending, or the
/// machine halts or faults.
inline std::pair<MachineState, std::vector<TraceRecord>> step_instruction(MachineState state) {
    std::vector<TraceRecord> records;
    do {
        records.push_back(detail::advance(state, true));
    } while (state.runnable() && state.phase != Phase::Fetch1);
    return {std::move(state), std::move(records)};
}

enum class RunStatus { Halted, StepLimit, Fault };

constexpr std::string_view run_status_name(RunStatus s) {
    return s == RunStatus::Halted ? "Halted" : s == RunStatus::StepLimit ? "StepLimit" : "Fault";
}

struct RunLimits {
    std::uint64_t max_steps = 10000;
    bool retain_trace = false;
    /// Optional cap on taken jumps whose target is at or before the jump
    /// itself; exceeding it stops the run with StepLimit.
    std::optional<std::uint64_t> max_back_jumps;
};

struct RunOutcome {
    RunStatus status = RunStatus::StepLimit;
    std::uint64_t steps = 0;
    MachineState final_state;
    std::vector<TraceRecord> trace;
    std::uint64_t back_jumps = 0;
};

inline RunOutcome run(MachineState state, const RunLimits& limits) {
    if (limits.max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
    RunOutcome out;
    while (state.runnable() && out.steps < limits.max_steps) {
        if (state.phase == Phase::Execute1) {
            if (const auto instr = detail::try_decode(state);
                instr && is_jump(instr->op) && jump_taken(instr->op, state.flags) &&
                instr->operand <= (state.pc.value() + kRamSize - 2) % kRamSize) {
                ++out.back_jumps;
                if (limits.max_back_jumps && out.back_jumps > *limits.max_back_jumps) break;
            }
        }
        TraceRecord rec = detail::advance(state, limits.retain_trace);
        ++out.steps;
        if (limits.retain_trace) out.trace.push_back(std::move(rec));
    }
    out.status = state.halted ? RunStatus::Halted : state.fault ? RunStatus::Fault : RunStatus::StepLimit;
    out.final_state = std::move(state);
    return out;
}

/// What a manual edit targets.
struct PokeTarget {
    enum class Kind { Ram, Register, Flag };

    Kind kind = Kind::Ram;
    int addr = 0;      // Ram
    std::string name;  // Register: PC ACC MAR MDR IR.OP IR.ARG; Flag: Z N

    static PokeTarget ram(int a) { return {Kind::Ram, a, {}}; }
    static PokeTarget reg(std::string n) { return {Kind::Register, 0, to_upper(n)}; }
    static PokeTarget flag(std::string n) { return {Kind::Flag, 0, to_upper(n)}; }

    std::string label() const { return kind == Kind::Ram ? detail::ram_name(addr) : name; }
};

/// Applies a manual edit between micro-steps and returns the synthetic
/// "edit" record describing it.
inline std::pair<MachineState, TraceRecord> poke(MachineState s, const PokeTarget& target, int value) {
    if (!s.runnable())
        throw MachineError(MachineError::Kind::NotRunnable,
                           s.halted ? "machine is halted; reset before editing" : "machine is faulted; reset before editing");
    auto need = [&](bool ok, const std::string& what) {
        if (!ok) throw MachineError(MachineError::Kind::OutOfRange, what + " out of range: " + std::to_string(value));
    };
    const bool word_range = value >= -128 && value <= 127;
    std::string dest;
    switch (target.kind) {
        case PokeTarget::Kind::Ram:
            if (!Addr::valid(target.addr))
                throw MachineError(MachineError::Kind::OutOfRange,
                                   "RAM address out of range: " + std::to_string(target.addr));
            need(word_range, "RAM value");
            s.ram[target.addr] = Word::of(value);
            dest = detail::ram_name(target.addr);
            break;
        case PokeTarget::Kind::Register: {
            const std::string& n = target.name;
            if (n == "PC" || n == "MAR") {
                need(Addr::valid(value), n);
                (n == "PC" ? s.pc : s.mar) = Addr::of(value);
            } else if (n == "ACC" || n == "MDR" || n == "IR.OP" || n == "IR.ARG") {
                need(word_range, n);
                Word& w = n == "ACC" ? s.acc : n == "MDR" ? s.mdr : n == "IR.OP" ? s.ir_op : s.ir_arg;
                w = Word::of(value);
            } else {
                throw MachineError(MachineError::Kind::UnknownTarget, "unknown register '" + n + "'");
            }
            dest = n;
            break;
        }
        case PokeTarget::Kind::Flag:
            if (target.name != "Z" && target.name != "N")
                throw MachineError(MachineError::Kind::UnknownTarget, "unknown flag '" + target.name + "'");
            need(value == 0 || value == 1, "flag value");
            (target.name == "Z" ? s.flags.z : s.flags.n) = value == 1;
            dest = target.name;
            break;
    }
    TraceRecord rec;
    rec.step = ++s.records;
    rec.phase = std::string(kEditPhase);
    rec.transfers.push_back({"EDIT", dest, value});
    rec.narration = {"edit", {{"target", dest}, {"value", value}}};
    rec.digest = state_digest(s);
    return {std::move(s), std::move(rec)};
}

/// RAM address for `[12]`, `12`, `[NAME]` or a program symbol NAME.
inline std::optional<int> resolve_ram(std::string_view name, const Program* prog = nullptr) {
    std::string_view inner = name;
    if (inner.size() > 2 && inner.front() == '[' && inner.back() == ']') inner = inner.substr(1, inner.size() - 2);
    if (auto lit = parse_numeric_literal(inner)) return lit->value;
    if (prog) {
        if (const Symbol* s = prog->symbols.find(inner)) return s->addr.value();
    }
    return std::nullopt;
}

/// Looks up a poke target by name: a register (PC, ACC, MAR, MDR, IR.OP,
/// IR.ARG), a flag (Z, N), a RAM address (`[12]` or a bare number) or a
/// program symbol. Register and flag names win over symbols; write `[N]` for
/// a data cell called N.
inline PokeTarget resolve_target(std::string_view name, const Program* prog = nullptr) {
    const std::string upper = to_upper(name);
    if (upper == "PC" || upper == "ACC" || upper == "MAR" || upper == "MDR" || upper == "IR.OP" || upper == "IR.ARG")
        return PokeTarget::reg(upper);
    if (upper == "Z" || upper == "N") return PokeTarget::flag(upper);
    if (auto a = resolve_ram(name, prog)) return PokeTarget::ram(*a);
    throw MachineError(MachineError::Kind::UnknownTarget, "unknown target '" + std::string(name) + "'");
}

}  // namespace acsim
