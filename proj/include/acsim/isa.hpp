#pragma once

// Instruction set: opcode table, addressing modes, two-word binary encoding
// and the ALU. Everything here is a pure function over value types.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "acsim/word.hpp"

namespace acsim {

enum class Opcode : std::uint8_t {
    NOP = 0, LOD, STO, ADD, SUB, MUL, DIV, AND, OR, NOT, CMP, JMP, JZ, JNZ, JN, HLT
};

inline constexpr int kOpcodeCount = 16;

enum class Mode : std::uint8_t { Immediate, Direct, None };

inline constexpr std::array<std::string_view, kOpcodeCount> kMnemonics = {
    "NOP", "LOD", "STO", "ADD", "SUB", "MUL", "DIV", "AND",
    "OR",  "NOT", "CMP", "JMP", "JZ",  "JNZ", "JN",  "HLT"};

constexpr std::string_view mnemonic(Opcode op) { return kMnemonics[static_cast<int>(op)]; }

constexpr int code_of(Opcode op) { return static_cast<int>(op); }

/// Case-insensitive mnemonic lookup; HALT is accepted as an alias for HLT.
inline std::optional<Opcode> opcode_from_name(std::string_view name) {
    const std::string upper = to_upper(name);
    if (upper == "HALT") return Opcode::HLT;
    for (int i = 0; i < kOpcodeCount; ++i)
        if (kMnemonics[i] == upper) return static_cast<Opcode>(i);
    return std::nullopt;
}

inline std::optional<Opcode> opcode_from_code(int code) {
    if (code < 0 || code >= kOpcodeCount) return std::nullopt;
    return static_cast<Opcode>(code);
}

constexpr std::string_view mode_name(Mode m) {
    switch (m) {
        case Mode::Immediate: return "immediate";
        case Mode::Direct: return "direct";
        case Mode::None: return "none";
    }
    return "?";
}

constexpr bool takes_operand(Opcode op) {
    return op != Opcode::NOP && op != Opcode::NOT && op != Opcode::HLT;
}

constexpr bool is_jump(Opcode op) {
    return op == Opcode::JMP || op == Opcode::JZ || op == Opcode::JNZ || op == Opcode::JN;
}

constexpr bool is_conditional_jump(Opcode op) { return is_jump(op) && op != Opcode::JMP; }

/// Opcodes that read a value operand and feed it to the ALU.
constexpr bool is_alu_operand_op(Opcode op) {
    switch (op) {
        case Opcode::LOD: case Opcode::ADD: case Opcode::SUB: case Opcode::MUL:
        case Opcode::DIV: case Opcode::AND: case Opcode::OR:  case Opcode::CMP:
            return true;
        default:
            return false;
    }
}

constexpr bool mode_allowed(Opcode op, Mode mode) {
    if (!takes_operand(op)) return mode == Mode::None;
    if (op == Opcode::STO || is_jump(op)) return mode == Mode::Direct;
    return mode == Mode::Immediate || mode == Mode::Direct;
}

class IsaError : public std::runtime_error {
public:
    enum class Kind { IllegalMode, UnknownOpcode };

    IsaError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// A decoded instruction. `operand` holds the literal for Immediate, the
/// address for Direct and 0 for None.
struct Instruction {
    Opcode op = Opcode::NOP;
    Mode mode = Mode::None;
    int operand = 0;

    static Instruction none(Opcode op) { return {op, Mode::None, 0}; }
    static Instruction immediate(Opcode op, Word w) { return {op, Mode::Immediate, w.value()}; }
    static Instruction direct(Opcode op, Addr a) { return {op, Mode::Direct, a.value()}; }

    bool well_formed() const {
        if (!mode_allowed(op, mode)) return false;
        switch (mode) {
            case Mode::Immediate: return operand >= -128 && operand <= 127;
            case Mode::Direct: return Addr::valid(operand);
            case Mode::None: return operand == 0;
        }
        return false;
    }

    /// Canonical assembly text with a numeric operand, e.g. "ADD #20".
    std::string text() const {
        std::string s(mnemonic(op));
        if (mode == Mode::Immediate) s += " #" + std::to_string(operand);
        if (mode == Mode::Direct) s += " " + std::to_string(operand);
        return s;
    }

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

inline constexpr std::uint8_t kImmediateBit = 0x80;

/// Two-word encoding: first word = immediate bit | opcode code, second word
/// = operand byte.
inline std::pair<Word, Word> encode(const Instruction& instr) {
    if (!mode_allowed(instr.op, instr.mode))
        throw IsaError(IsaError::Kind::IllegalMode,
                       std::string(mnemonic(instr.op)) + " does not accept " +
                           std::string(mode_name(instr.mode)) + " mode");
    if (!instr.well_formed())
        throw std::out_of_range("operand out of range for " + instr.text());
    const std::uint8_t first =
        static_cast<std::uint8_t>((instr.mode == Mode::Immediate ? kImmediateBit : 0) | code_of(instr.op));
    return {Word::from_byte(first), Word::wrap(instr.operand)};
}

/// Inverse of encode. Any byte pair outside encode's image is rejected.
inline Instruction decode(Word first, Word second) {
    const std::uint8_t b = first.byte();
    const int code = b & 0x7F;
    const auto op = opcode_from_code(code);
    if (!op)
        throw IsaError(IsaError::Kind::UnknownOpcode, "unknown opcode " + std::to_string(code) + " in word " + first.hex());
    Instruction instr;
    instr.op = *op;
    if (!takes_operand(*op)) {
        instr.mode = Mode::None;
    } else {
        instr.mode = (b & kImmediateBit) ? Mode::Immediate : Mode::Direct;
    }
    if ((b & kImmediateBit) && instr.mode != Mode::Immediate)
        throw IsaError(IsaError::Kind::IllegalMode,
                       std::string(mnemonic(*op)) + " cannot carry the immediate flag");
    if (!mode_allowed(instr.op, instr.mode))
        throw IsaError(IsaError::Kind::IllegalMode,
                       std::string(mnemonic(*op)) + " does not accept " + std::string(mode_name(instr.mode)) + " mode");
    switch (instr.mode) {
        case Mode::Immediate: instr.operand = second.value(); break;
        case Mode::Direct:
            if (!Addr::valid(second.byte()))
                throw IsaError(IsaError::Kind::IllegalMode,
                               "direct operand " + second.hex() + " is outside RAM");
            instr.operand = second.byte();
            break;
        case Mode::None:
            if (second.byte() != 0)
                throw IsaError(IsaError::Kind::IllegalMode,
                               std::string(mnemonic(*op)) + " takes no operand but carries " + second.hex());
            instr.operand = 0;
            break;
    }
    return instr;
}

inline Instruction decode(std::pair<Word, Word> words) { return decode(words.first, words.second); }

struct Flags {
    bool z = false;
    bool n = false;

    static Flags of(int result) { return {result == 0, result < 0}; }

    friend bool operator==(const Flags&, const Flags&) = default;
};

struct AluResult {
    Word value;       // the computed result (for CMP, the wrapped difference)
    bool writes_acc;  // false for CMP
    Flags flags;
};

/// Applies a flag-setting operation. For NOT the operand is ignored. CMP
/// compares exactly (no wrap), so N means acc < operand for every pair.
/// Precondition: DIV with a zero operand is a fault the caller handles.
inline AluResult alu(Opcode op, Word acc, Word operand) {
    const int a = acc.value();
    const int b = operand.value();
    auto result = [](int v) { const Word w = Word::wrap(v); return AluResult{w, true, Flags::of(w.value())}; };
    switch (op) {
        case Opcode::LOD: return result(b);
        case Opcode::ADD: return result(a + b);
        case Opcode::SUB: return result(a - b);
        case Opcode::MUL: return result(a * b);
        case Opcode::DIV:
            if (b == 0) throw std::domain_error("division by zero");
            return result(a / b);  // C++ division truncates toward zero
        case Opcode::AND: return result((a != 0 && b != 0) ? 1 : 0);
        case Opcode::OR: return result((a != 0 || b != 0) ? 1 : 0);
        case Opcode::NOT: return result(a == 0 ? 1 : 0);
        case Opcode::CMP: return AluResult{Word::wrap(a - b), false, Flags::of(a - b)};
        default:
            throw std::invalid_argument(std::string(mnemonic(op)) + " is not an ALU operation");
    }
}

/// Whether a jump instruction transfers control under the given flags.
constexpr bool jump_taken(Opcode op, Flags f) {
    switch (op) {
        case Opcode::JMP: return true;
        case Opcode::JZ: return f.z;
        case Opcode::JNZ: return !f.z;
        case Opcode::JN: return f.n;
        default: return false;
    }
}

}  // namespace acsim
