#pragma once

// Two-pass assembler and disassembler.
//
// Dialect, one statement per line:
//
//     [LABEL:] MNEMONIC [OPERAND]   // comment
//     NAME: value                   data cell
//     LABEL:                        binds to the next instruction
//
// Operands: `#n` immediate, a bare name or number is a direct address.
// Numbers are decimal or hex with a trailing h (7Fh). Mnemonics and names
// are case-insensitive. Instruction k occupies cells 2k and 2k+1; data cells
// follow the last instruction in source order.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acsim/isa.hpp"
#include "acsim/word.hpp"

namespace acsim {

struct SourceUnit {
    std::vector<std::string> lines;
    std::string origin = "inline";

    static SourceUnit from_text(std::string_view text, std::string origin = "inline") {
        SourceUnit unit;
        unit.origin = std::move(origin);
        std::string line;
        for (char c : text) {
            if (c == '\n') {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                unit.lines.push_back(std::move(line));
                line.clear();
            } else {
                line += c;
            }
        }
        if (!line.empty()) unit.lines.push_back(std::move(line));
        return unit;
    }

    std::string text() const {
        std::string out;
        for (const auto& l : lines) {
            out += l;
            out += '\n';
        }
        return out;
    }
};

enum class SymbolKind { CodeLabel, DataCell };

struct Symbol {
    std::string name;  // spelling from the defining line
    Addr addr;
    SymbolKind kind = SymbolKind::CodeLabel;

    friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Label table; names are unique ignoring case. Definition order is kept.
class SymbolTable {
public:
    bool add(Symbol sym) {
        const std::string key = to_upper(sym.name);
        if (index_.count(key)) return false;
        index_.emplace(key, entries_.size());
        entries_.push_back(std::move(sym));
        return true;
    }

    const Symbol* find(std::string_view name) const {
        auto it = index_.find(to_upper(name));
        return it == index_.end() ? nullptr : &entries_[it->second];
    }

    /// First symbol defined at `addr`, preferring `kind` when several share it.
    const Symbol* at(Addr addr, std::optional<SymbolKind> kind = std::nullopt) const {
        const Symbol* first = nullptr;
        for (const auto& s : entries_) {
            if (s.addr != addr) continue;
            if (!kind || s.kind == *kind) return &s;
            if (!first) first = &s;
        }
        return first;
    }

    const std::vector<Symbol>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    friend bool operator==(const SymbolTable& a, const SymbolTable& b) { return a.entries_ == b.entries_; }

private:
    std::vector<Symbol> entries_;
    std::map<std::string, std::size_t> index_;
};

struct Cell {
    Addr addr;
    Word value;

    friend bool operator==(const Cell&, const Cell&) = default;
};

struct ListingEntry {
    Addr addr;
    int line = 0;  // 1-based source line
};

struct Program {
    std::vector<Cell> image;  // ascending addresses
    SymbolTable symbols;
    Addr entry;  // always 0
    std::vector<ListingEntry> listing;

    /// Cell count of the code region (two per instruction).
    int code_cells() const {
        int first_data = image.empty() ? 0 : image.back().addr.value() + 1;
        for (const auto& s : symbols.entries())
            if (s.kind == SymbolKind::DataCell) first_data = std::min(first_data, s.addr.value());
        return first_data;
    }
};

struct Diagnostic {
    enum class Kind { UndefinedLabel, DuplicateLabel, IllegalMode, OperandOutOfRange, ImageOverflow, SyntaxError };

    Kind kind;
    int line = 0;
    std::string message;
};

inline std::string_view diagnostic_kind_name(Diagnostic::Kind k) {
    switch (k) {
        case Diagnostic::Kind::UndefinedLabel: return "UndefinedLabel";
        case Diagnostic::Kind::DuplicateLabel: return "DuplicateLabel";
        case Diagnostic::Kind::IllegalMode: return "IllegalMode";
        case Diagnostic::Kind::OperandOutOfRange: return "OperandOutOfRange";
        case Diagnostic::Kind::ImageOverflow: return "ImageOverflow";
        case Diagnostic::Kind::SyntaxError: return "SyntaxError";
    }
    return "?";
}

inline std::string format_diagnostic(const Diagnostic& d, std::string_view origin = "") {
    std::ostringstream os;
    if (!origin.empty()) os << origin << ":";
    os << d.line << ": " << diagnostic_kind_name(d.kind) << ": " << d.message;
    return os.str();
}

class AssembleError : public std::runtime_error {
public:
    explicit AssembleError(std::vector<Diagnostic> diags, const std::string& origin = "")
        : std::runtime_error(summary(diags, origin)), diagnostics_(std::move(diags)) {}

    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    static std::string summary(const std::vector<Diagnostic>& diags, const std::string& origin) {
        std::string s;
        for (const auto& d : diags) {
            if (!s.empty()) s += '\n';
            s += format_diagnostic(d, origin);
        }
        return s;
    }

    std::vector<Diagnostic> diagnostics_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s.front())) && s.front() != '_') return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

struct ParsedLine {
    int line = 0;
    std::optional<std::string> label;
    enum class Item { Empty, Instr, Data } item = Item::Empty;
    Opcode op = Opcode::NOP;
    std::string operand;  // raw operand token; empty when absent
    std::string data;     // raw data literal
};

}  // namespace detail

/// Assembles a source unit. Throws AssembleError carrying every diagnostic.
inline Program assemble(const SourceUnit& src) {
    using detail::ParsedLine;
    std::vector<Diagnostic> diags;
    auto error = [&](Diagnostic::Kind k, int line, std::string msg) { diags.push_back({k, line, std::move(msg)}); };

    // Pass 1a: parse lines.
    std::vector<ParsedLine> parsed;
    for (std::size_t i = 0; i < src.lines.size(); ++i) {
        const int lineno = static_cast<int>(i) + 1;
        std::string_view text = src.lines[i];
        if (auto c = text.find("//"); c != std::string_view::npos) text = text.substr(0, c);
        text = detail::trim(text);
        if (text.empty()) continue;

        ParsedLine pl;
        pl.line = lineno;
        if (auto colon = text.find(':'); colon != std::string_view::npos) {
            const auto name = detail::trim(text.substr(0, colon));
            if (!detail::is_identifier(name)) {
                error(Diagnostic::Kind::SyntaxError, lineno, "invalid label '" + std::string(name) + "'");
                continue;
            }
            if (opcode_from_name(name)) {
                error(Diagnostic::Kind::SyntaxError, lineno, "label '" + std::string(name) + "' is a mnemonic");
                continue;
            }
            pl.label = std::string(name);
            text = detail::trim(text.substr(colon + 1));
        }
        const auto tokens = detail::split_ws(text);
        if (tokens.empty()) {
            parsed.push_back(std::move(pl));
            continue;
        }
        if (auto op = opcode_from_name(tokens[0])) {
            pl.item = ParsedLine::Item::Instr;
            pl.op = *op;
            if (tokens.size() > 2) {
                error(Diagnostic::Kind::SyntaxError, lineno, "unexpected '" + std::string(tokens[2]) + "'");
                continue;
            }
            if (tokens.size() == 2) pl.operand = std::string(tokens[1]);
            if (takes_operand(*op) && pl.operand.empty()) {
                error(Diagnostic::Kind::SyntaxError, lineno, std::string(mnemonic(*op)) + " requires an operand");
                continue;
            }
            if (!takes_operand(*op) && !pl.operand.empty()) {
                error(Diagnostic::Kind::SyntaxError, lineno, std::string(mnemonic(*op)) + " takes no operand");
                continue;
            }
            parsed.push_back(std::move(pl));
            continue;
        }
        if (pl.label && tokens.size() == 1 && parse_numeric_literal(tokens[0])) {
            pl.item = ParsedLine::Item::Data;
            pl.data = std::string(tokens[0]);
            parsed.push_back(std::move(pl));
            continue;
        }
        if (pl.label && tokens.size() == 1)
            error(Diagnostic::Kind::SyntaxError, lineno, "unknown mnemonic or bad data value '" + std::string(tokens[0]) + "'");
        else
            error(Diagnostic::Kind::SyntaxError, lineno, "unknown mnemonic '" + std::string(tokens[0]) + "'");
    }

    // Pass 1b: lay out code from 0, then data cells.
    int instr_count = 0;
    for (const auto& pl : parsed)
        if (pl.item == ParsedLine::Item::Instr) ++instr_count;
    const int code_end = instr_count * 2;

    Program prog;
    std::vector<std::string> pending;  // standalone labels awaiting an instruction
    std::vector<int> pending_lines;
    int next_instr = 0;
    int next_data = code_end;
    std::vector<std::pair<int, const ParsedLine*>> placed;  // (addr, line)
    bool overflow_reported = false;
    std::set<std::string> unplaced;  // labels past the end of RAM

    auto define = [&](const std::string& name, int addr, SymbolKind kind, int line) {
        if (!Addr::valid(addr)) {
            unplaced.insert(to_upper(name));  // overflow reported separately
            return;
        }
        if (!prog.symbols.add(Symbol{name, Addr::of(addr), kind}))
            error(Diagnostic::Kind::DuplicateLabel, line, "label '" + name + "' is already defined");
    };
    auto check_fit = [&](int last_addr, int line) {
        if (last_addr >= kRamSize && !overflow_reported) {
            overflow_reported = true;
            error(Diagnostic::Kind::ImageOverflow, line,
                  "program needs more than " + std::to_string(kRamSize) + " cells");
        }
    };

    for (const auto& pl : parsed) {
        switch (pl.item) {
            case ParsedLine::Item::Empty:
                pending.push_back(*pl.label);
                pending_lines.push_back(pl.line);
                break;
            case ParsedLine::Item::Instr: {
                const int addr = next_instr * 2;
                for (std::size_t k = 0; k < pending.size(); ++k)
                    define(pending[k], addr, SymbolKind::CodeLabel, pending_lines[k]);
                pending.clear();
                pending_lines.clear();
                if (pl.label) define(*pl.label, addr, SymbolKind::CodeLabel, pl.line);
                check_fit(addr + 1, pl.line);
                placed.emplace_back(addr, &pl);
                ++next_instr;
                break;
            }
            case ParsedLine::Item::Data: {
                const int addr = next_data++;
                define(*pl.label, addr, SymbolKind::DataCell, pl.line);
                check_fit(addr, pl.line);
                placed.emplace_back(addr, &pl);
                break;
            }
        }
    }
    for (std::size_t k = 0; k < pending.size(); ++k)
        define(pending[k], std::min(code_end, kRamSize - 1), SymbolKind::CodeLabel, pending_lines[k]);

    // Pass 2: resolve operands and encode.
    for (const auto& [addr, plp] : placed) {
        const ParsedLine& pl = *plp;
        if (pl.item == ParsedLine::Item::Data) {
            const auto lit = parse_numeric_literal(pl.data);
            const auto w = lit ? literal_to_word(*lit) : std::nullopt;
            if (!w) {
                error(Diagnostic::Kind::OperandOutOfRange, pl.line, "data value '" + pl.data + "' does not fit a word");
                continue;
            }
            if (Addr::valid(addr)) {
                prog.image.push_back({Addr::of(addr), *w});
                prog.listing.push_back({Addr::of(addr), pl.line});
            }
            continue;
        }

        Instruction instr;
        instr.op = pl.op;
        instr.mode = Mode::None;
        bool ok = true;
        if (takes_operand(pl.op)) {
            std::string_view tok = pl.operand;
            if (tok.front() == '#') {
                tok.remove_prefix(1);
                instr.mode = Mode::Immediate;
                if (!mode_allowed(pl.op, Mode::Immediate)) {
                    error(Diagnostic::Kind::IllegalMode, pl.line,
                          std::string(mnemonic(pl.op)) + " does not accept an immediate operand");
                    continue;
                }
                const auto lit = parse_numeric_literal(tok);
                if (!lit) {
                    error(Diagnostic::Kind::SyntaxError, pl.line, "bad immediate literal '" + pl.operand + "'");
                    continue;
                }
                const auto w = literal_to_word(*lit);
                if (!w) {
                    error(Diagnostic::Kind::OperandOutOfRange, pl.line,
                          "immediate '" + pl.operand + "' is outside -128..127");
                    continue;
                }
                instr.operand = w->value();
            } else {
                instr.mode = Mode::Direct;
                if (auto lit = parse_numeric_literal(tok)) {
                    const auto a = literal_to_addr(*lit);
                    if (!a) {
                        error(Diagnostic::Kind::OperandOutOfRange, pl.line,
                              "address '" + pl.operand + "' is outside 0.." + std::to_string(kRamSize - 1));
                        continue;
                    }
                    instr.operand = a->value();
                } else if (detail::is_identifier(tok)) {
                    const Symbol* sym = prog.symbols.find(tok);
                    if (!sym) {
                        if (unplaced.count(to_upper(tok))) continue;
                        error(Diagnostic::Kind::UndefinedLabel, pl.line, "undefined label '" + pl.operand + "'");
                        continue;
                    }
                    instr.operand = sym->addr.value();
                } else {
                    error(Diagnostic::Kind::SyntaxError, pl.line, "bad operand '" + pl.operand + "'");
                    ok = false;
                }
            }
        }
        if (!ok || !Addr::valid(addr + 1)) continue;
        const auto [w0, w1] = encode(instr);
        prog.image.push_back({Addr::of(addr), w0});
        prog.image.push_back({Addr::of(addr + 1), w1});
        prog.listing.push_back({Addr::of(addr), pl.line});
        prog.listing.push_back({Addr::of(addr + 1), pl.line});
    }

    if (!diags.empty()) {
        std::stable_sort(diags.begin(), diags.end(), [](const auto& a, const auto& b) { return a.line < b.line; });
        throw AssembleError(std::move(diags), src.origin);
    }
    std::sort(prog.image.begin(), prog.image.end(), [](const Cell& a, const Cell& b) { return a.addr < b.addr; });
    std::sort(prog.listing.begin(), prog.listing.end(),
              [](const ListingEntry& a, const ListingEntry& b) { return a.addr < b.addr; });
    prog.entry = Addr::of(0);
    return prog;
}

inline Program assemble(std::string_view text) { return assemble(SourceUnit::from_text(text)); }

/// Canonical assembly text for a program image. Operands that match a
/// symbol are printed by name; byte pairs that do not decode become data
/// cells named D<addr>.
inline SourceUnit disassemble(const Program& prog) {
    SourceUnit out;
    out.origin = "disassembly";
    if (prog.image.empty()) {
        for (const auto& s : prog.symbols.entries())
            if (s.kind == SymbolKind::CodeLabel) out.lines.push_back(s.name + ":");
        return out;
    }

    std::map<int, Word> cells;
    for (const auto& c : prog.image) cells[c.addr.value()] = c.value;
    const int end = cells.rbegin()->first + 1;
    const int code_end = std::min(prog.code_cells(), end);

    auto cell = [&](int a) { auto it = cells.find(a); return it == cells.end() ? Word{} : it->second; };
    auto code_labels_at = [&](int a) {
        std::vector<std::string> names;
        for (const auto& s : prog.symbols.entries())
            if (s.kind == SymbolKind::CodeLabel && s.addr.value() == a) names.push_back(s.name);
        return names;
    };
    auto emit = [&](int a, const std::string& body) {
        auto names = code_labels_at(a);
        for (std::size_t k = 0; k + 1 < names.size(); ++k) out.lines.push_back(names[k] + ":");
        out.lines.push_back(names.empty() ? body : names.back() + ": " + body);
    };

    std::vector<std::pair<std::string, Word>> raw_data;  // undecodable cells, kept in order
    int a = 0;
    for (; a + 1 < code_end; a += 2) {
        std::optional<Instruction> instr;
        try {
            instr = decode(cell(a), cell(a + 1));
        } catch (const IsaError&) {
        }
        if (!instr) {
            raw_data.emplace_back("D" + std::to_string(a), cell(a));
            raw_data.emplace_back("D" + std::to_string(a + 1), cell(a + 1));
            continue;
        }
        std::string body(mnemonic(instr->op));
        if (instr->mode == Mode::Immediate) body += " #" + std::to_string(instr->operand);
        if (instr->mode == Mode::Direct) {
            const Symbol* s = prog.symbols.at(Addr::of(instr->operand),
                                              is_jump(instr->op) ? SymbolKind::CodeLabel : SymbolKind::DataCell);
            body += " " + (s ? s->name : std::to_string(instr->operand));
        }
        emit(a, body);
    }
    if (a < code_end) raw_data.emplace_back("D" + std::to_string(a), cell(a));

    // Labels past the last instruction (including end-of-code labels).
    for (const auto& s : prog.symbols.entries())
        if (s.kind == SymbolKind::CodeLabel && s.addr.value() >= code_end) out.lines.push_back(s.name + ":");

    for (const auto& [name, value] : raw_data) out.lines.push_back(name + ": " + std::to_string(value.value()));
    for (int d = code_end; d < end; ++d) {
        const Symbol* s = prog.symbols.at(Addr::of(d), SymbolKind::DataCell);
        const std::string name = (s && s->kind == SymbolKind::DataCell) ? s->name : "D" + std::to_string(d);
        out.lines.push_back(name + ": " + std::to_string(cell(d).value()));
    }
    return out;
}

/// Image as a flat 128-cell RAM array (unlisted cells are 0).
inline std::array<Word, kRamSize> ram_image(const Program& prog) {
    std::array<Word, kRamSize> ram{};
    for (const auto& c : prog.image) ram[c.addr.value()] = c.value;
    return ram;
}

}  // namespace acsim
