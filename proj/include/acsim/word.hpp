#pragma once

// Machine word and address types for the 8-bit accumulator machine.

#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace acsim {

inline constexpr int kRamSize = 128;

/// 8-bit two's-complement machine word. All arithmetic wraps modulo 256.
class Word {
public:
    constexpr Word() = default;

    /// Wraps any integer into the signed byte range (127 + 1 == -128).
    static constexpr Word wrap(int v) {
        Word w;
        w.value_ = static_cast<std::int8_t>(static_cast<std::uint8_t>(v & 0xFF));
        return w;
    }

    /// Checked construction; throws std::out_of_range outside -128..127.
    static constexpr Word of(int v) {
        if (v < -128 || v > 127) throw std::out_of_range("word value out of range: " + std::to_string(v));
        return wrap(v);
    }

    static constexpr Word from_byte(std::uint8_t b) { return wrap(b); }

    constexpr int value() const { return value_; }
    constexpr std::uint8_t byte() const { return static_cast<std::uint8_t>(value_); }

    /// Two uppercase hex digits plus the `h` suffix, e.g. -128 -> "80h".
    std::string hex() const {
        static constexpr char digits[] = "0123456789ABCDEF";
        std::string s;
        s += digits[byte() >> 4];
        s += digits[byte() & 0xF];
        s += 'h';
        return s;
    }

    friend constexpr bool operator==(Word, Word) = default;

private:
    std::int8_t value_ = 0;
};

/// RAM address, always in 0..kRamSize-1.
class Addr {
public:
    constexpr Addr() = default;

    static constexpr Addr of(int v) {
        if (!valid(v)) throw std::out_of_range("address out of range: " + std::to_string(v));
        Addr a;
        a.value_ = static_cast<std::uint8_t>(v);
        return a;
    }

    static constexpr bool valid(int v) { return v >= 0 && v < kRamSize; }

    constexpr int value() const { return value_; }

    friend constexpr auto operator<=>(Addr, Addr) = default;

private:
    std::uint8_t value_ = 0;
};

/// A numeric literal as written in source: decimal (`20`, `-1`) or hex with
/// trailing h (`7Fh`). Hex literals must start with a decimal digit so they
/// can't be confused with identifiers.
struct NumericLiteral {
    int value = 0;
    bool hex = false;
};

inline std::optional<NumericLiteral> parse_numeric_literal(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    if (text.empty() || !std::isdigit(static_cast<unsigned char>(text.front()))) return std::nullopt;

    NumericLiteral lit;
    if (text.back() == 'h' || text.back() == 'H') {
        if (negative) return std::nullopt;
        text.remove_suffix(1);
        if (text.empty() || text.size() > 6) return std::nullopt;
        int v = 0;
        for (char c : text) {
            if (!std::isxdigit(static_cast<unsigned char>(c))) return std::nullopt;
            v = v * 16 + (std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : std::toupper(c) - 'A' + 10);
        }
        lit.value = v;
        lit.hex = true;
        return lit;
    }
    if (text.size() > 6) return std::nullopt;
    int v = 0;
    for (char c : text) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        v = v * 10 + (c - '0');
    }
    lit.value = negative ? -v : v;
    return lit;
}

/// Interprets a literal as a word. Decimal must lie in -128..127; hex
/// denotes a raw byte 00h..FFh, so 80h reads as -128.
inline std::optional<Word> literal_to_word(NumericLiteral lit) {
    if (lit.hex) {
        if (lit.value > 0xFF) return std::nullopt;
        return Word::from_byte(static_cast<std::uint8_t>(lit.value));
    }
    if (lit.value < -128 || lit.value > 127) return std::nullopt;
    return Word::of(lit.value);
}

inline std::optional<Addr> literal_to_addr(NumericLiteral lit) {
    if (!Addr::valid(lit.value)) return std::nullopt;
    return Addr::of(lit.value);
}

/// Parses a word given as decimal or NNh text.
inline std::optional<Word> parse_word(std::string_view text) {
    auto lit = parse_numeric_literal(text);
    if (!lit) return std::nullopt;
    return literal_to_word(*lit);
}

inline std::string to_upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace acsim
