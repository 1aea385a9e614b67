#include <gtest/gtest.h>

#include <set>

#include "acsim/isa.hpp"

using namespace acsim;

namespace {

// Independent signed 8-bit reduction: big integer mod 256, then sign-adjust.
int reduce(long long v) {
    long long m = v % 256;
    if (m < 0) m += 256;
    return static_cast<int>(m >= 128 ? m - 256 : m);
}

long long trunc_div(long long a, long long b) {
    const long long q = (a < 0 ? -a : a) / (b < 0 ? -b : b);
    return (a < 0) != (b < 0) ? -q : q;
}

std::vector<Instruction> all_well_formed() {
    std::vector<Instruction> out;
    for (int c = 0; c < kOpcodeCount; ++c) {
        const Opcode op = *opcode_from_code(c);
        for (Mode m : {Mode::Immediate, Mode::Direct, Mode::None}) {
            if (!mode_allowed(op, m)) continue;
            if (m == Mode::None) {
                out.push_back(Instruction::none(op));
            } else if (m == Mode::Immediate) {
                for (int v = -128; v <= 127; ++v) out.push_back(Instruction::immediate(op, Word::of(v)));
            } else {
                for (int a = 0; a < kRamSize; ++a) out.push_back(Instruction::direct(op, Addr::of(a)));
            }
        }
    }
    return out;
}

}  // namespace

TEST(Word, WrapsAndShowsHex) {
    EXPECT_EQ(Word::wrap(127 + 1).value(), -128);
    EXPECT_EQ(Word::of(-128).hex(), "80h");
    EXPECT_EQ(Word::of(127).hex(), "7Fh");
    EXPECT_EQ(Word::of(-1).hex(), "FFh");
    EXPECT_EQ(Word::of(20).hex(), "14h");
    EXPECT_THROW(Word::of(128), std::out_of_range);
    EXPECT_THROW(Addr::of(128), std::out_of_range);
}

TEST(Word, Literals) {
    EXPECT_EQ(parse_word("7Fh")->value(), 127);
    EXPECT_EQ(parse_word("80h")->value(), -128);
    EXPECT_EQ(parse_word("0FFh")->value(), -1);
    EXPECT_EQ(parse_word("-5")->value(), -5);
    EXPECT_FALSE(parse_word("128"));
    EXPECT_FALSE(parse_word("FFh"));  // hex must start with a digit
    EXPECT_FALSE(parse_word("100h"));
    EXPECT_FALSE(parse_word("abc"));
}

TEST(Opcode, NameCodeBijection) {
    std::set<std::string_view> names;
    for (int c = 0; c < kOpcodeCount; ++c) {
        const Opcode op = *opcode_from_code(c);
        EXPECT_EQ(code_of(op), c);
        EXPECT_EQ(*opcode_from_name(mnemonic(op)), op);
        names.insert(mnemonic(op));
    }
    EXPECT_EQ(names.size(), 16u);
    EXPECT_EQ(*opcode_from_name("halt"), Opcode::HLT);
    EXPECT_EQ(code_of(Opcode::JN), 14);
    EXPECT_FALSE(opcode_from_code(16));
}

TEST(Encode, Examples) {
    auto add_imm = encode(Instruction::immediate(Opcode::ADD, Word::of(20)));
    EXPECT_EQ(add_imm.first.byte(), 0x83);
    EXPECT_EQ(add_imm.second.byte(), 0x14);
    auto add_dir = encode(Instruction::direct(Opcode::ADD, Addr::of(20)));
    EXPECT_EQ(add_dir.first.byte(), 0x03);
    EXPECT_EQ(add_dir.second.byte(), 0x14);
    auto hlt = encode(Instruction::none(Opcode::HLT));
    EXPECT_EQ(hlt.first.byte(), 0x0F);
    EXPECT_EQ(hlt.second.byte(), 0x00);
    try {
        encode(Instruction::immediate(Opcode::STO, Word::of(5)));
        FAIL();
    } catch (const IsaError& e) {
        EXPECT_EQ(e.kind(), IsaError::Kind::IllegalMode);
    }
}

TEST(Decode, Examples) {
    EXPECT_EQ(decode(Word::from_byte(0x83), Word::from_byte(0x14)), Instruction::immediate(Opcode::ADD, Word::of(20)));
    EXPECT_EQ(decode(Word::of(0), Word::of(0)), Instruction::none(Opcode::NOP));
    try {
        decode(Word::from_byte(0x7F), Word::of(0));
        FAIL();
    } catch (const IsaError& e) {
        EXPECT_EQ(e.kind(), IsaError::Kind::UnknownOpcode);
    }
}

TEST(Decode, RejectsPairsOutsideEncodeImage) {
    auto illegal = [](int a, int b) {
        try {
            decode(Word::from_byte(static_cast<std::uint8_t>(a)), Word::from_byte(static_cast<std::uint8_t>(b)));
        } catch (const IsaError& e) {
            return e.kind() == IsaError::Kind::IllegalMode;
        }
        return false;
    };
    EXPECT_TRUE(illegal(0x82, 5));     // STO #5
    EXPECT_TRUE(illegal(0x8B, 0));     // JMP #0
    EXPECT_TRUE(illegal(0x03, 0x80));  // ADD 128
    EXPECT_TRUE(illegal(0x0F, 1));     // HLT with an operand
}

TEST(Encode, RoundTripExhaustiveAndInjective) {
    const auto all = all_well_formed();
    std::set<std::pair<int, int>> images;
    for (const auto& i : all) {
        ASSERT_TRUE(i.well_formed());
        const auto w = encode(i);
        ASSERT_EQ(decode(w), i) << i.text();
        images.insert({w.first.byte(), w.second.byte()});
    }
    EXPECT_EQ(images.size(), all.size());
}

TEST(Decode, EveryBytePairEitherFailsOrRoundTrips) {
    for (int a = 0; a < 256; ++a) {
        for (int b = 0; b < 256; ++b) {
            const Word w1 = Word::from_byte(static_cast<std::uint8_t>(a));
            const Word w2 = Word::from_byte(static_cast<std::uint8_t>(b));
            try {
                const Instruction i = decode(w1, w2);
                const auto back = encode(i);
                ASSERT_EQ(back.first, w1);
                ASSERT_EQ(back.second, w2);
            } catch (const IsaError&) {
            }
        }
    }
}

TEST(Alu, MatchesBigIntegerOracleForAllPairs) {
    const Opcode ops[] = {Opcode::LOD, Opcode::ADD, Opcode::SUB, Opcode::MUL, Opcode::DIV,
                          Opcode::AND, Opcode::OR,  Opcode::NOT, Opcode::CMP};
    for (Opcode op : ops) {
        for (int a = -128; a <= 127; ++a) {
            for (int b = -128; b <= 127; ++b) {
                if (op == Opcode::DIV && b == 0) {
                    EXPECT_THROW(alu(op, Word::of(a), Word::of(b)), std::domain_error);
                    continue;
                }
                long long exact = 0;
                switch (op) {
                    case Opcode::LOD: exact = b; break;
                    case Opcode::ADD: exact = static_cast<long long>(a) + b; break;
                    case Opcode::SUB: exact = static_cast<long long>(a) - b; break;
                    case Opcode::MUL: exact = static_cast<long long>(a) * b; break;
                    case Opcode::DIV: exact = trunc_div(a, b); break;
                    case Opcode::AND: exact = (a != 0) && (b != 0); break;
                    case Opcode::OR: exact = (a != 0) || (b != 0); break;
                    case Opcode::NOT: exact = a == 0; break;
                    case Opcode::CMP: exact = static_cast<long long>(a) - b; break;
                    default: break;
                }
                const AluResult r = alu(op, Word::of(a), Word::of(b));
                ASSERT_EQ(r.value.value(), reduce(exact)) << mnemonic(op) << " " << a << " " << b;
                if (op == Opcode::CMP) {
                    ASSERT_FALSE(r.writes_acc);
                    ASSERT_EQ(r.flags.z, a == b);
                    ASSERT_EQ(r.flags.n, a < b);
                } else {
                    ASSERT_TRUE(r.writes_acc);
                    ASSERT_EQ(r.flags.z, reduce(exact) == 0);
                    ASSERT_EQ(r.flags.n, reduce(exact) < 0);
                }
            }
        }
    }
}

TEST(Alu, JumpConditions) {
    EXPECT_TRUE(jump_taken(Opcode::JMP, {}));
    EXPECT_TRUE(jump_taken(Opcode::JZ, {true, false}));
    EXPECT_FALSE(jump_taken(Opcode::JNZ, {true, false}));
    EXPECT_TRUE(jump_taken(Opcode::JNZ, {false, true}));
    EXPECT_TRUE(jump_taken(Opcode::JN, {false, true}));
    EXPECT_FALSE(jump_taken(Opcode::JN, {false, false}));
}
