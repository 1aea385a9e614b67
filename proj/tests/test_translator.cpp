#include <gtest/gtest.h>

#include <fstream>
#include <regex>
#include <sstream>
#include <set>

#include "acsim/exercises.hpp"
#include "acsim/translator.hpp"
#include "support/minihl_gen.hpp"

using namespace acsim;

namespace {

int run_var(const minihl::Ast& ast, const minihl::Env& env, const std::string& var) {
    const Program p = assemble(translate(ast));
    MachineState s = load(p);
    for (const auto& [n, w] : minihl::initial_env(ast, env)) s.ram[p.symbols.find(n)->addr.value()] = w;
    const RunOutcome r = run(s, {});
    EXPECT_EQ(r.status, RunStatus::Halted);
    return r.final_state.ram[p.symbols.find(var)->addr.value()].value();
}

}  // namespace

TEST(Translate, IfElseExample) {
    const auto ast = minihl::parse(bank_source::kIfElseMinihl);
    const SourceUnit out = translate(ast);
    const Program p = assemble(out);
    const Symbol* sum = p.symbols.find("SUM");
    ASSERT_NE(sum, nullptr);
    EXPECT_EQ(sum->kind, SymbolKind::DataCell);
    EXPECT_EQ(run_var(ast, {{"SUM", Word::of(2)}}, "SUM"), 3);
    EXPECT_EQ(run_var(ast, {{"SUM", Word::of(9)}}, "SUM"), 5);
    EXPECT_EQ(out.text().find("VAR"), std::string::npos);
    EXPECT_NE(out.text().find("HLT"), std::string::npos);
}

TEST(Translate, DataCellsFollowCodeInDeclarationOrder) {
    const auto ast = minihl::parse("VAR B = 4\nVAR A = -3\nA = (A + 1) * (B - 2)\n");
    const Program p = assemble(translate(ast));
    const int b = p.symbols.find("B")->addr.value();
    const int a = p.symbols.find("A")->addr.value();
    EXPECT_EQ(b, p.code_cells());
    EXPECT_EQ(a, b + 1);
    EXPECT_EQ(run_var(ast, {}, "A"), -4);
}

TEST(Translate, LabelsAreFreshAndUnique) {
    acsim::testing::MiniHLGenerator gen(99, {12, 3, 2});
    for (int k = 0; k < 50; ++k) {
        const auto ast = minihl::parse(gen.program());
        const SourceUnit out = translate(ast);
        std::set<std::string> defined;
        const std::regex label(R"(^([A-Za-z_][A-Za-z0-9_]*):)");
        for (const auto& line : out.lines) {
            std::smatch m;
            if (std::regex_search(line, m, label)) {
                EXPECT_TRUE(defined.insert(m[1]).second) << m[1];
            }
        }
        for (const auto& [n, w] : ast.vars) EXPECT_TRUE(defined.count(n));
    }
}

TEST(Translate, NonTerminationIsPreserved) {
    const auto ast = minihl::parse("VAR A = 0\nWHILE A == 0 DO A = A * 1 ENDWHILE\n");
    const CheckLimits limits{20};
    const Outcome ref = reference_outcome(ast, {}, limits);
    EXPECT_EQ(ref.status, OutcomeStatus::NonTerminating);
    const Outcome mach = machine_outcome(ast, assemble(translate(ast)), {}, limits);
    EXPECT_EQ(mach, ref);
}

TEST(Translate, DivisionByZeroIsPreserved) {
    const auto ast = minihl::parse("VAR A = 0\nVAR B = 5\nB = B / A\n");
    const Verdict v = check_translation(ast, translate(ast), sample_envs(ast, 10, 1));
    EXPECT_TRUE(v.correct);
    EXPECT_EQ(reference_outcome(ast, {}, {}).status, OutcomeStatus::Fault);
}

TEST(Check, CounterexampleForMissingJump) {
    const auto ast = minihl::parse(bank_source::kIfElseMinihl);
    const Verdict bad = check_translation(ast, SourceUnit::from_text(bank_source::kIfElseIncomplete), sample_envs(ast, 20, 42));
    ASSERT_FALSE(bad.correct);
    ASSERT_TRUE(bad.counterexample);
    EXPECT_EQ(bad.counterexample->input.at("SUM").value(), 2);
    EXPECT_EQ(bad.counterexample->expected.env.at("SUM").value(), 3);
    EXPECT_EQ(bad.counterexample->actual.env.at("SUM").value(), 5);

    const Verdict good = check_translation(ast, SourceUnit::from_text(bank_source::kIfElseComplete), sample_envs(ast, 20, 42));
    EXPECT_TRUE(good.correct);
    EXPECT_EQ(good.cases_run, 20);
}

TEST(Check, CandidateErrors) {
    const auto ast = minihl::parse("VAR A = 0\nA = 1\n");
    try {
        check_translation(ast, SourceUnit::from_text("LOD #1\nSTO B\nHLT\nB: 0"), sample_envs(ast, 3, 1));
        FAIL();
    } catch (const CheckError& e) {
        EXPECT_EQ(e.kind(), CheckError::Kind::MissingVariableCell);
    }
    try {
        check_translation(ast, SourceUnit::from_text("STO #1"), sample_envs(ast, 3, 1));
        FAIL();
    } catch (const CheckError& e) {
        EXPECT_EQ(e.kind(), CheckError::Kind::AssembleFailed);
    }
}

TEST(SampleEnvs, BoundariesLiteralsThenSeededRandom) {
    const auto ast = minihl::parse("VAR A = 0\nVAR B = 0\nIF A == 50 THEN B = 1 ENDIF\n");
    const auto envs = sample_envs(ast, 20, 42);
    ASSERT_EQ(envs.size(), 20u);
    const int bounds[] = {-128, -1, 0, 1, 127};
    for (int i = 0; i < 5; ++i) {
        EXPECT_EQ(envs[i].at("A").value(), bounds[i]);
        EXPECT_EQ(envs[i].at("B").value(), bounds[(i + 1) % 5]);
    }
    EXPECT_EQ(literal_values(ast), (std::vector<int>{0, 1, 2, 49, 50, 51}));
    for (int i = 5; i < 11; ++i) EXPECT_EQ(envs[i].at("A").value(), literal_values(ast)[i - 5]);
    EXPECT_EQ(sample_envs(ast, 20, 42), envs);
    EXPECT_NE(sample_envs(ast, 20, 43), envs);
}

TEST(StepBudget, CoversStructuredPrograms) {
    EXPECT_EQ(step_budget_for(1000, 10), 7u * 1001 * 11);
}

TEST(Differential, GeneratedProgramsAgreeWithInterpreter) {
    // Translations that do not fit in RAM are drawn again; they are rare.
    int drawn = 0, fitted = 0, cases = 0;
    for (std::uint64_t seed = 1000; fitted < 300; ++seed) {
        ++drawn;
        acsim::testing::MiniHLGenerator gen(seed);
        const auto ast = minihl::parse(gen.program());
        const SourceUnit asm_text = translate(ast);
        try {
            assemble(asm_text);
        } catch (const AssembleError& e) {
            ASSERT_EQ(e.diagnostics().front().kind, Diagnostic::Kind::ImageOverflow);
            continue;
        }
        ++fitted;
        const Verdict v = check_translation(ast, asm_text, sample_envs(ast, 5, seed));
        EXPECT_TRUE(v.correct) << minihl::to_source(ast);
        cases += v.cases_run;
    }
    EXPECT_LT(drawn - fitted, drawn / 20);
    EXPECT_EQ(cases, 1500);
}

TEST(Differential, ShippedMiniHLSamples) {
    for (const char* name : {"if_else.mhl", "count_odd.mhl", "max3.mhl"}) {
        std::ifstream in(std::string(ACSIM_SAMPLES_DIR) + "/" + name);
        std::stringstream text;
        text << in.rdbuf();
        ASSERT_FALSE(text.str().empty()) << name;
        const auto ast = minihl::parse(text.str());
        const Verdict v = check_translation(ast, translate(ast), sample_envs(ast, 40, 7));
        EXPECT_TRUE(v.correct) << name;
    }
}

TEST(Json, VerdictShape) {
    const auto ast = minihl::parse(bank_source::kIfElseMinihl);
    const json j = to_json(check_translation(ast, SourceUnit::from_text(bank_source::kIfElseIncomplete), sample_envs(ast, 20, 42)));
    EXPECT_EQ(j["type"], "verdict");
    EXPECT_EQ(j["correct"], false);
    EXPECT_EQ(j["counterexample"]["input"]["SUM"], 2);
    EXPECT_EQ(j["counterexample"]["expectedStatus"], "Completed");
    EXPECT_EQ(env_from_json(json{{"sum", 4}}).at("SUM").value(), 4);
    EXPECT_THROW(env_from_json(json{{"sum", 400}}), std::out_of_range);
}
