#pragma once

// acsim command line. Exit codes: 0 success, 1 domain failure (failed run,
// failed grade, incorrect translation), 2 usage or input error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "acsim/acsim.hpp"
#include "acsim/http_service.hpp"

namespace acsim::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kUsage = 2;

class InputError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

inline bool has_ext(const std::string& path, std::initializer_list<std::string_view> exts) {
    const auto e = std::filesystem::path(path).extension().string();
    for (auto x : exts)
        if (e == x) return true;
    return false;
}

inline minihl::Ast load_minihl(const std::string& path) {
    try {
        return minihl::parse(read_file(path));
    } catch (const minihl::ParseError& e) {
        throw InputError(path + ":" + e.what());
    }
}

/// Image JSON, assembly source (.s/.asm) or MiniHL (.mhl, translated first).
inline Program load_program(const std::string& path) {
    if (has_ext(path, {".mhl"})) return assemble(translate(load_minihl(path)));
    const std::string text = read_file(path);
    if (has_ext(path, {".s", ".asm"})) return assemble(SourceUnit::from_text(text, path));
    const json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) return assemble(SourceUnit::from_text(text, path));
    try {
        return program_from_json(j);
    } catch (const std::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline std::pair<std::string, int> parse_assignment(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("expected NAME=VALUE, got '" + spec + "'");
    const auto lit = parse_numeric_literal(std::string_view(spec).substr(eq + 1));
    if (!lit) throw InputError("bad value in '" + spec + "'");
    return {spec.substr(0, eq), lit->value};
}

inline int read_target(const MachineState& s, const PokeTarget& t) {
    if (t.kind == PokeTarget::Kind::Ram) return s.ram.at(static_cast<std::size_t>(t.addr)).value();
    if (t.kind == PokeTarget::Kind::Flag) return (t.name == "Z" ? s.flags.z : s.flags.n) ? 1 : 0;
    if (t.name == "PC") return s.pc.value();
    if (t.name == "MAR") return s.mar.value();
    if (t.name == "ACC") return s.acc.value();
    if (t.name == "MDR") return s.mdr.value();
    if (t.name == "IR.OP") return s.ir_op.value();
    return s.ir_arg.value();
}

inline std::string transfers_text(const TraceRecord& r) {
    std::string out;
    for (const auto& t : r.transfers) {
        if (!out.empty()) out += ", ";
        out += t.destination + "<-" + t.source + "(" + std::to_string(t.value) + ")";
    }
    return out;
}

inline std::string bus_text(const TraceRecord& r) {
    std::string out;
    for (const auto& b : r.bus) {
        if (!out.empty()) out += " ";
        out += std::string(bus_name(b.bus)) + ":" +
               (b.bus == Bus::Control ? std::string(signal_name(b.signal)) : std::to_string(b.value));
    }
    return out;
}

struct Options {
    std::string input;
    std::string output;
    std::string format = "text";
    std::string locale = "en";
    std::vector<std::string> pokes;
    std::vector<std::string> dumps;
    std::uint64_t max_steps = 10000;
    std::uint64_t max_iterations = 1000;
    bool digest = false;
    std::string hl;
    std::string asm_file;
    std::uint64_t seed = 42;
    int count = 20;
    std::string exercise;
    std::vector<std::string> banks;
    double elapsed = 0;
    bool list = false;
    std::string export_dir;
    std::string host = "127.0.0.1";
    unsigned short port = 8080;
};

class App {
public:
    App(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int main(std::vector<std::string> args) {
        CLI::App app{"accumulator CPU workbench"};
        app.require_subcommand(1);
        auto fmt = [&](CLI::App* sub) {
            sub->add_option("--format", o_.format, "text or jsonl")->check(CLI::IsMember({"text", "jsonl"}));
        };
        auto machine_opts = [&](CLI::App* sub) {
            sub->add_option("--poke", o_.pokes, "NAME=VALUE before running (repeatable)");
            sub->add_option("--max-steps", o_.max_steps, "micro-step limit")->check(CLI::PositiveNumber);
        };

        auto* asm_cmd = app.add_subcommand("asm", "assemble a source file");
        asm_cmd->add_option("source", o_.input)->required();
        asm_cmd->add_option("-o,--output", o_.output, "image file to write");
        fmt(asm_cmd);

        auto* dasm = app.add_subcommand("dasm", "disassemble an image");
        dasm->add_option("image", o_.input)->required();

        auto* run_cmd = app.add_subcommand("run", "run a program to completion");
        run_cmd->add_option("program", o_.input)->required();
        machine_opts(run_cmd);
        run_cmd->add_option("--dump", o_.dumps, "print NAME=VALUE after the run (repeatable)");
        run_cmd->add_flag("--digest", o_.digest, "print the final state digest");
        fmt(run_cmd);

        auto* trace = app.add_subcommand("trace", "print the micro-step trace");
        trace->add_option("program", o_.input)->required();
        machine_opts(trace);
        trace->add_option("--locale", o_.locale, "narration locale (en, es, it)");
        fmt(trace);

        auto* tr = app.add_subcommand("translate", "compile MiniHL to assembly");
        tr->add_option("program", o_.input)->required();
        tr->add_option("-o,--output", o_.output, "assembly file to write");

        auto* interp = app.add_subcommand("interp", "run MiniHL in the reference interpreter");
        interp->add_option("program", o_.input)->required();
        interp->add_option("--set", o_.pokes, "NAME=VALUE initial value (repeatable)");
        interp->add_option("--max-iterations", o_.max_iterations)->check(CLI::PositiveNumber);
        fmt(interp);

        auto* check = app.add_subcommand("check", "check an assembly translation against MiniHL");
        check->add_option("--hl", o_.hl, "MiniHL program")->required();
        check->add_option("--asm", o_.asm_file, "candidate assembly")->required();
        check->add_option("--seed", o_.seed, "environment sampling seed");
        check->add_option("--count", o_.count, "number of environments")->check(CLI::PositiveNumber);
        check->add_option("--max-iterations", o_.max_iterations)->check(CLI::PositiveNumber);
        fmt(check);

        auto* grade = app.add_subcommand("grade", "grade a submission");
        grade->add_option("submission", o_.input);
        grade->add_option("--exercise", o_.exercise, "exercise id");
        grade->add_option("--bank", o_.banks, "exercise JSON file (repeatable; replaces the shipped bank)");
        grade->add_option("--elapsed", o_.elapsed, "seconds the attempt took, as measured by the caller")
            ->check(CLI::NonNegativeNumber);
        grade->add_flag("--list", o_.list, "list exercises");
        grade->add_option("--export", o_.export_dir, "write the bank as one JSON file per exercise");
        fmt(grade);

        auto* serve = app.add_subcommand("serve", "start the session service");
        serve->add_option("--host", o_.host);
        serve->add_option("--port", o_.port);

        try {
            std::reverse(args.begin(), args.end());
            app.parse(args);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out_, err_);
            return code == 0 ? kOk : kUsage;
        }

        try {
            if (*asm_cmd) return do_asm();
            if (*dasm) return do_dasm();
            if (*run_cmd) return do_run();
            if (*trace) return do_trace();
            if (*tr) return do_translate();
            if (*interp) return do_interp();
            if (*check) return do_check();
            if (*grade) return do_grade();
            if (*serve) return do_serve();
        } catch (const AssembleError& e) {
            err_ << e.what() << "\n";
            return kUsage;
        } catch (const InputError& e) {
            err_ << "error: " << e.what() << "\n";
            return kUsage;
        } catch (const MachineError& e) {
            err_ << "error: " << e.what() << "\n";
            return kUsage;
        } catch (const CheckError& e) {
            err_ << "error: " << e.what() << "\n";
            return kUsage;
        } catch (const std::exception& e) {
            err_ << "error: " << e.what() << "\n";
            return kUsage;
        }
        return kUsage;
    }

private:
    bool jsonl() const { return o_.format == "jsonl"; }

    int do_asm() {
        const Program prog = assemble(SourceUnit::from_text(read_file(o_.input), o_.input));
        if (!o_.output.empty()) write_file(o_.output, program_to_json(prog).dump(2) + "\n");
        if (jsonl()) {
            out_ << program_to_json(prog).dump() << "\n";
            return kOk;
        }
        for (const auto& s : prog.symbols.entries())
            out_ << s.name << " " << s.addr.value() << (s.kind == SymbolKind::DataCell ? " data" : " code") << "\n";
        return kOk;
    }

    int do_dasm() {
        out_ << disassemble(load_program(o_.input)).text();
        return kOk;
    }

    MachineState prepared(const Program& prog) {
        MachineState s = load(prog);
        for (const auto& spec : o_.pokes) {
            const auto [name, value] = parse_assignment(spec);
            s = poke(std::move(s), resolve_target(name, &prog), value).first;
        }
        return s;
    }

    int do_run() {
        const Program prog = load_program(o_.input);
        RunLimits limits;
        limits.max_steps = o_.max_steps;
        const RunOutcome r = run(prepared(prog), limits);
        json dump = json::object();
        for (const auto& name : o_.dumps) dump[name] = read_target(r.final_state, resolve_target(name, &prog));
        const std::string digest = state_digest(r.final_state);
        if (jsonl()) {
            json j{{"status", std::string(run_status_name(r.status))}, {"steps", r.steps}, {"dump", dump}};
            if (r.final_state.fault) j["fault"] = r.final_state.fault->detail;
            if (o_.digest) j["digest"] = digest;
            out_ << j.dump() << "\n";
        } else {
            for (const auto& name : o_.dumps) out_ << name << "=" << dump[name].get<int>() << "\n";
            if (o_.digest) out_ << "digest=" << digest << "\n";
        }
        if (r.status == RunStatus::Halted) return kOk;
        err_ << run_status_name(r.status) << " after " << r.steps << " steps";
        if (r.final_state.fault) err_ << ": " << r.final_state.fault->detail;
        err_ << "\n";
        return kFailed;
    }

    int do_trace() {
        const Program prog = load_program(o_.input);
        MachineState s = load(prog);
        auto print = [&](const TraceRecord& rec) {
            const std::string text = Narrator::builtin().narrate(rec.narration, o_.locale);
            if (jsonl()) {
                json j = to_json(rec);
                j["text"] = text;
                out_ << j.dump() << "\n";
            } else {
                out_ << rec.step << " " << rec.phase << " [" << transfers_text(rec) << "] {" << bus_text(rec) << "} "
                     << text << "\n";
            }
        };
        for (const auto& spec : o_.pokes) {
            const auto [name, value] = parse_assignment(spec);
            auto [next, rec] = poke(std::move(s), resolve_target(name, &prog), value);
            s = std::move(next);
            print(rec);
        }
        std::uint64_t steps = 0;
        while (s.runnable() && steps < o_.max_steps) {
            auto [next, rec] = micro_step(std::move(s));
            s = std::move(next);
            ++steps;
            print(rec);
        }
        return s.halted ? kOk : kFailed;
    }

    int do_translate() {
        const std::string text = translate(load_minihl(o_.input)).text();
        if (o_.output.empty())
            out_ << text;
        else
            write_file(o_.output, text);
        return kOk;
    }

    int do_interp() {
        const minihl::Ast ast = load_minihl(o_.input);
        minihl::Env env;
        for (const auto& spec : o_.pokes) {
            const auto [name, value] = parse_assignment(spec);
            if (value < -128 || value > 127) throw InputError("value out of range in '" + spec + "'");
            env[to_upper(name)] = Word::of(value);
        }
        minihl::Env result;
        try {
            result = minihl::interpret(ast, minihl::initial_env(ast, env), {o_.max_iterations});
        } catch (const minihl::InterpretError& e) {
            err_ << e.what() << "\n";
            return kFailed;
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
        if (jsonl()) {
            out_ << env_to_json(result).dump() << "\n";
        } else {
            for (const auto& [name, init] : ast.vars) {
                (void)init;
                out_ << name << "=" << result.at(name).value() << "\n";
            }
        }
        return kOk;
    }

    int do_check() {
        const minihl::Ast ast = load_minihl(o_.hl);
        const SourceUnit candidate = SourceUnit::from_text(read_file(o_.asm_file), o_.asm_file);
        const auto envs = sample_envs(ast, o_.count, o_.seed);
        const Verdict v = check_translation(ast, candidate, envs, {o_.max_iterations});
        if (jsonl()) {
            out_ << to_json(v).dump() << "\n";
        } else if (v.correct) {
            out_ << "correct (" << v.cases_run << " environments)\n";
        } else {
            const auto& c = *v.counterexample;
            auto line = [&](const char* label, const minihl::Env& env) {
                out_ << label;
                for (const auto& [k, w] : env) out_ << " " << k << "=" << w.value();
                out_ << "\n";
            };
            out_ << "incorrect after " << v.cases_run << " environments\n";
            line("input:   ", c.input);
            line("expected:", c.expected.env);
            out_ << "          (" << outcome_name(c.expected.status) << ")\n";
            line("actual:  ", c.actual.env);
            out_ << "          (" << outcome_name(c.actual.status) << ")\n";
        }
        return v.correct ? kOk : kFailed;
    }

    std::vector<Exercise> bank() const {
        if (o_.banks.empty()) return builtin_exercises();
        std::vector<Exercise> out;
        for (const auto& path : o_.banks) {
            const json j = json::parse(read_file(path), nullptr, false);
            if (j.is_discarded()) throw InputError(path + ": not JSON");
            try {
                if (j.is_array())
                    for (const auto& e : j) out.push_back(exercise_from_json(e));
                else
                    out.push_back(exercise_from_json(j));
            } catch (const json::exception& e) {
                throw InputError(path + ": " + e.what());
            }
        }
        return out;
    }

    int do_grade() {
        const auto exercises = bank();
        if (!o_.export_dir.empty()) {
            std::filesystem::create_directories(o_.export_dir);
            for (const auto& ex : exercises)
                write_file((std::filesystem::path(o_.export_dir) / (ex.id + ".json")).string(), exercise_to_json(ex).dump(2) + "\n");
            return kOk;
        }
        if (o_.list) {
            for (const auto& ex : exercises) {
                out_ << ex.id << " " << exercise_kind_name(ex.kind);
                for (const auto& lo : ex.objectives) out_ << " " << lo;
                out_ << "\n";
            }
            return kOk;
        }
        if (o_.exercise.empty() || o_.input.empty()) throw InputError("grade needs --exercise and a submission file");
        const Exercise* ex = find_exercise(o_.exercise, exercises);
        if (!ex) throw InputError("unknown exercise '" + o_.exercise + "'");
        const AttemptReport r =
            grade_attempt(*ex, SourceUnit::from_text(read_file(o_.input), o_.input), o_.elapsed);
        if (jsonl()) {
            out_ << to_json(r).dump() << "\n";
        } else {
            out_ << r.exercise_id << ": " << (r.passed ? "passed" : "failed") << " in " << r.elapsed_seconds << " s\n";
            for (const auto& d : r.diagnostics) out_ << "  " << d << "\n";
            for (const auto& c : r.case_results) {
                if (c.passed) continue;
                out_ << "  case " << c.index << ":";
                for (std::size_t i = 0; i < c.expected.size(); ++i) {
                    out_ << " " << c.expected[i].ref << " expected " << c.expected[i].value.value();
                    if (i < c.actual.size()) out_ << " got " << c.actual[i].value.value();
                }
                if (!c.message.empty()) out_ << " (" << c.message << ")";
                out_ << "\n";
            }
            if (!r.mistake_categories.empty()) {
                out_ << "  mistakes:";
                for (auto c : r.mistake_categories) out_ << " " << category_name(c);
                out_ << "\n";
            }
        }
        return r.passed ? kOk : kFailed;
    }

    int do_serve() {
        SessionManager sessions;
        HttpService service(sessions, o_.host, o_.port);
        err_ << "listening on http://" << o_.host << ":" << service.port() << "\n";
        service.run();
        return kOk;
    }

    std::ostream& out_;
    std::ostream& err_;
    Options o_;
};

inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return App(out, err).main(std::move(args));
}

}  // namespace acsim::cli
