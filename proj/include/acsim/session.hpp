#pragma once

// Interactive simulation sessions driven by JSON commands.
//
// Command set (field "cmd"):
//   load_source{text} load_minihl{text} reset micro_step step_instruction
//   run{max_steps?} set_pacing{steps_per_second} pause
//   poke_ram{addr,value} poke_reg{name,value} poke_flag{name,value}
//   set_locale{locale} get_snapshot check_translation{minihl,asm,envs?,seed?,count?}
// Event types (field "type"):
//   assembled state_snapshot trace narration halted fault error verdict
// Every event carries a per-session "seq", increasing by one.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "acsim/assembler.hpp"
#include "acsim/json_io.hpp"
#include "acsim/machine.hpp"
#include "acsim/minihl.hpp"
#include "acsim/narration.hpp"
#include "acsim/translator.hpp"

namespace acsim {

inline constexpr std::uint64_t kDefaultRunSteps = 10000;
inline constexpr int kDefaultCheckEnvs = 20;
inline constexpr std::uint64_t kDefaultCheckSeed = 42;

class Session {
public:
    using Sink = std::function<void(const json&)>;

    explicit Session(std::string id, std::string locale = "en") : id_(std::move(id)), locale_(std::move(locale)) {}

    ~Session() { stop_autorun(); }

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    const std::string& id() const { return id_; }

    /// Applies one command and returns the events it produced. The same
    /// events go to every subscriber, in order.
    std::vector<json> handle(const json& command) {
        std::vector<json> events;
        {
            std::lock_guard lock(mutex_);
            out_ = &events;
            dispatch(command);
            out_ = nullptr;
        }
        wake_.notify_all();
        return events;
    }

    std::vector<json> handle_text(std::string_view text) {
        json cmd;
        try {
            cmd = json::parse(text);
        } catch (const json::exception& e) {
            std::lock_guard lock(mutex_);
            std::vector<json> events;
            out_ = &events;
            error("parse_error", std::string("malformed command: ") + e.what());
            out_ = nullptr;
            return events;
        }
        return handle(cmd);
    }

    /// Registers an event sink; returns a token for unsubscribe. Sinks run
    /// while the session lock is held and must not call back into it.
    int subscribe(Sink sink) {
        std::lock_guard lock(mutex_);
        const int token = next_token_++;
        sinks_[token] = std::move(sink);
        return token;
    }

    void unsubscribe(int token) {
        std::lock_guard lock(mutex_);
        sinks_.erase(token);
    }

    /// One autorun micro-step, as the pacing timer would do it. Returns the
    /// produced events (empty when paused).
    std::vector<json> tick() {
        std::vector<json> events;
        std::lock_guard lock(mutex_);
        if (pacing_ <= 0) return events;
        out_ = &events;
        do_micro_step(true);
        out_ = nullptr;
        return events;
    }

    MachineState state() const {
        std::lock_guard lock(mutex_);
        return state_;
    }

    double pacing() const {
        std::lock_guard lock(mutex_);
        return pacing_;
    }

    std::string locale() const {
        std::lock_guard lock(mutex_);
        return locale_;
    }

    void stop_autorun() {
        {
            std::lock_guard lock(mutex_);
            stopping_ = true;
            pacing_ = 0;
        }
        wake_.notify_all();
        if (worker_.joinable()) worker_.join();
    }

private:
    void dispatch(const json& cmd) {
        if (!cmd.is_object() || !cmd.contains("cmd") || !cmd["cmd"].is_string()) {
            error("parse_error", "command must be an object with a string field 'cmd'");
            return;
        }
        const std::string name = cmd["cmd"].get<std::string>();
        try {
            if (name == "load_source")
                load_source(cmd.at("text").get<std::string>(), std::nullopt);
            else if (name == "load_minihl")
                load_minihl(cmd.at("text").get<std::string>());
            else if (name == "reset")
                reset();
            else if (name == "micro_step")
                do_micro_step(false);
            else if (name == "step_instruction")
                do_step_instruction();
            else if (name == "run")
                do_run(cmd.contains("max_steps") ? cmd["max_steps"].get<std::uint64_t>() : kDefaultRunSteps);
            else if (name == "set_pacing")
                set_pacing(cmd.at("steps_per_second").get<double>());
            else if (name == "pause")
                set_pacing(0);
            else if (name == "poke_ram")
                do_poke(PokeTarget::ram(ram_address(cmd.at("addr"))), cmd.at("value").get<int>());
            else if (name == "poke_reg")
                do_poke(PokeTarget::reg(cmd.at("name").get<std::string>()), cmd.at("value").get<int>());
            else if (name == "poke_flag")
                do_poke(PokeTarget::flag(cmd.at("name").get<std::string>()), cmd.at("value").get<int>());
            else if (name == "set_locale")
                set_locale(cmd.at("locale").get<std::string>());
            else if (name == "get_snapshot")
                snapshot();
            else if (name == "check_translation")
                check(cmd);
            else
                error("parse_error", "unknown command '" + name + "'");
        } catch (const json::exception& e) {
            error("parse_error", "bad arguments for '" + name + "': " + e.what());
        } catch (const MachineError& e) {
            error(machine_error_kind(e.kind()), e.what());
        }
    }

    static std::string machine_error_kind(MachineError::Kind k) {
        switch (k) {
            case MachineError::Kind::NotRunnable: return "not_runnable";
            case MachineError::Kind::OutOfRange: return "out_of_range";
            case MachineError::Kind::UnknownTarget: return "unknown_target";
        }
        return "machine";
    }

    const Program* program_ptr() const { return program_ ? &*program_ : nullptr; }

    int ram_address(const json& addr) const {
        if (!addr.is_string()) return addr.get<int>();
        const auto name = addr.get<std::string>();
        if (auto a = resolve_ram(name, program_ptr())) return *a;
        throw MachineError(MachineError::Kind::UnknownTarget, "unknown RAM cell '" + name + "'");
    }

    void emit(json event) {
        event["seq"] = ++seq_;
        for (const auto& [token, sink] : sinks_) {
            (void)token;
            sink(event);
        }
        if (out_) out_->push_back(std::move(event));
    }

    void error(const std::string& kind, const std::string& message, json extra = json::object()) {
        json e{{"type", "error"}, {"kind", kind}, {"message", message}};
        for (auto& [k, v] : extra.items()) e[k] = v;
        emit(std::move(e));
    }

    void snapshot() {
        json s = snapshot_json(state_);
        s["type"] = "state_snapshot";
        s["pacing"] = pacing_;
        s["locale"] = locale_;
        emit(std::move(s));
    }

    void record(const TraceRecord& rec) {
        json t = to_json(rec);
        t["type"] = "trace";
        emit(std::move(t));
        emit({{"type", "narration"},
              {"step", rec.step},
              {"key", rec.narration.key},
              {"locale", locale_},
              {"text", Narrator::builtin().narrate(rec.narration, locale_)}});
    }

    void after_state_change() {
        if (state_.halted) {
            pacing_ = 0;
            emit({{"type", "halted"}, {"digest", state_digest(state_)}, {"records", state_.records}});
        } else if (state_.fault) {
            pacing_ = 0;
            emit({{"type", "fault"},
                  {"kind", std::string(fault_name(state_.fault->kind))},
                  {"detail", state_.fault->detail},
                  {"digest", state_digest(state_)}});
        }
    }

    void load_source(const std::string& text, std::optional<std::string> minihl) {
        Program prog;
        try {
            prog = assemble(SourceUnit::from_text(text, "session"));
        } catch (const AssembleError& e) {
            json diags = json::array();
            for (const auto& d : e.diagnostics())
                diags.push_back({{"kind", std::string(diagnostic_kind_name(d.kind))}, {"line", d.line}, {"message", d.message}});
            error("assemble", e.what(), {{"diagnostics", diags}});
            return;
        }
        pacing_ = 0;
        program_ = std::move(prog);
        state_ = load(*program_);
        json a = program_to_json(*program_);
        a.erase("format");
        a["type"] = "assembled";
        a["source"] = text;
        if (minihl) a["minihl"] = *minihl;
        emit(std::move(a));
        snapshot();
    }

    void load_minihl(const std::string& text) {
        minihl::Ast ast;
        try {
            ast = minihl::parse(text);
        } catch (const minihl::ParseError& e) {
            error("minihl_parse", e.what(), {{"line", e.line()}, {"column", e.column()}});
            return;
        }
        load_source(translate(ast).text(), text);
    }

    void reset() {
        pacing_ = 0;
        state_ = program_ ? load(*program_) : MachineState{};
        snapshot();
    }

    void do_micro_step(bool from_autorun) {
        if (!state_.runnable()) {
            if (from_autorun) {
                pacing_ = 0;
                return;
            }
            throw MachineError(MachineError::Kind::NotRunnable, "machine is not runnable; reset first");
        }
        auto [next, rec] = micro_step(std::move(state_));
        state_ = std::move(next);
        record(rec);
        after_state_change();
    }

    void do_step_instruction() {
        if (!state_.runnable()) throw MachineError(MachineError::Kind::NotRunnable, "machine is not runnable; reset first");
        auto [next, recs] = step_instruction(std::move(state_));
        state_ = std::move(next);
        for (const auto& r : recs) record(r);
        after_state_change();
    }

    void do_run(std::uint64_t max_steps) {
        if (max_steps < 1) {
            error("out_of_range", "max_steps must be at least 1");
            return;
        }
        if (!state_.runnable()) throw MachineError(MachineError::Kind::NotRunnable, "machine is not runnable; reset first");
        for (std::uint64_t i = 0; i < max_steps && state_.runnable(); ++i) {
            auto [next, rec] = micro_step(std::move(state_));
            state_ = std::move(next);
            record(rec);
        }
        after_state_change();
        snapshot();
    }

    void do_poke(const PokeTarget& target, int value) {
        auto [next, rec] = poke(std::move(state_), target, value);
        state_ = std::move(next);
        record(rec);
    }

    void set_pacing(double steps_per_second) {
        if (steps_per_second < 0) {
            error("out_of_range", "steps_per_second must not be negative");
            return;
        }
        pacing_ = steps_per_second;
        if (pacing_ > 0 && !worker_.joinable()) worker_ = std::thread([this] { autorun_loop(); });
        snapshot();
    }

    void set_locale(const std::string& locale) {
        if (locale.empty()) {
            error("out_of_range", "locale must not be empty");
            return;
        }
        locale_ = locale;
        snapshot();
    }

    void check(const json& cmd) {
        minihl::Ast ast;
        try {
            ast = minihl::parse(cmd.at("minihl").get<std::string>());
        } catch (const minihl::ParseError& e) {
            error("minihl_parse", e.what(), {{"line", e.line()}, {"column", e.column()}});
            return;
        }
        std::vector<minihl::Env> envs;
        try {
            if (cmd.contains("envs")) {
                for (const auto& e : cmd["envs"]) envs.push_back(env_from_json(e));
            } else {
                envs = sample_envs(ast, cmd.value("count", kDefaultCheckEnvs), cmd.value("seed", kDefaultCheckSeed));
            }
            json v = to_json(check_translation(ast, SourceUnit::from_text(cmd.at("asm").get<std::string>(), "candidate"), envs));
            emit(std::move(v));
        } catch (const CheckError& e) {
            error(e.kind() == CheckError::Kind::AssembleFailed ? "assemble" : "missing_cell", e.what());
        } catch (const std::invalid_argument& e) {
            error("out_of_range", e.what());
        } catch (const std::out_of_range& e) {
            error("out_of_range", e.what());
        }
    }

    void autorun_loop() {
        std::unique_lock lock(mutex_);
        while (!stopping_) {
            if (pacing_ <= 0) {
                wake_.wait(lock, [this] { return stopping_ || pacing_ > 0; });
                continue;
            }
            const auto period = std::chrono::duration<double>(1.0 / pacing_);
            const double seen = pacing_;
            const bool changed = wake_.wait_for(lock, period, [this, seen] { return stopping_ || pacing_ != seen; });
            if (changed || pacing_ <= 0) continue;
            do_micro_step(true);
        }
    }

    std::string id_;
    mutable std::mutex mutex_;
    std::condition_variable wake_;
    std::thread worker_;
    bool stopping_ = false;

    MachineState state_{};
    std::optional<Program> program_;
    std::string locale_;
    double pacing_ = 0;
    std::uint64_t seq_ = 0;
    std::vector<json>* out_ = nullptr;
    std::map<int, Sink> sinks_;
    int next_token_ = 0;
};

/// Owns the live sessions. Thread-safe.
class SessionManager {
public:
    std::shared_ptr<Session> create(const std::string& locale = "en") {
        std::lock_guard lock(mutex_);
        std::string id;
        do {
            id = make_id();
        } while (sessions_.count(id));
        auto s = std::make_shared<Session>(id, locale);
        sessions_[id] = s;
        return s;
    }

    std::shared_ptr<Session> find(const std::string& id) const {
        std::lock_guard lock(mutex_);
        auto it = sessions_.find(id);
        return it == sessions_.end() ? nullptr : it->second;
    }

    bool remove(const std::string& id) {
        std::shared_ptr<Session> s;
        {
            std::lock_guard lock(mutex_);
            auto it = sessions_.find(id);
            if (it == sessions_.end()) return false;
            s = std::move(it->second);
            sessions_.erase(it);
        }
        s->stop_autorun();
        return true;
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return sessions_.size();
    }

private:
    std::string make_id() {
        static constexpr char kHex[] = "0123456789abcdef";
        std::string id;
        for (int i = 0; i < 16; ++i) id += kHex[rng_() % 16];
        return id;
    }

    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mt19937_64 rng_{std::random_device{}()};
};

}  // namespace acsim
