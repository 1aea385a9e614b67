#pragma once

// JSON shapes shared by the CLI, the session protocol and tests.
//
// Trace records are exported one object per line:
//   {"step", "phase", "transfers": [{"src","dst","value"}],
//    "bus": [{"bus","payload"}], "narrationKey", "params", "digest"}
// All numbers are decimal; words are signed (-128..127).

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>

#include "acsim/assembler.hpp"
#include "acsim/machine.hpp"

namespace acsim {

using json = nlohmann::json;

inline json params_to_json(const Params& params) {
    json out = json::object();
    for (const auto& [k, v] : params) {
        if (std::holds_alternative<int>(v))
            out[k] = std::get<int>(v);
        else
            out[k] = std::get<std::string>(v);
    }
    return out;
}

inline Params params_from_json(const json& j) {
    Params out;
    for (const auto& [k, v] : j.items()) {
        if (v.is_number_integer())
            out[k] = v.get<int>();
        else if (v.is_string())
            out[k] = v.get<std::string>();
        else
            out[k] = v.dump();
    }
    return out;
}

inline json to_json(const BusEvent& e) {
    json j{{"bus", std::string(bus_name(e.bus))}};
    if (e.bus == Bus::Control)
        j["payload"] = std::string(signal_name(e.signal));
    else
        j["payload"] = e.value;
    return j;
}

inline json to_json(const TraceRecord& r) {
    json transfers = json::array();
    for (const auto& t : r.transfers) transfers.push_back({{"src", t.source}, {"dst", t.destination}, {"value", t.value}});
    json bus = json::array();
    for (const auto& e : r.bus) bus.push_back(to_json(e));
    return json{{"step", r.step},
                {"phase", r.phase},
                {"transfers", transfers},
                {"bus", bus},
                {"narrationKey", r.narration.key},
                {"params", params_to_json(r.narration.params)},
                {"digest", r.digest}};
}

inline TraceRecord trace_record_from_json(const json& j) {
    TraceRecord r;
    r.step = j.at("step").get<std::uint64_t>();
    r.phase = j.at("phase").get<std::string>();
    for (const auto& t : j.at("transfers"))
        r.transfers.push_back({t.at("src").get<std::string>(), t.at("dst").get<std::string>(), t.at("value").get<int>()});
    for (const auto& e : j.at("bus")) {
        const auto bus = e.at("bus").get<std::string>();
        if (bus == "Control") {
            const auto sig = e.at("payload").get<std::string>();
            r.bus.push_back(BusEvent::control(sig == "READ" ? Signal::Read : sig == "WRITE" ? Signal::Write : Signal::Halt));
        } else {
            r.bus.push_back({bus == "Address" ? Bus::Address : Bus::Data, e.at("payload").get<int>(), Signal::Read});
        }
    }
    r.narration.key = j.at("narrationKey").get<std::string>();
    r.narration.params = params_from_json(j.at("params"));
    r.digest = j.at("digest").get<std::string>();
    return r;
}

inline json snapshot_json(const MachineState& s) {
    json ram = json::array();
    for (const auto& w : s.ram) ram.push_back(w.value());
    json fault = nullptr;
    if (s.fault) fault = {{"kind", std::string(fault_name(s.fault->kind))}, {"detail", s.fault->detail}};
    return json{{"pc", s.pc.value()},
                {"ir", {s.ir_op.value(), s.ir_arg.value()}},
                {"acc", s.acc.value()},
                {"mar", s.mar.value()},
                {"mdr", s.mdr.value()},
                {"z", s.flags.z},
                {"n", s.flags.n},
                {"phase", std::string(phase_name(s.phase))},
                {"halted", s.halted},
                {"fault", fault},
                {"ram", ram},
                {"records", s.records},
                {"digest", state_digest(s)}};
}

inline json symbols_json(const SymbolTable& table) {
    json out = json::array();
    for (const auto& s : table.entries())
        out.push_back({{"name", s.name},
                       {"addr", s.addr.value()},
                       {"kind", s.kind == SymbolKind::DataCell ? "data" : "code"}});
    return out;
}

/// Image file: {"format": "acsim-image", "image": [[addr, word]...],
/// "symbols": [...], "listing": [[addr, line]...]}.
inline json program_to_json(const Program& p) {
    json image = json::array();
    for (const auto& c : p.image) image.push_back({c.addr.value(), c.value.value()});
    json listing = json::array();
    for (const auto& l : p.listing) listing.push_back({l.addr.value(), l.line});
    return json{{"format", "acsim-image"}, {"image", image}, {"symbols", symbols_json(p.symbols)}, {"listing", listing}};
}

inline Program program_from_json(const json& j) {
    if (j.value("format", "") != "acsim-image") throw std::runtime_error("not an acsim image file");
    Program p;
    for (const auto& c : j.at("image")) {
        const int a = c.at(0).get<int>();
        const int v = c.at(1).get<int>();
        if (!Addr::valid(a) || v < -128 || v > 127) throw std::runtime_error("image cell out of range");
        p.image.push_back({Addr::of(a), Word::of(v)});
    }
    std::sort(p.image.begin(), p.image.end(), [](const Cell& a, const Cell& b) { return a.addr < b.addr; });
    for (const auto& s : j.value("symbols", json::array())) {
        const int a = s.at("addr").get<int>();
        if (!Addr::valid(a)) throw std::runtime_error("symbol address out of range");
        const auto kind = s.at("kind").get<std::string>() == "data" ? SymbolKind::DataCell : SymbolKind::CodeLabel;
        if (!p.symbols.add({s.at("name").get<std::string>(), Addr::of(a), kind}))
            throw std::runtime_error("duplicate symbol in image file");
    }
    for (const auto& l : j.value("listing", json::array()))
        p.listing.push_back({Addr::of(l.at(0).get<int>()), l.at(1).get<int>()});
    return p;
}

}  // namespace acsim
