#include <gtest/gtest.h>

#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <condition_variable>
#include <fstream>
#include <sstream>

#include "acsim/exercises.hpp"
#include "acsim/http_service.hpp"
#include "acsim/session.hpp"
#include "cli_app.hpp"

using namespace acsim;

namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

std::string sample(const std::string& name) {
    std::ifstream in(std::string(ACSIM_SAMPLES_DIR) + "/" + name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<json> of_type(const std::vector<json>& events, const std::string& type) {
    std::vector<json> out;
    for (const auto& e : events)
        if (e["type"] == type) out.push_back(e);
    return out;
}

json cmd(const std::string& name, json extra = json::object()) {
    extra["cmd"] = name;
    return extra;
}

// Collects subscriber events and lets a test wait for one of a given type.
struct Collector {
    std::mutex m;
    std::condition_variable cv;
    std::vector<json> events;

    Session::Sink sink() {
        return [this](const json& e) {
            {
                std::lock_guard lock(m);
                events.push_back(e);
            }
            cv.notify_all();
        };
    }

    bool wait_for(const std::string& type, std::chrono::milliseconds timeout = std::chrono::seconds(10)) {
        std::unique_lock lock(m);
        return cv.wait_for(lock, timeout, [&] {
            for (const auto& e : events)
                if (e["type"] == type) return true;
            return false;
        });
    }

    std::size_t count(const std::string& type) {
        std::lock_guard lock(m);
        return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [&](const json& e) { return e["type"] == type; }));
    }
};

struct HttpReply {
    unsigned status = 0;
    json body;
};

HttpReply request(unsigned short port, http::verb verb, const std::string& target, const std::string& body = "") {
    net::io_context ioc;
    beast::tcp_stream stream(ioc);
    stream.connect(tcp::endpoint(net::ip::make_address("127.0.0.1"), port));
    http::request<http::string_body> req{verb, target, 11};
    req.set(http::field::host, "127.0.0.1");
    req.set(http::field::content_type, "application/json");
    req.body() = body;
    req.prepare_payload();
    http::write(stream, req);
    beast::flat_buffer buf;
    http::response<http::string_body> res;
    http::read(stream, buf, res);
    beast::error_code ec;
    stream.socket().shutdown(tcp::socket::shutdown_both, ec);
    HttpReply out;
    out.status = res.result_int();
    if (!res.body().empty()) out.body = json::parse(res.body());
    return out;
}

}  // namespace

TEST(Session, LoadEmitsAssembledAndSnapshot) {
    Session s("t");
    const auto ev = s.handle(cmd("load_source", {{"text", sample("add_immediate.s")}}));
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_EQ(ev[0]["type"], "assembled");
    EXPECT_FALSE(ev[0].contains("format"));
    EXPECT_EQ(ev[0]["source"], sample("add_immediate.s"));
    EXPECT_EQ(ev[1]["type"], "state_snapshot");
    EXPECT_EQ(ev[1]["pc"], 0);
    EXPECT_EQ(ev[1]["phase"], "Fetch1");
    EXPECT_LT(ev[0]["seq"].get<int>(), ev[1]["seq"].get<int>());
}

TEST(Session, MicroStepsThroughAddImmediate) {
    Session s("t");
    s.handle(cmd("load_source", {{"text", sample("add_immediate.s")}}));
    for (int i = 0; i < 6; ++i) s.handle(cmd("micro_step"));
    std::vector<json> ev;
    for (int i = 0; i < 6; ++i) {
        auto e = s.handle(cmd("micro_step"));
        ev.insert(ev.end(), e.begin(), e.end());
    }
    const auto traces = of_type(ev, "trace");
    ASSERT_EQ(traces.size(), 6u);
    const char* phases[] = {"Fetch1", "Fetch2", "Fetch3", "Fetch4", "Decode", "Execute1"};
    for (int i = 0; i < 6; ++i) EXPECT_EQ(traces[i]["phase"], phases[i]);
    EXPECT_EQ(traces[5]["bus"].size(), 0u);
    EXPECT_EQ(of_type(ev, "narration").size(), 6u);
    EXPECT_EQ(s.state().acc.value(), 20);
    EXPECT_EQ(s.state().records, 12u);
}

TEST(Session, MatchesEngine) {
    Session s("t");
    s.handle(cmd("load_source", {{"text", std::string(bank_source::kCountOdd)}}));
    s.handle(cmd("poke_ram", {{"addr", "N"}, {"value", 5}}));
    const Program p = assemble(bank_source::kCountOdd);
    MachineState m = poke(load(p), resolve_target("[N]", &p), 5).first;
    for (int i = 0; i < 200; ++i) {
        const auto ev = s.handle(cmd("micro_step"));
        auto [next, rec] = micro_step(m);
        m = next;
        EXPECT_EQ(of_type(ev, "trace").at(0), [&] {
            json t = to_json(rec);
            t["type"] = "trace";
            t["seq"] = of_type(ev, "trace").at(0)["seq"];
            return t;
        }());
        ASSERT_EQ(s.state(), m);
    }
}

TEST(Session, GoldenScenarioMatchesCli) {
    Session s("t");
    s.handle(cmd("load_source", {{"text", sample("if_else.s")}}));
    s.handle(cmd("poke_ram", {{"addr", "SUM"}, {"value", 2}}));
    const auto ev = s.handle(cmd("run"));
    const auto halted = of_type(ev, "halted");
    ASSERT_EQ(halted.size(), 1u);
    const auto snap = of_type(ev, "state_snapshot").back();
    const Program p = assemble(sample("if_else.s"));
    EXPECT_EQ(snap["ram"][p.symbols.find("SUM")->addr.value()], 3);

    std::ostringstream out, err;
    ASSERT_EQ(cli::run({"run", std::string(ACSIM_SAMPLES_DIR) + "/if_else.s", "--poke", "SUM=2", "--dump", "SUM", "--digest"}, out, err), 0)
        << err.str();
    EXPECT_EQ(out.str(), "SUM=3\ndigest=" + halted[0]["digest"].get<std::string>() + "\n");
}

TEST(Session, Errors) {
    Session s("t");
    auto kind = [&](const json& c) {
        const auto ev = s.handle(c);
        EXPECT_EQ(ev.size(), 1u);
        return ev.at(0)["type"] == "error" ? ev[0]["kind"].get<std::string>() : std::string("none");
    };
    EXPECT_EQ(s.handle_text("{nope").at(0)["kind"], "parse_error");
    EXPECT_EQ(kind(json::array()), "parse_error");
    EXPECT_EQ(kind(cmd("frobnicate")), "parse_error");
    EXPECT_EQ(kind(cmd("poke_ram", {{"addr", 3}})), "parse_error");
    const auto bad = s.handle(cmd("load_source", {{"text", "STO #1\nJMP NOWHERE"}}));
    ASSERT_EQ(bad.size(), 1u);
    EXPECT_EQ(bad[0]["kind"], "assemble");
    EXPECT_EQ(bad[0]["diagnostics"].size(), 2u);
    EXPECT_EQ(kind(cmd("load_minihl", {{"text", "VAR A = 0\nB = 1"}})), "minihl_parse");

    s.handle(cmd("load_source", {{"text", "HLT"}}));
    EXPECT_EQ(kind(cmd("poke_reg", {{"name", "SP"}, {"value", 0}})), "unknown_target");
    EXPECT_EQ(kind(cmd("poke_ram", {{"addr", 300}, {"value", 0}})), "out_of_range");
    EXPECT_EQ(kind(cmd("poke_flag", {{"name", "Z"}, {"value", 3}})), "out_of_range");
    EXPECT_EQ(kind(cmd("set_pacing", {{"steps_per_second", -1}})), "out_of_range");
    EXPECT_EQ(kind(cmd("run", {{"max_steps", 0}})), "out_of_range");
    s.handle(cmd("run"));
    EXPECT_EQ(kind(cmd("micro_step")), "not_runnable");
    EXPECT_EQ(kind(cmd("poke_reg", {{"name", "ACC"}, {"value", 1}})), "not_runnable");
    EXPECT_EQ(s.handle(cmd("reset")).at(0)["halted"], false);
}

TEST(Session, FaultEvent) {
    Session s("t");
    s.handle(cmd("load_source", {{"text", "LOD #1\nDIV #0\nHLT"}}));
    const auto ev = s.handle(cmd("run"));
    const auto f = of_type(ev, "fault");
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0]["kind"], "DivideByZero");
}

TEST(Session, LocaleSwitch) {
    Session s("t", "it");
    s.handle(cmd("load_source", {{"text", "HLT"}}));
    auto ev = s.handle(cmd("micro_step"));
    const auto it = of_type(ev, "narration").at(0);
    EXPECT_EQ(it["locale"], "it");
    EXPECT_EQ(it["text"], narrate("fetch.addr", {{"pc", 0}, {"value", 15}}, "it"));
    EXPECT_EQ(s.handle(cmd("set_locale", {{"locale", "es-AR"}})).at(0)["locale"], "es-AR");
    ev = s.handle(cmd("micro_step"));
    EXPECT_EQ(of_type(ev, "narration").at(0)["text"], narrate("fetch.opcode", {{"value", 15}, {"hex", "0Fh"}, {"pc", 1}}, "es"));
}

TEST(Session, LoadMinihlAndCheck) {
    Session s("t");
    const auto ev = s.handle(cmd("load_minihl", {{"text", sample("if_else.mhl")}}));
    ASSERT_EQ(ev.at(0)["type"], "assembled");
    EXPECT_EQ(ev[0]["minihl"], sample("if_else.mhl"));

    const auto v = s.handle(cmd("check_translation", {{"minihl", sample("if_else.mhl")}, {"asm", sample("if_else_missing_jump.s")}}));
    ASSERT_EQ(v.at(0)["type"], "verdict");
    EXPECT_EQ(v[0]["correct"], false);
    EXPECT_EQ(v[0]["counterexample"]["input"]["SUM"], 2);
    const auto ok = s.handle(cmd("check_translation", {{"minihl", sample("if_else.mhl")}, {"asm", sample("if_else.s")}, {"envs", json::array({{{"SUM", 2}}, {{"SUM", 7}}})}}));
    EXPECT_EQ(ok.at(0)["correct"], true);
    EXPECT_EQ(ok[0]["casesRun"], 2);
}

TEST(Session, SubscribersSeeEveryEventInOrder) {
    Session s("t");
    Collector c;
    const int token = s.subscribe(c.sink());
    std::vector<json> returned;
    for (const json& command : {cmd("load_source", {{"text", "LOD #1\nHLT"}}), cmd("step_instruction"), cmd("get_snapshot")}) {
        auto ev = s.handle(command);
        returned.insert(returned.end(), ev.begin(), ev.end());
    }
    EXPECT_EQ(c.events, returned);
    for (std::size_t i = 1; i < returned.size(); ++i) EXPECT_EQ(returned[i]["seq"].get<int>(), returned[i - 1]["seq"].get<int>() + 1);
    s.unsubscribe(token);
    s.handle(cmd("get_snapshot"));
    EXPECT_EQ(c.events.size(), returned.size());
}

TEST(Session, PacedAutorunAndPause) {
    Session s("t");
    Collector c;
    s.subscribe(c.sink());
    s.handle(cmd("load_source", {{"text", std::string(bank_source::kCountOdd)}}));
    s.handle(cmd("poke_ram", {{"addr", "N"}, {"value", 3}}));
    EXPECT_TRUE(s.tick().empty());
    s.handle(cmd("set_pacing", {{"steps_per_second", 2000}}));
    EXPECT_EQ(s.pacing(), 2000);
    ASSERT_TRUE(c.wait_for("halted"));
    EXPECT_EQ(s.pacing(), 0);

    const Program p = assemble(bank_source::kCountOdd);
    const RunOutcome r = run(poke(load(p), resolve_target("[N]", &p), 3).first, {});
    EXPECT_EQ(s.state(), [&] {
        MachineState m = r.final_state;
        m.records = r.steps + 1;
        return m;
    }());

    s.handle(cmd("reset"));
    s.handle(cmd("set_pacing", {{"steps_per_second", 50}}));
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
    const auto paused = s.handle(cmd("pause"));
    EXPECT_EQ(paused.at(0)["pacing"], 0);
    const auto before = s.state();
    EXPECT_GT(before.records, 0u);
    std::this_thread::sleep_for(std::chrono::milliseconds(150));
    EXPECT_EQ(s.state(), before);
    const auto snap = s.handle(cmd("get_snapshot")).at(0);
    EXPECT_EQ(snap["digest"], state_digest(before));
    EXPECT_TRUE(s.tick().empty());
    EXPECT_EQ(s.state().records, before.records);
}

TEST(SessionManager, CreateFindRemove) {
    SessionManager m;
    auto a = m.create();
    auto b = m.create("es");
    EXPECT_NE(a->id(), b->id());
    EXPECT_EQ(a->id().size(), 16u);
    EXPECT_EQ(b->locale(), "es");
    EXPECT_EQ(m.find(a->id()), a);
    EXPECT_EQ(m.size(), 2u);
    EXPECT_TRUE(m.remove(a->id()));
    EXPECT_FALSE(m.remove(a->id()));
    EXPECT_EQ(m.find(a->id()), nullptr);
}

class Service : public ::testing::Test {
protected:
    void SetUp() override { service.start(); }
    void TearDown() override { service.stop(); }

    SessionManager sessions;
    HttpService service{sessions, "127.0.0.1", 0};
};

TEST_F(Service, HttpRoutes) {
    const unsigned short port = service.port();
    EXPECT_EQ(request(port, http::verb::get, "/health").status, 200u);
    EXPECT_EQ(request(port, http::verb::get, "/session").status, 405u);
    EXPECT_EQ(request(port, http::verb::get, "/nowhere").status, 404u);
    EXPECT_EQ(request(port, http::verb::post, "/session", "[1]").status, 400u);

    const HttpReply created = request(port, http::verb::post, "/session", R"({"locale":"es"})");
    ASSERT_EQ(created.status, 201u);
    const std::string id = created.body["id"];
    EXPECT_EQ(created.body["events"], "/session/" + id + "/events");
    EXPECT_EQ(sessions.find(id)->locale(), "es");

    const std::string base = "/session/" + id;
    HttpReply r = request(port, http::verb::post, base + "/cmd", json{{"cmd", "load_source"}, {"text", sample("if_else.s")}}.dump());
    EXPECT_EQ(r.status, 200u);
    EXPECT_EQ(r.body["events"][0]["type"], "assembled");
    request(port, http::verb::post, base + "/cmd", R"({"cmd":"poke_ram","addr":"SUM","value":2})");
    r = request(port, http::verb::post, base + "/cmd", R"({"cmd":"run"})");
    ASSERT_EQ(r.status, 200u);
    bool halted = false;
    for (const auto& e : r.body["events"]) halted |= e["type"] == "halted";
    EXPECT_TRUE(halted);

    EXPECT_EQ(request(port, http::verb::post, base + "/cmd", "{bad").status, 400u);
    EXPECT_EQ(request(port, http::verb::get, base + "/cmd").status, 405u);
    EXPECT_EQ(request(port, http::verb::post, "/session/ffff/cmd", R"({"cmd":"reset"})").status, 404u);
    EXPECT_EQ(request(port, http::verb::delete_, base).status, 204u);
    EXPECT_EQ(request(port, http::verb::delete_, base).status, 404u);
    EXPECT_EQ(sessions.size(), 0u);
}

TEST_F(Service, WebSocketStreamsEventsAndAcceptsCommands) {
    const unsigned short port = service.port();
    const std::string id = request(port, http::verb::post, "/session").body["id"];

    net::io_context ioc;
    websocket::stream<tcp::socket> ws(ioc);
    ws.next_layer().connect(tcp::endpoint(net::ip::make_address("127.0.0.1"), port));
    ws.handshake("127.0.0.1", "/session/" + id + "/events");

    // A command over HTTP shows up on the socket.
    request(port, http::verb::post, "/session/" + id + "/cmd", json{{"cmd", "load_source"}, {"text", "LOD #7\nHLT"}}.dump());
    auto next_event = [&] {
        beast::flat_buffer buf;
        ws.read(buf);
        return json::parse(beast::buffers_to_string(buf.data()));
    };
    EXPECT_EQ(next_event()["type"], "assembled");
    EXPECT_EQ(next_event()["type"], "state_snapshot");

    // Commands over the socket are applied too.
    ws.text(true);
    ws.write(net::buffer(std::string(R"({"cmd":"run"})")));
    std::vector<json> events;
    for (;;) {
        events.push_back(next_event());
        if (events.back()["type"] == "state_snapshot") break;
    }
    EXPECT_EQ(of_type(events, "trace").size(), 12u);
    EXPECT_EQ(of_type(events, "halted").size(), 1u);
    EXPECT_EQ(events.back()["acc"], 7);
    ws.close(websocket::close_code::normal);

    // Unknown sessions cannot upgrade.
    websocket::stream<tcp::socket> bad(ioc);
    bad.next_layer().connect(tcp::endpoint(net::ip::make_address("127.0.0.1"), port));
    EXPECT_THROW(bad.handshake("127.0.0.1", "/session/nope/events"), boost::system::system_error);
}
