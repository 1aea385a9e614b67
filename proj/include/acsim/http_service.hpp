#pragma once

// Local HTTP + WebSocket transport for sessions.
//
//   POST   /session              body {"locale"?}  -> 201 {"id", "events"}
//   POST   /session/{id}/cmd     body = command    -> 200 {"events": [...]}
//   GET    /session/{id}/events  WebSocket; every session event as one text
//                                frame; text frames sent by the client are
//                                handled as commands
//   DELETE /session/{id}                           -> 204
//   GET    /health                                 -> 200 {"ok": true}

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "acsim/session.hpp"

namespace acsim {

namespace http_detail {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

/// Splits "/session/{id}/{tail}" into id and tail.
inline std::optional<std::pair<std::string, std::string>> session_path(std::string_view target) {
    constexpr std::string_view prefix = "/session/";
    if (target.substr(0, prefix.size()) != prefix) return std::nullopt;
    std::string_view rest = target.substr(prefix.size());
    const auto slash = rest.find('/');
    std::string id(rest.substr(0, slash));
    std::string tail = slash == std::string_view::npos ? "" : std::string(rest.substr(slash + 1));
    if (id.empty()) return std::nullopt;
    return std::pair{std::move(id), std::move(tail)};
}

inline std::string_view target_of(const http::request<http::string_body>& req) {
    const auto t = req.target();
    return {t.data(), t.size()};
}

class WsConnection : public std::enable_shared_from_this<WsConnection> {
public:
    WsConnection(tcp::socket&& socket, std::shared_ptr<Session> session)
        : ws_(std::move(socket)), session_(std::move(session)) {}

    void start(http::request<http::string_body> req) {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(req, beast::bind_front_handler(&WsConnection::on_accept, shared_from_this()));
    }

private:
    void on_accept(beast::error_code ec) {
        if (ec) return;
        std::weak_ptr<WsConnection> weak = shared_from_this();
        token_ = session_->subscribe([weak](const json& event) {
            if (auto self = weak.lock()) {
                net::post(self->ws_.get_executor(), [self, text = event.dump()]() mutable { self->enqueue(std::move(text)); });
            }
        });
        read();
    }

    void read() { ws_.async_read(buffer_, beast::bind_front_handler(&WsConnection::on_read, shared_from_this())); }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec) {
            close();
            return;
        }
        const std::string text = beast::buffers_to_string(buffer_.data());
        buffer_.consume(buffer_.size());
        session_->handle_text(text);
        read();
    }

    void enqueue(std::string text) {
        if (closed_) return;
        queue_.push_back(std::move(text));
        if (queue_.size() == 1) write();
    }

    void write() {
        ws_.text(true);
        ws_.async_write(net::buffer(queue_.front()), beast::bind_front_handler(&WsConnection::on_write, shared_from_this()));
    }

    void on_write(beast::error_code ec, std::size_t) {
        if (ec) {
            close();
            return;
        }
        queue_.pop_front();
        if (!queue_.empty()) write();
    }

    void close() {
        if (closed_) return;
        closed_ = true;
        queue_.clear();
        if (token_) session_->unsubscribe(*token_);
        token_.reset();
    }

    websocket::stream<beast::tcp_stream> ws_;
    std::shared_ptr<Session> session_;
    beast::flat_buffer buffer_;
    std::deque<std::string> queue_;
    std::optional<int> token_;
    bool closed_ = false;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
public:
    HttpConnection(tcp::socket&& socket, SessionManager& sessions) : stream_(std::move(socket)), sessions_(sessions) {}

    void start() { read(); }

private:
    void read() {
        req_ = {};
        stream_.expires_after(std::chrono::seconds(60));
        http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpConnection::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec) {
            stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
            return;
        }
        if (websocket::is_upgrade(req_)) {
            const auto parts = session_path(target_of(req_));
            std::shared_ptr<Session> s;
            if (parts && parts->second == "events") s = sessions_.find(parts->first);
            if (s) {
                stream_.expires_never();
                std::make_shared<WsConnection>(stream_.release_socket(), std::move(s))->start(std::move(req_));
                return;
            }
            send(reply(http::status::not_found, {{"error", "no such session event stream"}}));
            return;
        }
        send(route());
    }

    http::response<http::string_body> reply(http::status status, const json& body) const {
        http::response<http::string_body> res{status, req_.version()};
        res.set(http::field::content_type, "application/json");
        res.keep_alive(req_.keep_alive());
        if (status != http::status::no_content) res.body() = body.dump();
        res.prepare_payload();
        return res;
    }

    http::response<http::string_body> route() {
        const std::string_view target = target_of(req_);
        const auto method = req_.method();
        if (target == "/health") return reply(http::status::ok, {{"ok", true}});
        if (target == "/session") {
            if (method != http::verb::post) return reply(http::status::method_not_allowed, {{"error", "use POST"}});
            std::string locale = "en";
            if (!req_.body().empty()) {
                const json body = json::parse(req_.body(), nullptr, false);
                if (body.is_discarded() || !body.is_object())
                    return reply(http::status::bad_request, {{"error", "body must be a JSON object"}});
                locale = body.value("locale", locale);
            }
            const auto s = sessions_.create(locale);
            return reply(http::status::created, {{"id", s->id()}, {"events", "/session/" + s->id() + "/events"}});
        }
        const auto parts = session_path(target);
        if (!parts) return reply(http::status::not_found, {{"error", "not found"}});
        if (parts->second.empty()) {
            if (method != http::verb::delete_) return reply(http::status::method_not_allowed, {{"error", "use DELETE"}});
            return sessions_.remove(parts->first) ? reply(http::status::no_content, nullptr)
                                                  : reply(http::status::not_found, {{"error", "no such session"}});
        }
        if (parts->second != "cmd") return reply(http::status::not_found, {{"error", "not found"}});
        if (method != http::verb::post) return reply(http::status::method_not_allowed, {{"error", "use POST"}});
        const auto s = sessions_.find(parts->first);
        if (!s) return reply(http::status::not_found, {{"error", "no such session"}});
        const auto events = s->handle_text(req_.body());
        const bool rejected = events.size() == 1 && events[0].value("kind", "") == "parse_error";
        return reply(rejected ? http::status::bad_request : http::status::ok, {{"events", events}});
    }

    void send(http::response<http::string_body> res) {
        auto sp = std::make_shared<http::response<http::string_body>>(std::move(res));
        http::async_write(stream_, *sp, [self = shared_from_this(), sp](beast::error_code ec, std::size_t) {
            if (ec) return;
            if (sp->need_eof()) {
                self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
                return;
            }
            self->read();
        });
    }

    beast::tcp_stream stream_;
    SessionManager& sessions_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> req_;
};

}  // namespace http_detail

class HttpService {
public:
    /// Binds immediately; port 0 picks an ephemeral port (see port()).
    HttpService(SessionManager& sessions, const std::string& address, unsigned short port)
        : sessions_(sessions), acceptor_(ioc_) {
        namespace net = http_detail::net;
        const http_detail::tcp::endpoint ep{net::ip::make_address(address), port};
        acceptor_.open(ep.protocol());
        acceptor_.set_option(net::socket_base::reuse_address(true));
        acceptor_.bind(ep);
        acceptor_.listen(net::socket_base::max_listen_connections);
    }

    ~HttpService() { stop(); }

    unsigned short port() const { return acceptor_.local_endpoint().port(); }

    /// Serves on a background thread.
    void start() {
        accept();
        thread_ = std::thread([this] { ioc_.run(); });
    }

    /// Serves on the calling thread until stop().
    void run() {
        accept();
        ioc_.run();
    }

    void stop() {
        ioc_.stop();
        if (thread_.joinable()) thread_.join();
    }

private:
    void accept() {
        acceptor_.async_accept(http_detail::net::make_strand(ioc_), [this](boost::beast::error_code ec, http_detail::tcp::socket socket) {
            if (!ec) std::make_shared<http_detail::HttpConnection>(std::move(socket), sessions_)->start();
            if (acceptor_.is_open()) accept();
        });
    }

    SessionManager& sessions_;
    http_detail::net::io_context ioc_;
    http_detail::tcp::acceptor acceptor_;
    std::thread thread_;
};

}  // namespace acsim
