#include "fairdiv/service/http.hpp"

#include <httplib.h>

namespace fairdiv::service {

namespace {

void send(httplib::Response& res, const Reply& reply) {
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
}

std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
    try {
        return json::parse(req.body);
    } catch (const json::exception& e) {
        send(res, error_reply(400, "BadInput", std::string("body is not JSON: ") + e.what()));
        return std::nullopt;
    }
}

}  // namespace

HttpServer::HttpServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
    auto& s = *server_;
    s.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
        if (auto body = parse_body(req, res)) send(res, service_.create(*body));
    });
    s.Get(R"(/sessions/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, service_.get(req.matches[1]));
    });
    s.Get(R"(/sessions/([0-9a-f]+)/queries)", [this](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_param("agent")) return send(res, error_reply(400, "BadInput", "agent parameter required"));
        send(res, service_.queries(req.matches[1], req.get_param_value("agent")));
    });
    s.Post(R"(/sessions/([0-9a-f]+)/answers)", [this](const httplib::Request& req, httplib::Response& res) {
        if (auto body = parse_body(req, res)) send(res, service_.answer(req.matches[1], *body));
    });
    s.Get(R"(/sessions/([0-9a-f]+)/result)", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, service_.result(req.matches[1]));
    });
    s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) res.set_content(json{{"error", "NotFound"}, {"message", "no such route"}}.dump(), "application/json");
    });
    s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        send(res, error_reply(500, "Internal", what));
    });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return server_->bind_to_any_port(host);
    return server_->bind_to_port(host, port) ? port : -1;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() { server_->stop(); }

}  // namespace fairdiv::service
