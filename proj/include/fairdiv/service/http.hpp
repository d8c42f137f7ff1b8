#pragma once

#include "fairdiv/service/service.hpp"

#include <memory>

namespace httplib {
class Server;
}

namespace fairdiv::service {

/// The JSON API over HTTP. Routes:
///   POST /sessions, GET /sessions/{id}, GET /sessions/{id}/queries?agent=A,
///   POST /sessions/{id}/answers, GET /sessions/{id}/result
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();

    /// Binds host:port (port 0 picks a free one) and returns the bound port, or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    void listen();
    void stop();

private:
    Service& service_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace fairdiv::service
