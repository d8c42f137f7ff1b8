#pragma once

#include "fairdiv/service/session.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace fairdiv::service {

/// Flags win over the environment (ADDR, DATA_DIR, MAX_PIECES), which wins over defaults.
struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path data_dir = "data";
    int max_pieces = 8;

    static ServiceConfig from_env();
    /// "host:port" or ":port".
    void set_addr(const std::string& addr);
};

/// Append-only newline-delimited JSON log per session: <dir>/<id>.ndjson.
class EventStore {
public:
    explicit EventStore(std::filesystem::path dir);
    void append(const std::string& id, const std::vector<json>& events) const;
    std::vector<json> read(const std::string& id) const;
    std::vector<std::string> ids() const;

private:
    std::filesystem::path dir_;
};

/// Plain response: HTTP status and JSON body.
struct Reply {
    int status = 200;
    json body;
};

/**
 * Registry of sessions. Requests may come from many threads; each session has
 * its own mutex, so its mutations and log appends happen in one order.
 * Construction replays every log found in the data directory.
 */
class Service {
public:
    explicit Service(ServiceConfig config);

    Reply create(const json& body);
    Reply get(const std::string& id);
    Reply queries(const std::string& id, const std::string& agent);
    Reply answer(const std::string& id, const json& body);
    Reply result(const std::string& id);

    const ServiceConfig& config() const { return config_; }
    size_t size() const;

private:
    struct Slot {
        std::mutex mutex;
        std::unique_ptr<Session> session;
    };
    std::shared_ptr<Slot> find(const std::string& id) const;
    static std::string new_id();
    void persist(const Session& session, size_t from) const;

    ServiceConfig config_;
    EventStore store_;
    mutable std::mutex registry_mutex_;
    std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

Reply error_reply(int status, const std::string& code, const std::string& message);

}  // namespace fairdiv::service
