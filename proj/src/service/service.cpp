#include "fairdiv/service/service.hpp"

#include "fairdiv/error.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>

namespace fairdiv::service {

namespace fs = std::filesystem;

Reply error_reply(int status, const std::string& code, const std::string& message) {
    return {status, json{{"error", code}, {"message", message}}};
}

ServiceConfig ServiceConfig::from_env() {
    ServiceConfig out;
    if (const char* addr = std::getenv("ADDR")) out.set_addr(addr);
    if (const char* dir = std::getenv("DATA_DIR")) out.data_dir = dir;
    if (const char* max = std::getenv("MAX_PIECES")) {
        try {
            out.max_pieces = std::stoi(max);
        } catch (const std::exception&) {
            throw Error("BadConfig", std::string("MAX_PIECES is not a number: ") + max);
        }
    }
    return out;
}

void ServiceConfig::set_addr(const std::string& addr) {
    const auto colon = addr.rfind(':');
    if (colon == std::string::npos) throw Error("BadConfig", "address must be host:port, got '" + addr + "'");
    if (colon > 0) host = addr.substr(0, colon);
    try {
        port = std::stoi(addr.substr(colon + 1));
    } catch (const std::exception&) {
        throw Error("BadConfig", "bad port in '" + addr + "'");
    }
}

EventStore::EventStore(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

void EventStore::append(const std::string& id, const std::vector<json>& events) const {
    std::ofstream out(dir_ / (id + ".ndjson"), std::ios::app);
    for (const auto& e : events) out << e.dump() << '\n';
    out.flush();
    if (!out) throw Error("StoreFailed", "cannot append to the log of " + id);
}

std::vector<json> EventStore::read(const std::string& id) const {
    std::ifstream in(dir_ / (id + ".ndjson"));
    if (!in) throw Error("UnknownSession", id);
    std::vector<json> out;
    std::string line;
    while (std::getline(in, line)) {
        // A crash can leave a torn last line; everything before it stands.
        if (line.empty()) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::exception&) {
            if (in.peek() != EOF) throw Error("BadLog", "unreadable event in the log of " + id);
            in.close();
            std::ofstream rewrite(dir_ / (id + ".ndjson"), std::ios::trunc);
            for (const auto& e : out) rewrite << e.dump() << '\n';
            break;
        }
    }
    return out;
}

std::vector<std::string> EventStore::ids() const {
    std::vector<std::string> out;
    for (const auto& entry : fs::directory_iterator(dir_))
        if (entry.path().extension() == ".ndjson") out.push_back(entry.path().stem().string());
    return out;
}

Service::Service(ServiceConfig config) : config_(std::move(config)), store_(config_.data_dir) {
    for (const auto& id : store_.ids()) {
        auto slot = std::make_shared<Slot>();
        slot->session = std::make_unique<Session>(Session::replay(store_.read(id), config_.max_pieces));
        sessions_[id] = std::move(slot);
    }
}

size_t Service::size() const {
    std::lock_guard lock(registry_mutex_);
    return sessions_.size();
}

std::string Service::new_id() {
    static std::random_device device;
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    std::uniform_int_distribution<unsigned long long> word;
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", word(device), word(device));
    return buf;
}

std::shared_ptr<Service::Slot> Service::find(const std::string& id) const {
    std::lock_guard lock(registry_mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

void Service::persist(const Session& session, size_t from) const {
    const auto& log = session.log();
    store_.append(session.id(), std::vector<json>(log.begin() + static_cast<long>(from), log.end()));
}

Reply Service::create(const json& body) {
    SessionConfig config;
    try {
        config = SessionConfig::from_json(body, config_.max_pieces);
    } catch (const Error& e) {
        return error_reply(400, e.code(), e.what());
    }
    auto slot = std::make_shared<Slot>();
    std::lock_guard session_lock(slot->mutex);
    std::string id;
    {
        std::lock_guard lock(registry_mutex_);
        do id = new_id();
        while (sessions_.count(id));
        slot->session = std::make_unique<Session>(id, std::move(config));
        sessions_[id] = slot;
    }
    slot->session->refine();
    persist(*slot->session, 0);
    return {201, slot->session->view()};
}

Reply Service::get(const std::string& id) {
    auto slot = find(id);
    if (!slot) return error_reply(404, "UnknownSession", "no session " + id);
    std::lock_guard lock(slot->mutex);
    return {200, slot->session->view()};
}

namespace {

std::optional<int> parse_agent(const std::string& text) {
    try {
        size_t used = 0;
        const int agent = std::stoi(text, &used);
        if (used == text.size()) return agent;
    } catch (const std::exception&) {
    }
    return std::nullopt;
}

}  // namespace

Reply Service::queries(const std::string& id, const std::string& agent_text) {
    auto slot = find(id);
    if (!slot) return error_reply(404, "UnknownSession", "no session " + id);
    const auto agent = parse_agent(agent_text);
    if (!agent) return error_reply(400, "BadInput", "agent must be an integer");
    std::lock_guard lock(slot->mutex);
    if (!slot->session->has_agent(*agent)) return error_reply(404, "UnknownAgent", "no agent " + agent_text);
    return {200, slot->session->queries_json(*agent)};
}

Reply Service::answer(const std::string& id, const json& body) {
    auto slot = find(id);
    if (!slot) return error_reply(404, "UnknownSession", "no session " + id);
    int agent = 0;
    RationalVector division;
    std::vector<int> preferred;
    try {
        if (!body.is_object()) throw Error("BadInput", "answer must be an object");
        agent = body.at("agent").get<int>();
        division = io::vector_from(body.at("division"));
        preferred = body.at("preferred").get<std::vector<int>>();
    } catch (const Error& e) {
        return error_reply(400, e.code(), e.what());
    } catch (const json::exception& e) {
        return error_reply(400, "BadInput", e.what());
    }
    std::lock_guard lock(slot->mutex);
    const size_t before = slot->session->log().size();
    const Outcome outcome = slot->session->submit(agent, division, std::move(preferred));
    if (outcome.status != 200) return error_reply(outcome.status, outcome.code, outcome.message);
    if (outcome.appended) persist(*slot->session, before);
    json body_out = slot->session->view();
    body_out["accepted"] = true;
    body_out["duplicate"] = !outcome.appended;
    return {200, body_out};
}

Reply Service::result(const std::string& id) {
    auto slot = find(id);
    if (!slot) return error_reply(404, "UnknownSession", "no session " + id);
    std::lock_guard lock(slot->mutex);
    return {200, slot->session->result_json()};
}

}  // namespace fairdiv::service
