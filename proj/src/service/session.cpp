#include "fairdiv/service/session.hpp"

#include "fairdiv/error.hpp"

#include <algorithm>
#include <cmath>

namespace fairdiv::service {

namespace {

// Thrown out of the library when an interactive agent has not answered yet.
struct NeedAnswer {
    int agent;
    RationalVector division;
};

// Cap on how many grid divisions one agent may be asked.
constexpr double kMaxGridQueries = 200'000;

json result_doc(const SessionConfig& config, const RationalVector& division, const std::vector<int>& assignment,
                const std::vector<std::vector<int>>& rows, int mesh) {
    json out{{"state", "done"},
             {"mode", division::to_string(config.mode)},
             {"secret", config.secret},
             {"division", io::vector_json(division)},
             {"mesh", mesh}};
    if (config.secret)
        out["pick_table"] = rows;
    else
        out["assignment"] = assignment;
    return out;
}

// Known agents feed the secret pipeline: all of them in a secret session, all
// but the last tenant in a rent session, none in a cake walk.
size_t known_count(const SessionConfig& config) {
    if (config.secret) return config.agents.size();
    return config.mode == division::Mode::Rent ? config.agents.size() - 1 : 0;
}

bool interactive(const json& spec) { return spec.at("kind") == "interactive"; }

}  // namespace

std::string to_string(State state) {
    switch (state) {
        case State::Collecting: return "collecting";
        case State::Refining: return "refining";
        case State::Done: return "done";
        case State::Failed: return "failed";
    }
    return "failed";
}

SessionConfig SessionConfig::from_json(const json& value, int max_pieces) {
    auto bad = [](const std::string& what) -> Error { return Error("BadConfig", what); };
    if (!value.is_object()) throw bad("session config must be an object");
    SessionConfig out;
    try {
        out.mode = division::parse_mode(value.value("mode", std::string("cake")));
        if (!value.contains("agents") || !value.at("agents").is_array()) throw bad("agents must be a list of profiles");
        for (const auto& spec : value.at("agents")) {
            const auto profile = io::profile_from(spec);
            out.agents.push_back(io::profile_json(profile));
        }
        out.eps = value.contains("eps") ? io::rational_from(value.at("eps")) : Rational(1, 100);
        out.secret = value.value("secret", false);
    } catch (const Error& e) {
        if (e.code() == "BadConfig") throw;
        throw bad(e.what());
    } catch (const json::exception& e) {
        throw bad(e.what());
    }
    const int pieces = out.pieces();
    if (value.contains("pieces") && value.at("pieces") != pieces)
        throw bad("pieces must equal the agent count" + std::string(out.secret ? " plus one" : ""));
    if (pieces < 2 || pieces > max_pieces)
        throw bad("piece count " + std::to_string(pieces) + " outside 2.." + std::to_string(max_pieces));
    if (out.agents.empty()) throw bad("need at least one agent");
    if (out.eps <= 0 || out.eps > 1) throw bad("eps must lie in (0, 1]");
    if (out.eps < Rational(1, 250'000)) throw bad("eps too small");
    const size_t known = known_count(out);
    if (std::any_of(out.agents.begin(), out.agents.begin() + static_cast<long>(known), interactive)) {
        // C(m + d, d) grid divisions per interactive known agent.
        const double m = std::ceil(Rational(2 / out.eps).get_d());
        const double d = static_cast<double>(known);
        const double grid = std::exp(std::lgamma(m + d + 1) - std::lgamma(m + 1) - std::lgamma(d + 1));
        if (grid > kMaxGridQueries) throw bad("eps too small for interactive agents: about " + std::to_string(static_cast<long>(grid)) + " queries each");
    }
    return out;
}

json SessionConfig::to_json() const {
    return json{{"mode", division::to_string(mode)}, {"agents", agents}, {"eps", io::rational_json(eps)}, {"secret", secret}};
}

Session::Session(std::string id, SessionConfig config) : id_(std::move(id)), config_(std::move(config)) {
    log_.push_back(json{{"seq", 0}, {"type", "created"}, {"id", id_}, {"config", config_.to_json()}});
}

std::string Session::key_of(const RationalVector& division) {
    std::string out;
    for (const auto& v : division) out += fairdiv::to_string(v) + ",";
    return out;
}

bool Session::has_agent(int agent) const { return agent >= 0 && static_cast<size_t>(agent) < config_.agents.size(); }

std::vector<RationalVector> Session::pending(int agent) const {
    auto it = pending_.find(agent);
    return it == pending_.end() ? std::vector<RationalVector>{} : it->second;
}

void Session::run_engine() {
    state_ = State::Refining;
    pending_.clear();
    reason_.clear();
    answered_ = answers_.size();

    std::vector<division::AgentProfile> profiles;
    for (size_t j = 0; j < config_.agents.size(); ++j) {
        const int agent = static_cast<int>(j);
        profiles.push_back(io::profile_from(config_.agents[j], [this, agent](const RationalVector& x) {
            auto it = answers_.find({agent, key_of(x)});
            if (it == answers_.end()) throw NeedAnswer{agent, x};
            return it->second;
        }));
    }

    // The secret pipeline asks a fixed grid, so all of it is requested at once.
    const size_t known = known_count(config_);
    for (size_t j = 0; j < known; ++j) {
        if (!interactive(config_.agents[j])) continue;
        for (const auto& x : division::oracle_grid(static_cast<int>(known), config_.eps))
            if (!answers_.count({static_cast<int>(j), key_of(x)})) pending_[static_cast<int>(j)].push_back(x);
    }
    if (!pending_.empty()) {
        state_ = State::Collecting;
        return;
    }

    try {
        if (config_.secret) {
            auto r = division::secret_preference_division(profiles, config_.eps, config_.mode);
            division_ = r.division;
            rows_ = r.rows;
            mesh_ = r.mesh;
        } else {
            auto r = division::envy_free_division(profiles, config_.eps, config_.mode);
            division_ = r.division;
            assignment_ = r.assignment;
            mesh_ = r.mesh;
        }
        state_ = State::Done;
    } catch (const NeedAnswer& need) {
        pending_[need.agent].push_back(need.division);
        state_ = State::Collecting;
    } catch (const Error& e) {
        reason_ = e.what();
        state_ = State::Failed;
    }
}

json Session::step_event() const {
    json pending = json::object();
    for (const auto& [agent, list] : pending_) pending[std::to_string(agent)] = list.size();
    json out{{"seq", log_.size()}, {"type", "step"}, {"state", to_string(state_)}, {"answered", answered_}, {"pending", pending}};
    if (state_ == State::Failed) out["reason"] = reason_;
    return out;
}

void Session::refine() {
    run_engine();
    log_.push_back(step_event());
}

Outcome Session::submit(int agent, const RationalVector& division, std::vector<int> preferred) {
    if (!has_agent(agent)) return {404, "UnknownAgent", "no agent " + std::to_string(agent), false};
    std::sort(preferred.begin(), preferred.end());
    preferred.erase(std::unique(preferred.begin(), preferred.end()), preferred.end());

    const Key key{agent, key_of(division)};
    if (auto it = answers_.find(key); it != answers_.end()) {
        if (it->second == preferred) return {200, "", "already recorded", false};
        return {409, "ConflictingAnswer", "a different answer is already recorded for this division", false};
    }
    const auto& waiting = pending_.find(agent);
    if (state_ != State::Collecting || waiting == pending_.end() ||
        std::find(waiting->second.begin(), waiting->second.end(), division) == waiting->second.end())
        return {400, "StaleQuery", "division is not pending for agent " + std::to_string(agent), false};
    const std::string violation = division::answer_violation(division, preferred, config_.mode);
    if (!violation.empty()) {
        const std::string rule = violation == "hungry"      ? "an empty piece was picked although a nonempty piece exists"
                                 : violation == "free-room" ? "a paid room was picked although a free room exists"
                                                            : "pick at least one piece, each in range";
        return {400, violation, rule, false};
    }

    answers_[key] = preferred;
    log_.push_back(json{{"seq", log_.size()},
                        {"type", "answer"},
                        {"agent", agent},
                        {"division", io::vector_json(division)},
                        {"preferred", preferred}});
    refine();
    return {200, "", "accepted", true};
}

Session Session::replay(const std::vector<json>& events, int max_pieces) {
    auto diverged = [](size_t seq, const std::string& what) {
        return Error("ReplayDiverged", "event " + std::to_string(seq) + ": " + what);
    };
    if (events.empty() || events.front().value("type", "") != "created") throw Error("BadLog", "log must start with a created event");
    const json& first = events.front();
    Session s(first.at("id").get<std::string>(), SessionConfig::from_json(first.at("config"), max_pieces));
    if (s.log_.front() != first) throw diverged(0, "creation event does not round-trip");
    for (size_t i = 1; i < events.size(); ++i) {
        const json& e = events[i];
        if (e.value("seq", -1) != static_cast<long>(i)) throw diverged(i, "sequence gap");
        const std::string type = e.value("type", "");
        if (type == "answer") {
            std::vector<int> preferred = e.at("preferred").get<std::vector<int>>();
            s.answers_[{e.at("agent").get<int>(), key_of(io::vector_from(e.at("division")))}] = preferred;
            s.log_.push_back(e);
        } else if (type == "step") {
            s.refine();
            if (s.log_.back() != e) throw diverged(i, "recomputed step " + s.log_.back().dump() + " differs from " + e.dump());
        } else {
            throw diverged(i, "unknown event type '" + type + "'");
        }
    }
    return s;
}

json Session::view() const {
    json agents = json::array();
    for (size_t j = 0; j < config_.agents.size(); ++j)
        agents.push_back(json{{"agent", j}, {"kind", config_.agents[j].at("kind")}, {"pending", pending(static_cast<int>(j)).size()}});
    json out{{"id", id_},
             {"mode", division::to_string(config_.mode)},
             {"secret", config_.secret},
             {"pieces", config_.pieces()},
             {"eps", io::rational_json(config_.eps)},
             {"state", to_string(state_)},
             {"agents", agents},
             {"answered", answered_},
             {"events", log_.size()}};
    if (state_ == State::Failed) out["reason"] = reason_;
    return out;
}

json Session::queries_json(int agent) const {
    json list = json::array();
    for (const auto& x : pending(agent)) list.push_back(json{{"division", io::vector_json(x)}});
    return json{{"agent", agent}, {"mode", division::to_string(config_.mode)}, {"pieces", config_.pieces()}, {"queries", list}};
}

json Session::result_json() const {
    if (state_ == State::Done) return result_doc(config_, *division_, assignment_, rows_, mesh_);
    json out{{"state", to_string(state_)}};
    if (state_ == State::Failed) out["reason"] = reason_;
    return out;
}

json direct_result(const SessionConfig& config) {
    std::vector<division::AgentProfile> profiles;
    for (const auto& spec : config.agents) {
        if (interactive(spec)) throw Error("BadConfig", "direct runs need scripted agents");
        profiles.push_back(io::profile_from(spec));
    }
    if (config.secret) {
        const auto r = division::secret_preference_division(profiles, config.eps, config.mode);
        return result_doc(config, r.division, {}, r.rows, r.mesh);
    }
    const auto r = division::envy_free_division(profiles, config.eps, config.mode);
    return result_doc(config, r.division, r.assignment, {}, r.mesh);
}

}  // namespace fairdiv::service
