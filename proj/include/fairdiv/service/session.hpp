#pragma once

#include "fairdiv/division/division.hpp"
#include "fairdiv/io.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fairdiv::service {

using nlohmann::json;

enum class State { Collecting, Refining, Done, Failed };
std::string to_string(State state);

struct SessionConfig {
    division::Mode mode = division::Mode::Cake;
    std::vector<json> agents;  // profile JSON, scripted or interactive
    Rational eps;
    bool secret = false;

    int pieces() const { return static_cast<int>(agents.size()) + (secret ? 1 : 0); }

    /// Validates and throws Error("BadConfig").
    static SessionConfig from_json(const json& value, int max_pieces);
    json to_json() const;
};

/// Result of submitting one answer.
struct Outcome {
    int status = 200;  // HTTP-style: 200 accepted, 400 rejected, 404 unknown, 409 conflict
    std::string code;  // empty when accepted, else e.g. "hungry", "StaleQuery"
    std::string message;
    bool appended = false;  // false for an idempotent resubmission
};

/**
 * Event-sourced session. The log holds the creation event, every accepted
 * answer and every engine step. The state is a pure function of the answers:
 * each step reruns the library from scratch with interactive agents answering
 * from the log, and a missing answer becomes a pending query. Secret-pipeline
 * grids are asked all at once, a Kuhn walk one query at a time.
 */
class Session {
public:
    Session(std::string id, SessionConfig config);

    /// Rebuilds a session from its log; throws Error("ReplayDiverged") when a
    /// logged engine step does not match the recomputed one.
    static Session replay(const std::vector<json>& events, int max_pieces);

    const std::string& id() const { return id_; }
    const SessionConfig& config() const { return config_; }
    State state() const { return state_; }
    const std::vector<json>& log() const { return log_; }

    /// Runs the engine on the current answers and logs the step.
    void refine();

    /// Validates and records an answer; refines when it was new.
    Outcome submit(int agent, const RationalVector& division, std::vector<int> preferred);

    bool has_agent(int agent) const;
    std::vector<RationalVector> pending(int agent) const;

    json view() const;
    json queries_json(int agent) const;
    /// Byte-stable result document; for done sessions it carries the division
    /// and the assignment (or the pick table for secret sessions).
    json result_json() const;

private:
    using Key = std::pair<int, std::string>;
    static std::string key_of(const RationalVector& division);
    json step_event() const;
    void run_engine();

    std::string id_;
    SessionConfig config_;
    State state_ = State::Collecting;
    std::string reason_;
    std::map<Key, std::vector<int>> answers_;
    std::map<int, std::vector<RationalVector>> pending_;
    std::optional<RationalVector> division_;
    std::vector<int> assignment_;
    std::vector<std::vector<int>> rows_;
    int mesh_ = 0;
    size_t answered_ = 0;
    std::vector<json> log_;
};

/// The same result document computed by direct library calls with every agent
/// scripted. Used to check that the service adds nothing to the library.
json direct_result(const SessionConfig& config);

}  // namespace fairdiv::service
