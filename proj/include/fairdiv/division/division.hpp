#pragma once

#include "fairdiv/kkm/cover.hpp"
#include "fairdiv/rational.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fairdiv::division {

enum class Mode { Cake, Rent };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

/**
 * Piecewise-linear density on [0,1] given by breakpoints (t, value). Breakpoints
 * run from 0 to 1 and never decrease; a repeated breakpoint is a jump. Values
 * are nonnegative and the total mass is exactly 1.
 */
class Density {
public:
    explicit Density(std::vector<std::pair<Rational, Rational>> points);
    static Density uniform();

    const std::vector<std::pair<Rational, Rational>>& points() const { return points_; }

    /// Mass of [0, t].
    Rational cumulative(const Rational& t) const;
    double cumulative(double t) const;
    /// Largest density value, the Lipschitz constant of cumulative().
    const Rational& peak() const { return peak_; }

private:
    std::vector<std::pair<Rational, Rational>> points_;
    std::vector<Rational> prefix_;  // mass up to each breakpoint
    std::vector<std::pair<double, double>> fast_;
    std::vector<double> fast_prefix_;
    Rational peak_;
};

/// The agent's preferred pieces (rooms) at a division; any nonempty subset.
using Oracle = std::function<std::vector<int>(const RationalVector&)>;

/// Either a scripted valuation or an oracle answering for an interactive agent.
struct AgentProfile {
    std::optional<Density> density;
    Oracle oracle;

    static AgentProfile scripted(Density density) { return {std::move(density), {}}; }
    static AgentProfile interactive(Oracle oracle) { return {std::nullopt, std::move(oracle)}; }
    bool is_scripted() const { return density.has_value(); }
};

/**
 * Cake: piece i is the interval [x_0 + ... + x_{i-1}, x_0 + ... + x_i] and is
 * worth its mass. Rent: x is the rent vector, room i is worth v_i = the mass of
 * [i/(d+1), (i+1)/(d+1)], and costs the tenant x_i * (1 - v_i), so a free room is
 * never worse than a paid one.
 */
RationalVector piece_values(const Density& density, const RationalVector& x, Mode mode);

/// Scripted answer: the most valuable nonempty pieces (cake) or the cheapest rooms (rent).
std::vector<int> scripted_preference(const Density& density, const RationalVector& x, Mode mode);

/// Empty string if the answer is admissible at x, otherwise the violated rule
/// ("empty", "range", "hungry", "free-room").
std::string answer_violation(const RationalVector& x, const std::vector<int>& preferred, Mode mode);

/// One answer consumed by a solver.
struct Query {
    int agent = 0;
    RationalVector division;
    std::vector<int> preferred;
};

struct EnvyFreeResult {
    RationalVector division;
    std::vector<int> assignment;  // assignment[agent] = piece
    std::vector<Query> trace;
    int mesh = 0;
};

/**
 * d+1 agents, d >= 1. Cake: Kuhn walk on the mesh-1/m grid, m = ceil(4/eps),
 * with vertex s asked of agent (s_1 + ... + s_d) mod (d+1) and labeled by the
 * lowest preferred piece; the output is the barycenter of the fully labeled
 * simplex. Rent: the first d tenants go through secret_preference_division and
 * the last tenant chooses first. Every agent prefers its piece at a division
 * within eps (max norm) of the output. Oracle answers are validated and raise
 * Error("InvalidAnswer") when inadmissible.
 */
EnvyFreeResult envy_free_division(const std::vector<AgentProfile>& agents, const Rational& eps, Mode mode);

struct SecretResult {
    RationalVector division;
    /// rows[i][j]: piece of known agent j when the secret agent takes piece i.
    std::vector<std::vector<int>> rows;
    double residual = 0;
    std::vector<Query> trace;
    int mesh = 0;  // answer grid for oracle agents, 0 when all are scripted
};

/**
 * d known agents for d+1 pieces. Each agent becomes a KKM cover (dual for rent),
 * strong_colorful_kkm finds x, and its bijections become the pick table. With
 * only scripted agents the covers are preference_cover and every assigned piece
 * is within eps of best in value (cost). With oracle agents every agent answers
 * at all vertices of the mesh-1/m grid, m = ceil(2/eps), and each assigned piece
 * is preferred at a division within eps of x.
 */
SecretResult secret_preference_division(const std::vector<AgentProfile>& known, const Rational& eps, Mode mode);

/// The divisions every oracle agent answers in secret_preference_division with
/// d known agents, in lexicographic grid order. Answers do not change the set,
/// so a caller can collect them all up front.
std::vector<RationalVector> oracle_grid(int d, const Rational& eps);

/// Largest shortfall of an assigned piece against the agent's best piece
/// (cake: value; rent: cost). assignment[j] is agent j's piece. Throws
/// Error("OracleAgent") for agents without a valuation.
Rational envy_report(const RationalVector& division, const std::vector<int>& assignment,
                     const std::vector<AgentProfile>& agents, Mode mode);

/**
 * C_k = the division where k is a preferred piece, for a scripted agent. The
 * signed margin is the value lead of piece k over the best other piece (rent:
 * the cost lead), so the eps-neighbourhood in the strong KKM construction means
 * "within eps of best".
 */
kkm::Cover preference_cover(const Density& density, int d, Mode mode);

/// Largest valuation density over the agents, the L in envy <= L * eps.
Rational lipschitz(const std::vector<AgentProfile>& agents);

}  // namespace fairdiv::division
