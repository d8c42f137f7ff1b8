#include "fairdiv/division/division.hpp"

#include "fairdiv/error.hpp"
#include "fairdiv/kkm/kkm.hpp"
#include "fairdiv/simplicial/kuhn.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fairdiv::division {

namespace {

using simplicial::GridPoint;

RationalVector cut_positions(const RationalVector& x) {
    RationalVector s(x.size() + 1, 0);
    for (size_t i = 0; i < x.size(); ++i) s[i + 1] = s[i] + x[i];
    return s;
}

void check_division(const RationalVector& x) {
    if (x.size() < 2) throw Error("BadDivision", "need at least two pieces");
    Rational total = 0;
    for (const auto& v : x) {
        if (v < 0) throw Error("BadDivision", "negative piece");
        total += v;
    }
    if (total != 1) throw Error("BadDivision", "pieces must sum to 1");
}

// Smallest m with m >= c / eps.
int mesh_for(const Rational& eps, long c) {
    if (eps <= 0) throw Error("EpsNonpositive", "eps must be positive");
    const Rational q = Rational(c) / eps;
    mpz_class up = q.get_num() / q.get_den();
    if (up * q.get_den() < q.get_num()) ++up;
    if (!up.fits_sint_p() || up > 1'000'000) throw Error("BadConfig", "eps too small");
    return std::max(1, static_cast<int>(up.get_si()));
}

// Double to exact rational, renormalized onto the simplex.
RationalVector exact_point(const kkm::Point& x) {
    RationalVector out;
    Rational total = 0;
    for (double v : x) {
        out.emplace_back(std::max(0.0, v));
        total += out.back();
    }
    for (auto& v : out) v /= total;
    return out;
}

class Asker {
public:
    Asker(const std::vector<AgentProfile>& agents, Mode mode) : agents_(agents), mode_(mode) {}

    std::vector<int> operator()(int agent, const RationalVector& x) {
        const auto& profile = agents_[static_cast<size_t>(agent)];
        std::vector<int> preferred;
        if (profile.is_scripted()) {
            preferred = scripted_preference(*profile.density, x, mode_);
        } else {
            preferred = profile.oracle(x);
            std::sort(preferred.begin(), preferred.end());
            preferred.erase(std::unique(preferred.begin(), preferred.end()), preferred.end());
            const std::string bad = answer_violation(x, preferred, mode_);
            if (!bad.empty()) throw Error("InvalidAnswer", "agent " + std::to_string(agent) + ": " + bad);
        }
        trace.push_back({agent, x, preferred});
        return preferred;
    }

    std::vector<Query> trace;

private:
    const std::vector<AgentProfile>& agents_;
    Mode mode_;
};

}  // namespace

std::string to_string(Mode mode) { return mode == Mode::Cake ? "cake" : "rent"; }

Mode parse_mode(const std::string& text) {
    if (text == "cake") return Mode::Cake;
    if (text == "rent") return Mode::Rent;
    throw Error("BadConfig", "mode must be cake or rent, got '" + text + "'");
}

Density::Density(std::vector<std::pair<Rational, Rational>> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw Error("BadProfile", "density needs at least two breakpoints");
    if (points_.front().first != 0 || points_.back().first != 1)
        throw Error("BadProfile", "breakpoints must run from 0 to 1");
    for (auto& [t, v] : points_) {
        t.canonicalize();
        v.canonicalize();
    }
    prefix_.push_back(0);
    peak_ = 0;
    for (size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].second < 0) throw Error("BadProfile", "negative density");
        peak_ = std::max(peak_, points_[i].second);
        if (i == 0) continue;
        const auto& [a, fa] = points_[i - 1];
        const auto& [b, fb] = points_[i];
        if (b < a) throw Error("BadProfile", "breakpoints must not decrease");
        prefix_.push_back(prefix_.back() + (b - a) * (fa + fb) / 2);
    }
    if (prefix_.back() != 1) throw Error("BadProfile", "total mass is " + fairdiv::to_string(prefix_.back()) + ", not 1");
    for (const auto& [t, v] : points_) fast_.emplace_back(t.get_d(), v.get_d());
    for (const auto& p : prefix_) fast_prefix_.push_back(p.get_d());
}

Density Density::uniform() {
    std::vector<std::pair<Rational, Rational>> flat;
    flat.emplace_back(0, 1);
    flat.emplace_back(1, 1);
    return Density(std::move(flat));
}

Rational Density::cumulative(const Rational& t) const {
    if (t <= 0) return 0;
    if (t >= 1) return 1;
    // Last segment [a, b] with a < t <= b.
    size_t i = 1;
    while (points_[i].first < t) ++i;
    const auto& [a, fa] = points_[i - 1];
    const auto& [b, fb] = points_[i];
    const Rational ft = fa + (fb - fa) * (t - a) / (b - a);
    return prefix_[i - 1] + (t - a) * (fa + ft) / 2;
}

double Density::cumulative(double t) const {
    if (t <= 0) return 0;
    if (t >= 1) return 1;
    size_t i = 1;
    while (fast_[i].first < t) ++i;
    const auto [a, fa] = fast_[i - 1];
    const auto [b, fb] = fast_[i];
    const double ft = fa + (fb - fa) * (t - a) / (b - a);
    return fast_prefix_[i - 1] + (t - a) * (fa + ft) / 2;
}

RationalVector piece_values(const Density& density, const RationalVector& x, Mode mode) {
    const size_t n = x.size();
    RationalVector out(n);
    if (mode == Mode::Cake) {
        const RationalVector s = cut_positions(x);
        for (size_t i = 0; i < n; ++i) out[i] = density.cumulative(s[i + 1]) - density.cumulative(s[i]);
    } else {
        for (size_t i = 0; i < n; ++i) {
            const Rational v = density.cumulative(make_rational(static_cast<long>(i + 1), static_cast<long>(n))) - density.cumulative(make_rational(static_cast<long>(i), static_cast<long>(n)));
            out[i] = x[i] * (1 - v);
        }
    }
    return out;
}

std::vector<int> scripted_preference(const Density& density, const RationalVector& x, Mode mode) {
    check_division(x);
    const RationalVector values = piece_values(density, x, mode);
    std::optional<Rational> best;
    for (size_t i = 0; i < x.size(); ++i) {
        if (mode == Mode::Cake && x[i] == 0) continue;
        if (!best || (mode == Mode::Cake ? values[i] > *best : values[i] < *best)) best = values[i];
    }
    std::vector<int> out;
    for (size_t i = 0; i < x.size(); ++i)
        if (!(mode == Mode::Cake && x[i] == 0) && values[i] == *best) out.push_back(static_cast<int>(i));
    return out;
}

std::string answer_violation(const RationalVector& x, const std::vector<int>& preferred, Mode mode) {
    if (preferred.empty()) return "empty";
    bool free_room = false, free_pick = false;
    for (int i : preferred)
        if (i < 0 || static_cast<size_t>(i) >= x.size()) return "range";
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] != 0) continue;
        free_room = true;
        if (std::find(preferred.begin(), preferred.end(), static_cast<int>(i)) != preferred.end()) free_pick = true;
    }
    // Some piece is always nonempty, so an empty preferred piece is never allowed.
    if (mode == Mode::Cake && free_pick) return "hungry";
    if (mode == Mode::Rent && free_room && !free_pick) return "free-room";
    return "";
}

EnvyFreeResult envy_free_division(const std::vector<AgentProfile>& agents, const Rational& eps, Mode mode) {
    if (agents.size() < 2) throw Error("BadConfig", "need at least two agents");
    const int d = static_cast<int>(agents.size()) - 1;
    EnvyFreeResult out;

    if (mode == Mode::Rent) {
        const std::vector<AgentProfile> known(agents.begin(), agents.end() - 1);
        SecretResult secret = secret_preference_division(known, eps, mode);
        Asker ask(agents, mode);
        const int pick = ask(d, secret.division).front();
        out.division = secret.division;
        out.assignment = secret.rows[static_cast<size_t>(pick)];
        out.assignment.push_back(pick);
        out.trace = std::move(secret.trace);
        out.trace.insert(out.trace.end(), ask.trace.begin(), ask.trace.end());
        out.mesh = secret.mesh;
        return out;
    }

    const int m = mesh_for(eps, 4);
    Asker ask(agents, mode);
    auto owner = [&](const GridPoint& s) {
        long sum = 0;
        for (int v : s) sum += v;
        return static_cast<int>(sum % (d + 1));
    };
    auto walk = simplicial::kuhn_walk(d, m, [&](const GridPoint& s) {
        return ask(owner(s), simplicial::grid_to_point(s, m)).front();
    });

    out.assignment.assign(static_cast<size_t>(d) + 1, -1);
    out.division.assign(static_cast<size_t>(d) + 1, 0);
    for (size_t v = 0; v < walk.vertices.size(); ++v) {
        out.assignment[static_cast<size_t>(owner(walk.vertices[v]))] = walk.labels[v];
        const RationalVector x = simplicial::grid_to_point(walk.vertices[v], m);
        for (size_t k = 0; k < x.size(); ++k) out.division[k] += x[k] / (d + 1);
    }
    out.trace = std::move(ask.trace);
    out.mesh = m;
    return out;
}

SecretResult secret_preference_division(const std::vector<AgentProfile>& known, const Rational& eps, Mode mode) {
    if (known.empty()) throw Error("BadConfig", "need at least one known agent");
    if (eps <= 0) throw Error("EpsNonpositive", "eps must be positive");
    const int d = static_cast<int>(known.size());
    const bool dual = mode == Mode::Rent;
    const bool scripted = std::all_of(known.begin(), known.end(), [](const AgentProfile& a) { return a.is_scripted(); });

    SecretResult out;
    Asker ask(known, mode);
    std::vector<kkm::Cover> covers;
    double fattening = eps.get_d();
    if (scripted) {
        for (const auto& agent : known) covers.push_back(preference_cover(*agent.density, d, mode));
    } else {
        // Every vertex of one grid is asked of every agent, in grid order.
        const int m = mesh_for(eps, 2);
        for (int j = 0; j < d; ++j)
            covers.push_back(kkm::vertex_cover(
                d, m, [&](const GridPoint& s) { return ask(j, simplicial::grid_to_point(s, m)); }, dual));
        fattening /= 2;
        out.mesh = m;
    }

    const auto point = kkm::strong_colorful_kkm(covers, fattening, dual);
    out.division = exact_point(point.x);
    out.residual = point.residual;
    // picks[i][j] already names the piece of cover (agent) j when piece i is taken.
    out.rows = point.picks;
    out.trace = std::move(ask.trace);
    return out;
}

std::vector<RationalVector> oracle_grid(int d, const Rational& eps) {
    if (d < 1) throw Error("BadConfig", "need d >= 1");
    const int m = mesh_for(eps, 2);
    std::vector<RationalVector> out;
    for (const auto& s : simplicial::grid_points(d, m)) out.push_back(simplicial::grid_to_point(s, m));
    return out;
}

Rational envy_report(const RationalVector& division, const std::vector<int>& assignment,
                     const std::vector<AgentProfile>& agents, Mode mode) {
    check_division(division);
    if (assignment.size() != agents.size()) throw Error("BadConfig", "one assigned piece per agent");
    Rational worst = 0;
    for (size_t j = 0; j < agents.size(); ++j) {
        if (!agents[j].is_scripted()) throw Error("OracleAgent", "agent " + std::to_string(j) + " has no valuation");
        const int piece = assignment[j];
        if (piece < 0 || static_cast<size_t>(piece) >= division.size()) throw Error("BadConfig", "piece out of range");
        const RationalVector values = piece_values(*agents[j].density, division, mode);
        for (const auto& v : values) {
            const Rational envy = mode == Mode::Cake ? Rational(v - values[static_cast<size_t>(piece)])
                                                     : Rational(values[static_cast<size_t>(piece)] - v);
            worst = std::max(worst, envy);
        }
    }
    return worst;
}

kkm::Cover preference_cover(const Density& density, int d, Mode mode) {
    if (d < 1) throw Error("BadConfig", "need d >= 1");
    const size_t n = static_cast<size_t>(d) + 1;
    std::vector<double> room(n);
    for (size_t i = 0; i < n; ++i)
        room[i] = Rational(density.cumulative(make_rational(static_cast<long>(i + 1), static_cast<long>(n))) - density.cumulative(make_rational(static_cast<long>(i), static_cast<long>(n)))).get_d();

    auto contains = [density, mode](int k, const RationalVector& x) {
        const auto best = scripted_preference(density, x, mode);
        return std::binary_search(best.begin(), best.end(), k);
    };
    auto margin = [density, mode, room](int k, const kkm::Point& x) -> double {
        std::vector<double> values(x.size());
        if (mode == Mode::Cake) {
            double left = 0, below = 0;
            for (size_t i = 0; i < x.size(); ++i) {
                const double right = i + 1 == x.size() ? 1.0 : left + x[i];
                const double above = density.cumulative(right);
                values[i] = above - below;
                left = right;
                below = above;
            }
        } else {
            for (size_t i = 0; i < x.size(); ++i) values[i] = -x[i] * (1 - room[i]);
        }
        double other = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < x.size(); ++i)
            if (static_cast<int>(i) != k) other = std::max(other, values[i]);
        return values[static_cast<size_t>(k)] - other;
    };
    return kkm::Cover::from_predicate(d, contains, margin, mode == Mode::Rent);
}

Rational lipschitz(const std::vector<AgentProfile>& agents) {
    Rational out = 0;
    for (const auto& a : agents)
        if (a.is_scripted()) out = std::max(out, a.density->peak());
    return out;
}

}  // namespace fairdiv::division
