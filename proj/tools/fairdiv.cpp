// Command-line front door. Every command prints one JSON document on stdout.
// Exit codes: 0 success, 1 solver or input error, 2 usage error.

#include "fairdiv/error.hpp"
#include "fairdiv/io.hpp"
#include "fairdiv/kkm/kkm.hpp"
#include "fairdiv/necklace/binary.hpp"
#include "fairdiv/necklace/exhaustive.hpp"
#include "fairdiv/service/http.hpp"
#include "fairdiv/simplicial/complex.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace fairdiv;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("BadInput", "cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json read_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw Error("BadInput", path + ": " + e.what());
    }
}

// A file, or inline JSON when the argument starts with '[' or '{'.
json json_arg(const std::string& arg) {
    if (!arg.empty() && (arg.front() == '[' || arg.front() == '{')) {
        try {
            return json::parse(arg);
        } catch (const json::exception& e) {
            throw Error("BadInput", e.what());
        }
    }
    return read_json(arg);
}

simplicial::PseudoComplex complex_arg(const std::string& arg) {
    if (arg == "octahedron") return simplicial::octahedron_boundary();
    if (arg == "icosahedron") return simplicial::icosahedron_boundary();
    return io::complex_from(json_arg(arg));
}

json rationals(const std::vector<std::vector<Rational>>& rows) {
    json out = json::array();
    for (const auto& row : rows) out.push_back(io::vector_json(row));
    return out;
}

struct NecklaceArgs {
    std::string file, text;
    int k = 2;
    std::string constraint = "free";
    std::string edges;

    necklace::Necklace load() const {
        if (!text.empty()) return io::necklace_from_text(text);
        return io::necklace_from_text(read_file(file));
    }
    necklace::ConstraintGraph graph() const {
        return io::constraint_from(constraint, k, edges.empty() ? json(nullptr) : json_arg(edges));
    }
};

void necklace_options(CLI::App* cmd, NecklaceArgs& a) {
    auto* file = cmd->add_option("--file", a.file, "necklace file: symbols (GGGRRR) or {\"beads\": [...]}")->check(CLI::ExistingFile);
    auto* text = cmd->add_option("--necklace", a.text, "necklace given inline");
    file->excludes(text);
    cmd->add_option("--k", a.k, "number of thieves")->required()->check(CLI::Range(1, 64));
    cmd->add_option("--constraint", a.constraint, "free | cycle4 | binary | explicit")
        ->check(CLI::IsMember({"free", "cycle4", "binary", "explicit"}));
    cmd->add_option("--edges", a.edges, "allowed thief pairs for explicit, file or inline [[1,2],...]");
}

json necklace_solve(const NecklaceArgs& a, const std::string& method_arg, int max_cuts, const std::vector<int>& order,
                    std::uint64_t budget) {
    const auto neck = a.load();
    const auto graph = a.graph();
    std::string method = method_arg;
    if (method == "auto") {
        if (max_cuts >= 0 || !order.empty())
            method = "exhaustive";
        else if (graph.kind == necklace::ConstraintGraph::Kind::Binary && neck.q <= 2)
            method = "binary";
        else if (graph.kind == necklace::ConstraintGraph::Kind::Cycle4 && a.k == 4)
            method = "cyclic";
        else
            method = "exhaustive";
    }
    if (method == "binary") {
        if (neck.q > 2) throw Error("BadInput", "the binary method handles at most two bead types");
        const auto s = necklace::solve_binary_two_color(neck, a.k);
        return json{{"result", "found"}, {"method", method}, {"size", s.size()}, {"splitting", io::splitting_json(s)}};
    }
    if (method == "cyclic") {
        if (a.k != 4) throw Error("BadInput", "the cyclic method needs k = 4");
        const auto s = necklace::solve_cyclic_k4(neck, budget);
        return json{{"result", "found"}, {"method", method}, {"size", s.size()}, {"splitting", io::splitting_json(s)}};
    }
    necklace::ExhaustiveOptions options;
    options.owner_order = order;
    options.budget = budget;
    int cuts = max_cuts;
    if (cuts < 0) cuts = order.empty() ? (a.k - 1) * neck.q : static_cast<int>(order.size()) - 1;
    const auto s = necklace::solve_exhaustive(neck, a.k, cuts, graph, options);
    if (!s) return json{{"result", "none"}, {"method", "exhaustive"}, {"max_cuts", cuts}};
    return json{{"result", "found"}, {"method", "exhaustive"}, {"size", s->size()}, {"splitting", io::splitting_json(*s)}};
}

json necklace_verify(const NecklaceArgs& a, const std::string& splitting_arg) {
    const auto neck = a.load();
    const auto report = necklace::verify(neck, a.k, io::splitting_from(json_arg(splitting_arg)), a.graph());
    json adjacent = json::array();
    for (const auto& [x, y] : report.adjacent) adjacent.push_back({x, y});
    json out{{"fair", report.fair},
             {"constraint_ok", report.constraint_ok},
             {"size", report.size},
             {"tally", rationals(report.tally)},
             {"adjacent", adjacent}};
    if (!report.problem.empty()) out["problem"] = report.problem;
    return out;
}

json sperner_count(const std::string& complex_file, const std::string& coloring_file) {
    const auto complex = complex_arg(complex_file);
    const auto coloring = io::coloring_from(json_arg(coloring_file), complex.num_vertices());
    const auto r = simplicial::rainbow_facets(complex, coloring);
    return json{{"rainbow_facets", r.facets.size()},
                {"odd", r.facets.size() % 2 == 1},
                {"distinct_color_sets", r.color_sets.size()},
                {"color_sets", r.color_sets}};
}

json sperner_bound(const std::string& complex_file) {
    const auto complex = complex_arg(complex_file);
    const auto kind = simplicial::validate(complex).kind;
    if (kind != simplicial::Classification::Kind::Closed)
        throw Error("BadInput", "the bound needs a closed pseudomanifold, got " + simplicial::to_string(kind));
    return json{{"bound", io::rational_json(simplicial::lower_bound(complex))}, {"facets", complex.num_facets()}};
}

json kkm_run(const std::string& kind, const std::string& file, double eps) {
    const auto covers = io::covers_from(json_arg(file));
    const size_t d = static_cast<size_t>(covers.front().dim());
    const size_t expected = kind == "point" ? 1 : kind == "colorful" ? d + 1 : d;
    if (covers.size() != expected)
        throw Error("BadInput", "kkm " + kind + " needs " + std::to_string(expected) + " covers, the file has " +
                                    std::to_string(covers.size()));
    if (kind == "point") {
        const auto p = kkm::kkm_point(covers.front(), eps);
        return json{{"x", io::vector_json(p.x)}, {"mesh", p.mesh}, {"distances", p.distances}};
    }
    if (kind == "colorful") {
        const auto p = kkm::colorful_kkm(covers, eps);
        return json{{"x", io::vector_json(p.x)}, {"perm", p.perm}, {"mesh", p.mesh}, {"distances", p.distances}};
    }
    const auto p = kkm::strong_colorful_kkm(covers, eps, covers.front().dual());
    return json{{"x", p.x}, {"residual", p.residual}, {"pick_table", p.picks}, {"mesh", p.mesh}};
}

struct DivisionArgs {
    std::vector<std::string> agents;
    std::string eps = "1/1000";
    bool secret = false;
    std::string trace;
};

json division_run(division::Mode mode, const DivisionArgs& a) {
    std::vector<division::AgentProfile> profiles;
    for (const auto& arg : a.agents) {
        const json doc = json_arg(arg);
        for (const auto& spec : doc.is_array() ? doc : json::array({doc})) {
            auto profile = io::profile_from(spec);
            if (!profile.is_scripted()) throw Error("BadConfig", "interactive agents need the session service (serve)");
            profiles.push_back(std::move(profile));
        }
    }
    const Rational eps = io::rational_from(json(a.eps));
    json out{{"mode", division::to_string(mode)}, {"secret", a.secret}, {"eps", io::rational_json(eps)},
             {"lipschitz", io::rational_json(division::lipschitz(profiles))}};
    std::vector<division::Query> trace;
    if (a.secret) {
        const auto r = division::secret_preference_division(profiles, eps, mode);
        json envy = json::array();
        for (const auto& row : r.rows) envy.push_back(io::rational_json(division::envy_report(r.division, row, profiles, mode)));
        out["division"] = io::vector_json(r.division);
        out["pick_table"] = r.rows;
        out["envy"] = envy;
        out["residual"] = r.residual;
        trace = r.trace;
    } else {
        const auto r = division::envy_free_division(profiles, eps, mode);
        out["division"] = io::vector_json(r.division);
        out["assignment"] = r.assignment;
        out["envy"] = io::rational_json(division::envy_report(r.division, r.assignment, profiles, mode));
        out["mesh"] = r.mesh;
        trace = r.trace;
    }
    out["queries"] = trace.size();
    if (!a.trace.empty()) {
        std::ofstream log(a.trace);
        if (!log) throw Error("BadInput", "cannot write " + a.trace);
        for (size_t i = 0; i < trace.size(); ++i) log << io::query_json(trace[i], i).dump() << '\n';
    }
    return out;
}

void division_options(CLI::App* cmd, DivisionArgs& a) {
    cmd->add_option("--agents", a.agents, "agent profile files (a profile or a list of profiles each)")->required();
    cmd->add_option("--eps", a.eps, "precision, a rational such as 1/1000");
    cmd->add_flag("--secret", a.secret, "one more piece than agents, answered by a pick table");
    cmd->add_option("--trace", a.trace, "write the consumed answers as NDJSON");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fair division solvers: necklaces, Sperner, KKM, cake and rent"};
    app.require_subcommand(1);
    std::function<json()> action;

    NecklaceArgs neck;
    std::string method = "auto", splitting;
    int max_cuts = -1;
    std::vector<int> order;
    std::uint64_t budget = 200'000'000;
    auto* necklace_cmd = app.add_subcommand("necklace", "necklace splitting")->require_subcommand(1);
    auto* solve = necklace_cmd->add_subcommand("solve", "find a fair splitting");
    necklace_options(solve, neck);
    solve->add_option("--method", method, "auto | binary | cyclic | exhaustive")
        ->check(CLI::IsMember({"auto", "binary", "cyclic", "exhaustive"}));
    solve->add_option("--max-cuts", max_cuts, "exhaustive search bound")->check(CLI::NonNegativeNumber);
    solve->add_option("--order", order, "owner of each piece in turn, e.g. 1,2,3,1,2")->delimiter(',');
    solve->add_option("--budget", budget, "search node budget");
    auto need_necklace = [&] {
        if (neck.file.empty() && neck.text.empty()) throw CLI::RequiredError("--file or --necklace");
    };
    solve->callback([&] {
        need_necklace();
        action = [&] { return necklace_solve(neck, method, max_cuts, order, budget); }; });
    auto* verify = necklace_cmd->add_subcommand("verify", "check a splitting");
    necklace_options(verify, neck);
    verify->add_option("--splitting", splitting, "splitting file or inline JSON")->required();
    verify->callback([&] {
        need_necklace();
        action = [&] { return necklace_verify(neck, splitting); }; });

    std::string complex_file, coloring_file;
    auto* sperner_cmd = app.add_subcommand("sperner", "Sperner colorings")->require_subcommand(1);
    auto* count = sperner_cmd->add_subcommand("count", "fully colored facets and their color sets");
    count->add_option("--complex", complex_file, "complex file, or octahedron / icosahedron")->required();
    count->add_option("--coloring", coloring_file, "coloring file")->required();
    count->callback([&] { action = [&] { return sperner_count(complex_file, coloring_file); }; });
    auto* bound = sperner_cmd->add_subcommand("bound", "guaranteed number of distinct color sets");
    bound->add_option("--complex", complex_file, "closed boundary complex, or octahedron / icosahedron")->required();
    bound->callback([&] { action = [&] { return sperner_bound(complex_file); }; });

    std::string cover_file;
    double eps = 1e-3;
    auto* kkm_cmd = app.add_subcommand("kkm", "KKM points")->require_subcommand(1);
    for (const char* kind : {"point", "colorful", "strong"}) {
        auto* cmd = kkm_cmd->add_subcommand(kind, std::string("kkm ") + kind);
        cmd->add_option("--cover", cover_file, "cover file")->required();
        cmd->add_option("--eps", eps, "precision")->check(CLI::PositiveNumber);
        cmd->callback([&, kind] { action = [&, kind] { return kkm_run(kind, cover_file, eps); }; });
    }

    DivisionArgs division_args;
    for (auto mode : {division::Mode::Cake, division::Mode::Rent}) {
        auto* group = app.add_subcommand(division::to_string(mode), mode == division::Mode::Cake ? "envy-free cake cutting" : "rent division")
                          ->require_subcommand(1);
        auto* run = group->add_subcommand("run", "divide with scripted agents");
        division_options(run, division_args);
        run->callback([&, mode] { action = [&, mode] { return division_run(mode, division_args); }; });
    }

    std::string addr, data_dir;
    int max_pieces = 0;
    auto* serve = app.add_subcommand("serve", "run the session HTTP API");
    serve->add_option("--addr", addr, "host:port (env ADDR)");
    serve->add_option("--data-dir", data_dir, "event log directory (env DATA_DIR)");
    serve->add_option("--max-pieces", max_pieces, "largest piece count (env MAX_PIECES)")->check(CLI::Range(2, 64));
    serve->callback([&] {
        action = [&]() -> json {
            auto config = service::ServiceConfig::from_env();
            if (!addr.empty()) config.set_addr(addr);
            if (!data_dir.empty()) config.data_dir = data_dir;
            if (max_pieces > 0) config.max_pieces = max_pieces;
            service::Service svc(config);
            service::HttpServer server(svc);
            const int port = server.bind(config.host, config.port);
            if (port < 0) throw Error("BadConfig", "cannot bind " + config.host + ":" + std::to_string(config.port));
            std::cout << json{{"listening", config.host + ":" + std::to_string(port)}, {"sessions", svc.size()}}.dump() << std::endl;
            server.listen();
            return json{{"stopped", true}};
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        std::cout << action().dump() << std::endl;
    } catch (const Error& e) {
        std::cerr << json{{"error", e.code()}, {"message", e.what()}}.dump() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << std::endl;
        return 1;
    }
    return 0;
}
