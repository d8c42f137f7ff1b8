#include "doctest.h"

#include "fairdiv/division/division.hpp"
#include "fairdiv/io.hpp"
#include "fairdiv/necklace/exhaustive.hpp"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace fairdiv;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    json doc() const { return json::parse(out); }
};

Run cli(const std::string& args) {
    const std::string command = std::string(FAIRDIV_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe);
    std::array<char, 4096> buf{};
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct Scratch {
    fs::path dir = fs::temp_directory_path() / ("fairdiv-cli-" + std::to_string(::getpid()));
    Scratch() { fs::create_directories(dir); }
    ~Scratch() { fs::remove_all(dir); }
    std::string write(const std::string& name, const std::string& content) const {
        std::ofstream(dir / name) << content;
        return (dir / name).string();
    }
};

}  // namespace

TEST_CASE("necklace commands") {
    Scratch s;
    const auto ex = s.write("ex.txt", "GGGRRRGGGEEE\n");
    const Run none = cli("necklace solve --file " + ex + " --k 3 --max-cuts 6 --constraint binary");
    CHECK(none.code == 0);
    CHECK(none.doc()["result"] == "none");

    CHECK(cli("necklace solve --necklace GGGRRRGGG --k 3 --order 1,2,3,1,2").doc()["result"] == "none");

    // A binary splitting found by one command passes the other.
    const Run found = cli("necklace solve --necklace GGGRRRGGG --k 3 --constraint binary");
    REQUIRE(found.code == 0);
    const json splitting = found.doc()["splitting"];
    CHECK(found.doc()["size"].get<int>() <= 4);
    const auto sfile = s.write("s.json", splitting.dump());
    const Run verified = cli("necklace verify --necklace GGGRRRGGG --k 3 --splitting " + sfile + " --constraint binary");
    REQUIRE(verified.code == 0);
    CHECK(verified.doc()["fair"] == true);
    CHECK(verified.doc()["constraint_ok"] == true);

    // An unfair splitting is reported, not an error.
    const auto bad = s.write("bad.json", R"({"cuts": ["1/3"], "owners": [1, 2]})");
    const Run unfair = cli("necklace verify --necklace GGGRRRGGG --k 3 --splitting " + bad);
    CHECK(unfair.code == 0);
    CHECK(unfair.doc()["fair"] == false);

    CHECK(cli("necklace solve --k 3").code == 2);
    CHECK(cli("necklace solve --necklace GGR --k 3 --constraint ring").code == 2);
    CHECK(cli("necklace bogus").code == 2);
    CHECK(cli("").code == 2);
    CHECK(cli("necklace solve --necklace GGR --k 3").code == 1);  // counts not divisible
    CHECK(cli("necklace verify --necklace GGG --k 3 --splitting '{\"cuts\": [], \"owners\": [9]}'").code == 1);
}

TEST_CASE("sperner commands") {
    Scratch s;
    CHECK(cli("sperner bound --complex octahedron").doc()["bound"] == "3");
    CHECK(cli("sperner bound --complex icosahedron").doc()["bound"] == "9");

    // A segment subdivided in three, colored 0 0 1 1: one fully colored edge.
    const auto complex = s.write("c.json", R"({"dim": 1, "facets": [[0,1],[1,2],[2,3]]})");
    const auto coloring = s.write("col.json", R"({"colors": {"0": 0, "1": 0, "2": 1, "3": 1}})");
    const Run count = cli("sperner count --complex " + complex + " --coloring " + coloring);
    REQUIRE(count.code == 0);
    CHECK(count.doc()["rainbow_facets"] == 1);
    CHECK(count.doc()["odd"] == true);
    CHECK(cli("sperner bound --complex " + complex).code == 1);  // has boundary
    CHECK(cli("sperner bound").code == 2);
}

TEST_CASE("kkm commands") {
    Scratch s;
    const auto one = s.write("one.json", R"({"d": 1, "cells": [
        {"simplex": [["1","0"],["1/2","1/2"]], "members": {"0": [0]}},
        {"simplex": [["1/2","1/2"],["0","1"]], "members": {"0": [1]}}]})");
    const Run point = cli("kkm point --cover " + one + " --eps 0.01");
    REQUIRE(point.code == 0);
    // Both sets meet only at the midpoint; the answer is within eps of it.
    const auto x = io::vector_from(point.doc()["x"]);
    CHECK(abs(x[0] - Rational(1, 2)) <= Rational(1, 100));

    const Run strong = cli("kkm strong --cover " + one);
    REQUIRE(strong.code == 0);
    CHECK(strong.doc()["residual"].get<double>() <= 1e-3);
    CHECK(strong.doc()["pick_table"] == json::parse("[[1],[0]]"));
    CHECK(cli("kkm colorful --cover " + one).code == 1);  // one cover for d = 1
    CHECK(cli("kkm point --cover " + one + " --eps -1").code == 2);
}

TEST_CASE("cake and rent runs equal the library") {
    Scratch s;
    const json agents = json::parse(R"([{"kind":"scripted","density":[[0,1],[1,1]]},
        {"kind":"scripted","density":[[0,2],["1/2",2],["1/2",0],[1,0]]},
        {"kind":"scripted","density":[[0,0],["1/2",0],["1/2",2],[1,2]]}])");
    const auto file = s.write("agents.json", agents.dump());
    std::vector<division::AgentProfile> profiles;
    for (const auto& a : agents) profiles.push_back(io::profile_from(a));

    for (auto mode : {division::Mode::Cake, division::Mode::Rent}) {
        const auto trace = (s.dir / "trace.ndjson").string();
        const Run run = cli(division::to_string(mode) + " run --agents " + file + " --eps 1/100 --trace " + trace);
        REQUIRE(run.code == 0);
        const auto direct = division::envy_free_division(profiles, Rational(1, 100), mode);
        CHECK(io::vector_from(run.doc()["division"]) == direct.division);
        CHECK(run.doc()["assignment"].get<std::vector<int>>() == direct.assignment);
        CHECK(io::rational_from(run.doc()["envy"]) <= Rational(2, 100));
        std::ifstream in(trace);
        size_t lines = 0;
        for (std::string line; std::getline(in, line); ++lines) CHECK(json::parse(line)["seq"] == lines);
        CHECK(lines == direct.trace.size());
    }
    const Run secret = cli("cake run --secret --agents " + file + " --eps 1/100");
    REQUIRE(secret.code == 0);
    CHECK(secret.doc()["pick_table"].size() == 4);

    const auto human = s.write("human.json", R"([{"kind":"interactive"},{"kind":"interactive"}])");
    CHECK(cli("cake run --agents " + human).code == 1);
    CHECK(cli("rent run --agents " + file + " --eps 0").code == 1);
    CHECK(cli("rent run").code == 2);
}
