#include "fairdiv/io.hpp"

#include "fairdiv/error.hpp"

#include <algorithm>
#include <map>

namespace fairdiv::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error("BadInput", what); }

const json& field(const json& value, const char* key) {
    if (!value.is_object() || !value.contains(key)) bad(std::string("missing field '") + key + "'");
    return value.at(key);
}

int int_from(const json& value) {
    if (value.is_number_integer()) return value.get<int>();
    if (value.is_string()) {
        try {
            size_t used = 0;
            const int out = std::stoi(value.get<std::string>(), &used);
            if (used == value.get<std::string>().size()) return out;
        } catch (const std::exception&) {
        }
    }
    bad("expected an integer, got " + value.dump());
}

}  // namespace

json rational_json(const Rational& value) { return fairdiv::to_string(value); }

Rational rational_from(const json& value) {
    if (value.is_number_integer()) return Rational(value.get<long>());
    if (value.is_number_float()) return parse_rational(value.dump());
    if (value.is_string()) {
        try {
            return parse_rational(value.get<std::string>());
        } catch (const Error&) {
            bad("not a rational: " + value.dump());
        }
    }
    bad("expected a rational, got " + value.dump());
}

json vector_json(const RationalVector& values) {
    json out = json::array();
    for (const auto& v : values) out.push_back(rational_json(v));
    return out;
}

RationalVector vector_from(const json& value) {
    if (!value.is_array()) bad("expected an array of rationals");
    RationalVector out;
    for (const auto& v : value) out.push_back(rational_from(v));
    return out;
}

json complex_json(const simplicial::PseudoComplex& complex) {
    json out{{"dim", complex.dim()}, {"facets", complex.facets()}};
    if (complex.has_coords()) {
        json coords = json::object();
        for (int v = 0; v < complex.num_vertices(); ++v) coords[std::to_string(v)] = vector_json(complex.coord(v));
        out["coords"] = coords;
    }
    return out;
}

simplicial::PseudoComplex complex_from(const json& value) {
    const int dim = int_from(field(value, "dim"));
    std::vector<simplicial::Face> facets;
    for (const auto& f : field(value, "facets")) {
        if (!f.is_array()) bad("facets must be arrays of vertex ids");
        simplicial::Face face;
        for (const auto& v : f) face.push_back(int_from(v));
        facets.push_back(std::move(face));
    }
    std::optional<std::vector<RationalVector>> coords;
    if (value.contains("coords")) {
        const json& c = value.at("coords");
        std::map<int, RationalVector> by_id;
        if (c.is_object())
            for (const auto& [key, vec] : c.items()) by_id[int_from(json(key))] = vector_from(vec);
        else if (c.is_array())
            for (size_t i = 0; i < c.size(); ++i) by_id[static_cast<int>(i)] = vector_from(c[i]);
        else
            bad("coords must be an object or an array");
        coords.emplace();
        for (const auto& [id, vec] : by_id) {
            if (id != static_cast<int>(coords->size())) bad("coords must cover ids 0..n-1");
            coords->push_back(vec);
        }
    }
    return simplicial::PseudoComplex(dim, std::move(facets), std::move(coords));
}

simplicial::SpernerColoring coloring_from(const json& value, int num_vertices) {
    const json& colors = value.is_object() && value.contains("colors") ? value.at("colors") : value;
    simplicial::SpernerColoring out;
    out.colors.assign(static_cast<size_t>(num_vertices), -1);
    auto set = [&](int v, const json& c) {
        if (v < 0 || v >= num_vertices) bad("colored vertex " + std::to_string(v) + " is not in the complex");
        out.colors[static_cast<size_t>(v)] = int_from(c);
    };
    if (colors.is_object())
        for (const auto& [key, c] : colors.items()) set(int_from(json(key)), c);
    else if (colors.is_array())
        for (size_t i = 0; i < colors.size(); ++i) set(static_cast<int>(i), colors[i]);
    else
        bad("colors must be an object or an array");
    for (int v = 0; v < num_vertices; ++v)
        if (out.colors[static_cast<size_t>(v)] < 0) bad("vertex " + std::to_string(v) + " has no color");
    return out;
}

necklace::Necklace necklace_from_text(const std::string& text) {
    const auto start = text.find_first_not_of(" \t\r\n");
    if (start == std::string::npos) bad("empty necklace");
    if (text[start] != '{') return necklace::parse_necklace(text);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        bad(std::string("necklace JSON: ") + e.what());
    }
    const json& beads = field(doc, "beads");
    if (!beads.is_array() || beads.empty()) bad("beads must be a nonempty array");
    if (beads.front().is_string()) {
        std::string joined;
        for (const auto& b : beads) {
            if (!b.is_string() || b.get<std::string>().size() != 1) bad("bead symbols must be single characters");
            joined += b.get<std::string>();
        }
        return necklace::parse_necklace(joined);
    }
    std::vector<int> ids;
    for (const auto& b : beads) ids.push_back(int_from(b));
    return necklace::make_necklace(std::move(ids));
}

json splitting_json(const necklace::Splitting& splitting) {
    json cuts = json::array();
    for (const auto& c : splitting.cuts) cuts.push_back(rational_json(c));
    json out{{"cuts", cuts}, {"owners", splitting.owners}};
    if (!splitting.strings.empty()) out["strings"] = splitting.strings;
    return out;
}

necklace::Splitting splitting_from(const json& value) {
    necklace::Splitting out;
    for (const auto& c : field(value, "cuts")) out.cuts.push_back(rational_from(c));
    for (const auto& o : field(value, "owners")) out.owners.push_back(int_from(o));
    if (value.contains("strings"))
        for (const auto& s : value.at("strings")) {
            if (!s.is_string()) bad("strings must be bit strings");
            out.strings.push_back(s.get<std::string>());
        }
    return out;
}

necklace::ConstraintGraph constraint_from(const std::string& name, int k, const json& edges) {
    if (name == "free") return necklace::ConstraintGraph::free();
    if (name == "cycle4") return necklace::ConstraintGraph::cycle4();
    if (name == "binary") return necklace::ConstraintGraph::binary(necklace::hypercube_dim(k));
    if (name == "explicit") {
        if (!edges.is_array()) bad("explicit constraint needs an edge list");
        std::set<std::pair<int, int>> out;
        for (const auto& e : edges) {
            if (!e.is_array() || e.size() != 2) bad("edges are pairs of thieves");
            out.insert({int_from(e[0]), int_from(e[1])});
        }
        return necklace::ConstraintGraph::explicit_edges(std::move(out));
    }
    bad("unknown constraint '" + name + "'");
}

std::vector<kkm::Cover> covers_from(const json& value) {
    const int d = int_from(field(value, "d"));
    const bool dual = value.value("dual", false);
    std::map<int, std::vector<kkm::Cell>> by_cover;
    const json& cells = field(value, "cells");
    for (const auto& c : cells) {
        std::vector<RationalVector> vertices;
        for (const auto& v : field(c, "simplex")) vertices.push_back(vector_from(v));
        const json& members = field(c, "members");
        auto add = [&](int j, const json& list) {
            kkm::Cell cell{vertices, {}};
            for (const auto& i : list) cell.members.push_back(int_from(i));
            by_cover[j].push_back(std::move(cell));
        };
        if (members.is_array())
            add(0, members);
        else if (members.is_object())
            for (const auto& [key, list] : members.items()) add(int_from(json(key)), list);
        else
            bad("members must be an array or an object");
    }
    std::vector<kkm::Cover> out;
    for (auto& [j, list] : by_cover) {
        if (j != static_cast<int>(out.size())) bad("covers must be numbered 0..n-1");
        if (list.size() != cells.size()) bad("cover " + std::to_string(j) + " is missing cells");
        out.push_back(kkm::Cover::from_cells(d, std::move(list), dual));
    }
    if (out.empty()) bad("no cells");
    return out;
}

division::AgentProfile profile_from(const json& value, division::Oracle oracle) {
    const json& kind = field(value, "kind");
    if (kind == "interactive") return division::AgentProfile::interactive(std::move(oracle));
    if (kind != "scripted") bad("agent kind must be scripted or interactive");
    std::vector<std::pair<Rational, Rational>> points;
    for (const auto& p : field(value, "density")) {
        if (!p.is_array() || p.size() != 2) bad("density points are [breakpoint, value] pairs");
        points.emplace_back(rational_from(p[0]), rational_from(p[1]));
    }
    try {
        return division::AgentProfile::scripted(division::Density(std::move(points)));
    } catch (const Error& e) {
        bad(e.what());
    }
}

json profile_json(const division::AgentProfile& profile) {
    if (!profile.is_scripted()) return json{{"kind", "interactive"}};
    json pts = json::array();
    for (const auto& [t, v] : profile.density->points()) pts.push_back({rational_json(t), rational_json(v)});
    return json{{"kind", "scripted"}, {"density", pts}};
}

json query_json(const division::Query& query, size_t seq) {
    return json{{"seq", seq}, {"agent", query.agent}, {"division", vector_json(query.division)}, {"preferred", query.preferred}};
}

}  // namespace fairdiv::io
