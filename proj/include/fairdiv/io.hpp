#pragma once

#include "fairdiv/division/division.hpp"
#include "fairdiv/kkm/cover.hpp"
#include "fairdiv/necklace/necklace.hpp"
#include "fairdiv/simplicial/complex.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

// JSON forms of the library types. Rationals are written as "p/q" strings and
// read from strings or JSON numbers. Malformed input throws Error("BadInput").
namespace fairdiv::io {

using nlohmann::json;

json rational_json(const Rational& value);
Rational rational_from(const json& value);
json vector_json(const RationalVector& values);
RationalVector vector_from(const json& value);

/// {"dim": d, "facets": [[ids...]...], "coords": {"id": [barycentric...]}}
json complex_json(const simplicial::PseudoComplex& complex);
simplicial::PseudoComplex complex_from(const json& value);

/// {"colors": {"id": target}}; an array indexed by vertex is accepted too.
simplicial::SpernerColoring coloring_from(const json& value, int num_vertices);

/// Plain symbol text ("GGGRRRGGG") or {"beads": [...]} with symbols or type ids.
necklace::Necklace necklace_from_text(const std::string& text);

/// {"cuts": ["p/q"...], "owners": [...], "strings": [...]}, strings optional.
json splitting_json(const necklace::Splitting& splitting);
necklace::Splitting splitting_from(const json& value);

/// free | cycle4 | binary (t from k) | explicit edge list [[a,b]...].
necklace::ConstraintGraph constraint_from(const std::string& name, int k, const json& edges = nullptr);

/**
 * {"d": d, "cells": [{"simplex": [[...]...], "members": {"j": [indices]}}], "dual": b}.
 * Cover j collects the members listed under key j; a plain array of members
 * stands for cover 0.
 */
std::vector<kkm::Cover> covers_from(const json& value);

/// {"kind": "scripted", "density": [[t, value]...]} or {"kind": "interactive"};
/// interactive agents get the given oracle.
division::AgentProfile profile_from(const json& value, division::Oracle oracle = {});
json profile_json(const division::AgentProfile& profile);

json query_json(const division::Query& query, size_t seq);

}  // namespace fairdiv::io
