#pragma once

#include <string>

#include "sdv/diagram.hpp"

namespace sdv {

/// Graphviz text. Root has a doubled periphery, contradictory nodes are
/// filled boxes, embedding pairs are dashed edges labeled "⊆".
std::string export_dot(const StateDiagram& d);
std::string export_dot(const NeighborhoodTree& t);

/// Canonical dump, schema in docs/diagram.schema.json. Terms are written in
/// source syntax together with the sorts of their variables, so the dump
/// can be read back and re-validated.
std::string export_json(const StateDiagram& d);

/// Inverse of export_json; `p` resolves call sorts. Throws std::runtime_error
/// on malformed input.
StateDiagram import_json(const std::string& text, const Program& p);

}  // namespace sdv
