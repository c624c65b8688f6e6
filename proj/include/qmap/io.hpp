#pragma once

#include <string>

#include "qmap/chapuy.hpp"
#include "qmap/cms.hpp"
#include "qmap/scheme.hpp"

namespace qmap {

// One JSON object per call, tagged with "type". Parsers throw BadInput.
std::string to_json(const WellLabeledGTree& t);
WellLabeledGTree wl_gtree_from_json(const std::string& text);

std::string to_json(const Decomposition& d);
Decomposition decomposition_from_json(const std::string& text);

std::string to_json(const TreeWithTriples& w);
TreeWithTriples triples_from_json(const std::string& text);

// Reads the "type" tag of a JSON object.
std::string json_type(const std::string& text);

// Columns t, C, L.
std::string to_csv(const ContourPair& cp);

}  // namespace qmap
