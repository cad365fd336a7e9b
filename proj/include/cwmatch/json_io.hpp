#pragma once

#include <string>

#include <json.hpp>

#include "cwmatch/csp.hpp"
#include "cwmatch/gadgets.hpp"
#include "cwmatch/graph.hpp"

namespace cwmatch {

using Json = nlohmann::ordered_json;

/// { "n": int, "edges": [[u,v],...], "weights": {"id": w}?, "names": {"id": str}? }
Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& j);

/// { "edges": [[u,v],...] }
Json matching_to_json(const Matching& m);
Matching matching_from_json(const Json& j);

/// { "B": 3|5, "vars": [{"id":..,"class":..}], "bags": [[ids]..],
///   "constraints": [{"vars":[..],"allowed":[[..]..],"bag":..}] }
CspInstance csp_from_json(const Json& j);
Json csp_to_json(const CspInstance& c);

/// { "graph": .., "ell": .., "kind": .., "ordering": [ids]? }
Json gadget_to_json(const GadgetInstance& inst);

Json parse_json_text(const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace cwmatch
