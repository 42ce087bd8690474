#ifndef DMNKIT_COMPACT_JSON_HPP
#define DMNKIT_COMPACT_JSON_HPP

#include <string>
#include <string_view>

#include "graph.hpp"

namespace dmnkit {

// Compact JSON document, one model per document:
//   {
//     "id": "...", "model_type": "Outcome", "output_node": "z",
//     "nodes": [
//       {"id": "a", "name": "...", "kind": "input", "value_type": "boolean"},
//       {"id": "z", "name": "...", "kind": "output", "table": {
//          "hit_policy": "UNIQUE", "inputs": ["a"], "output_name": "...",
//          "rules": [{"when": ["true"], "then": "true"}]}}
//     ],
//     "edges": [["a", "z"]]
//   }
// Tests and rule outputs use the canonical text renderings, which keeps
// decimal literals exact. Output is byte-deterministic for a given graph.
std::string serialize_graph(const DecisionGraph& g);

// Throws SchemaError naming the offending field, e.g.
// "nodes[3].table.hit_policy". Does not run validate_graph; callers decide
// how to treat structurally invalid but well-shaped documents.
DecisionGraph deserialize_graph(std::string_view bytes);

}  // namespace dmnkit

#endif
