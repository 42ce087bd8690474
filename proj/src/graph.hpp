#ifndef DMNKIT_GRAPH_HPP
#define DMNKIT_GRAPH_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unary_test.hpp"
#include "value.hpp"

namespace dmnkit {

enum class HitPolicy { Unique, First, Any, Collect };
enum class NodeKind { InputVariable, Decision, Output };
enum class ValueType { Boolean, String, Number };
enum class ModelType { Outcome, Requirements };

const char* to_string(HitPolicy p);
const char* to_string(NodeKind k);
const char* to_string(ValueType t);
const char* to_string(ModelType t);
std::optional<HitPolicy> parse_hit_policy(std::string_view s);
std::optional<ValueType> parse_value_type(std::string_view s);
std::optional<ModelType> parse_model_type(std::string_view s);

struct Rule {
    std::vector<UnaryTest> conditions;  // positionally aligned with the table's input_refs
    Value output;
};

struct DecisionTable {
    HitPolicy hit_policy = HitPolicy::Unique;
    std::vector<std::string> input_refs;  // node ids feeding this table, in column order
    std::string output_name;
    std::vector<Rule> rules;
};

struct Node {
    std::string id;
    std::string name;
    NodeKind kind = NodeKind::Decision;
    std::optional<ValueType> value_type;   // InputVariable only
    std::optional<DecisionTable> table;    // Decision / Output only
};

struct Edge {
    std::string from;
    std::string to;
    bool operator==(const Edge& o) const { return from == o.from && to == o.to; }
};

struct DecisionGraph {
    std::string id;
    ModelType model_type = ModelType::Outcome;
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::string output_node_id;

    const Node* find_node(std::string_view node_id) const;
    std::vector<const Node*> input_nodes() const;  // in node-list order
    std::size_t node_index(std::string_view node_id) const;  // nodes.size() if absent
};

enum class ViolationKind {
    CycleDetected,
    MissingOutputNode,
    MultipleOutputNodes,
    OutputNodeMismatch,
    DuplicateNodeId,
    DanglingEdge,
    DanglingInputRef,
    DuplicateInputRef,
    InputRefWithoutEdge,
    InputVariableHasIncoming,
    RuleArityMismatch,
    TableOnInputVariable,
    MissingTable,
    MissingValueType,
};

const char* to_string(ViolationKind k);

struct Violation {
    ViolationKind kind;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    bool has(ViolationKind k) const;
    std::string to_string() const;
};

// Reports all structural problems; never throws. An empty report means the
// graph satisfies every representation invariant.
ValidationReport validate_graph(const DecisionGraph& g);

// Kahn's algorithm with ties broken by ascending node id, so the order is
// reproducible. Throws GraphCycleError on cyclic graphs.
std::vector<std::string> topological_order(const DecisionGraph& g);

}  // namespace dmnkit

#endif
