#include "graph.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace dmnkit {

const char* to_string(HitPolicy p) {
    switch (p) {
        case HitPolicy::Unique: return "UNIQUE";
        case HitPolicy::First: return "FIRST";
        case HitPolicy::Any: return "ANY";
        case HitPolicy::Collect: return "COLLECT";
    }
    return "?";
}

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::InputVariable: return "input";
        case NodeKind::Decision: return "decision";
        case NodeKind::Output: return "output";
    }
    return "?";
}

const char* to_string(ValueType t) {
    switch (t) {
        case ValueType::Boolean: return "boolean";
        case ValueType::String: return "string";
        case ValueType::Number: return "number";
    }
    return "?";
}

const char* to_string(ModelType t) {
    switch (t) {
        case ModelType::Outcome: return "Outcome";
        case ModelType::Requirements: return "Requirements";
    }
    return "?";
}

std::optional<HitPolicy> parse_hit_policy(std::string_view s) {
    if (s == "UNIQUE") return HitPolicy::Unique;
    if (s == "FIRST") return HitPolicy::First;
    if (s == "ANY") return HitPolicy::Any;
    if (s == "COLLECT") return HitPolicy::Collect;
    return std::nullopt;
}

std::optional<ValueType> parse_value_type(std::string_view s) {
    if (s == "boolean") return ValueType::Boolean;
    if (s == "string") return ValueType::String;
    if (s == "number") return ValueType::Number;
    return std::nullopt;
}

std::optional<ModelType> parse_model_type(std::string_view s) {
    if (s == "Outcome") return ModelType::Outcome;
    if (s == "Requirements") return ModelType::Requirements;
    return std::nullopt;
}

const Node* DecisionGraph::find_node(std::string_view node_id) const {
    for (const Node& n : nodes)
        if (n.id == node_id) return &n;
    return nullptr;
}

std::vector<const Node*> DecisionGraph::input_nodes() const {
    std::vector<const Node*> out;
    for (const Node& n : nodes)
        if (n.kind == NodeKind::InputVariable) out.push_back(&n);
    return out;
}

std::size_t DecisionGraph::node_index(std::string_view node_id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id == node_id) return i;
    return nodes.size();
}

const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::CycleDetected: return "CycleDetected";
        case ViolationKind::MissingOutputNode: return "MissingOutputNode";
        case ViolationKind::MultipleOutputNodes: return "MultipleOutputNodes";
        case ViolationKind::OutputNodeMismatch: return "OutputNodeMismatch";
        case ViolationKind::DuplicateNodeId: return "DuplicateNodeId";
        case ViolationKind::DanglingEdge: return "DanglingEdge";
        case ViolationKind::DanglingInputRef: return "DanglingInputRef";
        case ViolationKind::DuplicateInputRef: return "DuplicateInputRef";
        case ViolationKind::InputRefWithoutEdge: return "InputRefWithoutEdge";
        case ViolationKind::InputVariableHasIncoming: return "InputVariableHasIncoming";
        case ViolationKind::RuleArityMismatch: return "RuleArityMismatch";
        case ViolationKind::TableOnInputVariable: return "TableOnInputVariable";
        case ViolationKind::MissingTable: return "MissingTable";
        case ViolationKind::MissingValueType: return "MissingValueType";
    }
    return "?";
}

bool ValidationReport::has(ViolationKind k) const {
    for (const Violation& v : violations)
        if (v.kind == k) return true;
    return false;
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const Violation& v : violations)
        os << dmnkit::to_string(v.kind) << ": " << v.message << "\n";
    return os.str();
}

namespace {

// Cycle detection over the edge list alone; ignores nodes without edges and
// tolerates ids that failed other checks.
bool edges_have_cycle(const DecisionGraph& g) {
    std::map<std::string, std::vector<std::string>> adj;
    std::map<std::string, int> indeg;
    for (const Edge& e : g.edges) {
        adj[e.from].push_back(e.to);
        indeg[e.to]++;
        if (!indeg.count(e.from)) indeg[e.from];
        if (!adj.count(e.to)) adj[e.to];
    }
    std::queue<std::string> q;
    for (const auto& [id, d] : indeg)
        if (d == 0) q.push(id);
    std::size_t seen = 0;
    while (!q.empty()) {
        std::string id = q.front();
        q.pop();
        ++seen;
        for (const std::string& nxt : adj[id])
            if (--indeg[nxt] == 0) q.push(nxt);
    }
    return seen != indeg.size();
}

}  // namespace

ValidationReport validate_graph(const DecisionGraph& g) {
    ValidationReport rep;
    auto add = [&rep](ViolationKind k, std::string msg) {
        rep.violations.push_back({k, std::move(msg)});
    };

    std::set<std::string> ids;
    for (const Node& n : g.nodes) {
        if (!ids.insert(n.id).second)
            add(ViolationKind::DuplicateNodeId, "node id '" + n.id + "' appears more than once");
    }

    std::set<std::string> incoming;  // node ids with at least one inbound edge
    std::set<std::pair<std::string, std::string>> edge_set;
    for (const Edge& e : g.edges) {
        if (!ids.count(e.from))
            add(ViolationKind::DanglingEdge, "edge from unknown node '" + e.from + "'");
        if (!ids.count(e.to))
            add(ViolationKind::DanglingEdge, "edge to unknown node '" + e.to + "'");
        incoming.insert(e.to);
        edge_set.insert({e.from, e.to});
    }

    std::vector<const Node*> outputs;
    for (const Node& n : g.nodes) {
        if (n.kind == NodeKind::Output) outputs.push_back(&n);

        if (n.kind == NodeKind::InputVariable) {
            if (n.table)
                add(ViolationKind::TableOnInputVariable, "input node '" + n.id + "' carries a table");
            if (!n.value_type)
                add(ViolationKind::MissingValueType, "input node '" + n.id + "' has no value type");
            if (incoming.count(n.id))
                add(ViolationKind::InputVariableHasIncoming,
                    "input node '" + n.id + "' has an inbound edge");
            continue;
        }

        if (!n.table) {
            add(ViolationKind::MissingTable, "node '" + n.id + "' has no decision table");
            continue;
        }
        const DecisionTable& t = *n.table;
        std::set<std::string> ref_seen;
        for (const std::string& ref : t.input_refs) {
            if (!ids.count(ref)) {
                add(ViolationKind::DanglingInputRef,
                    "node '" + n.id + "' references unknown node '" + ref + "'");
            } else if (!edge_set.count({ref, n.id})) {
                add(ViolationKind::InputRefWithoutEdge,
                    "node '" + n.id + "' references '" + ref + "' without a matching edge");
            }
            if (!ref_seen.insert(ref).second)
                add(ViolationKind::DuplicateInputRef,
                    "node '" + n.id + "' references '" + ref + "' more than once");
        }
        for (std::size_t i = 0; i < t.rules.size(); ++i) {
            if (t.rules[i].conditions.size() != t.input_refs.size()) {
                std::ostringstream os;
                os << "node '" << n.id << "' rule " << i << " has " << t.rules[i].conditions.size()
                   << " conditions for " << t.input_refs.size() << " inputs";
                add(ViolationKind::RuleArityMismatch, os.str());
            }
        }
    }

    if (outputs.empty())
        add(ViolationKind::MissingOutputNode, "graph has no output node");
    else if (outputs.size() > 1)
        add(ViolationKind::MultipleOutputNodes, "graph has " + std::to_string(outputs.size()) + " output nodes");
    if (outputs.size() == 1 && g.output_node_id != outputs[0]->id)
        add(ViolationKind::OutputNodeMismatch,
            "declared output '" + g.output_node_id + "' but output node is '" + outputs[0]->id + "'");

    if (edges_have_cycle(g))
        add(ViolationKind::CycleDetected, "requirement edges contain a cycle");

    return rep;
}

std::vector<std::string> topological_order(const DecisionGraph& g) {
    std::map<std::string, std::vector<std::string>> adj;
    std::map<std::string, int> indeg;
    for (const Node& n : g.nodes) {
        indeg[n.id];
        adj[n.id];
    }
    for (const Edge& e : g.edges) {
        if (!indeg.count(e.from) || !indeg.count(e.to)) continue;
        adj[e.from].push_back(e.to);
        indeg[e.to]++;
    }

    // std::set as a min-heap keyed on id gives the deterministic tie-break.
    std::set<std::string> ready;
    for (const auto& [id, d] : indeg)
        if (d == 0) ready.insert(id);

    std::vector<std::string> order;
    order.reserve(g.nodes.size());
    while (!ready.empty()) {
        std::string id = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(id);
        for (const std::string& nxt : adj[id])
            if (--indeg[nxt] == 0) ready.insert(nxt);
    }
    if (order.size() != g.nodes.size())
        throw GraphCycleError("cycle detected in graph '" + g.id + "'");
    return order;
}

}  // namespace dmnkit
