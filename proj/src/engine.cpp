#include "engine.hpp"

#include <cassert>

#include "errors.hpp"
#include "unary_test.hpp"

namespace dmnkit {

namespace {

bool rule_matches(const Rule& r, std::span<const Value> inputs) {
    for (std::size_t i = 0; i < r.conditions.size(); ++i)
        if (!eval_unary_test(r.conditions[i], inputs[i])) return false;
    return true;
}

}  // namespace

TableResult evaluate_table(const DecisionTable& table, std::span<const Value> inputs) {
    std::vector<const Rule*> matches;
    for (const Rule& r : table.rules) {
        if (r.conditions.size() != inputs.size()) continue;  // malformed rule never matches
        if (rule_matches(r, inputs)) matches.push_back(&r);
    }

    switch (table.hit_policy) {
        case HitPolicy::Unique:
            if (matches.empty()) return {Value::null(), false};
            if (matches.size() > 1) return {Value::null(), true};
            return {matches[0]->output, false};
        case HitPolicy::First:
            if (matches.empty()) return {Value::null(), false};
            return {matches[0]->output, false};
        case HitPolicy::Any: {
            if (matches.empty()) return {Value::null(), false};
            for (const Rule* m : matches)
                if (!(m->output == matches[0]->output)) return {Value::null(), true};
            return {matches[0]->output, false};
        }
        case HitPolicy::Collect: {
            std::vector<Value> out;
            out.reserve(matches.size());
            for (const Rule* m : matches) out.push_back(m->output);
            return {Value::list(std::move(out)), false};
        }
    }
    return {Value::null(), false};
}

ExecutionResult execute(const DecisionGraph& g, const Assignment& a, ExecMode mode) {
    ExecutionResult res;
    std::vector<std::string> order = topological_order(g);

    for (const std::string& id : order) {
        const Node* n = g.find_node(id);
        assert(n);
        if (n->kind == NodeKind::InputVariable) {
            auto it = a.find(id);
            if (it == a.end()) {
                if (mode == ExecMode::Strict) throw MissingAssignmentError(id);
                res.node_values[id] = Value::null();
            } else {
                res.node_values[id] = it->second;
            }
            continue;
        }
        if (!n->table) {
            res.node_values[id] = Value::null();
            continue;
        }
        std::vector<Value> inputs;
        inputs.reserve(n->table->input_refs.size());
        for (const std::string& ref : n->table->input_refs) {
            auto it = res.node_values.find(ref);
            inputs.push_back(it == res.node_values.end() ? Value::null() : it->second);
        }
        TableResult tr = evaluate_table(*n->table, inputs);
        if (tr.hit_policy_violation) {
            res.errors.push_back({id, ExecErrorKind::HitPolicyViolation});
            res.node_values[id] = Value::null();
        } else {
            res.node_values[id] = std::move(tr.value);
        }
    }

    auto it = res.node_values.find(g.output_node_id);
    res.output_value = it == res.node_values.end() ? Value::null() : it->second;
    return res;
}

std::vector<ExecutionResult> batch_execute(const DecisionGraph& g,
                                           const std::vector<Assignment>& cases,
                                           ExecMode mode) {
    std::vector<ExecutionResult> out;
    out.reserve(cases.size());
    for (const Assignment& a : cases) out.push_back(execute(g, a, mode));
    return out;
}

}  // namespace dmnkit
