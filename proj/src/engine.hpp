#ifndef DMNKIT_ENGINE_HPP
#define DMNKIT_ENGINE_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "graph.hpp"
#include "value.hpp"

namespace dmnkit {

// Full input assignment: InputVariable node id -> value. Permissive mode
// reads absent ids as Null; strict mode throws MissingAssignmentError.
using Assignment = std::map<std::string, Value>;

enum class ExecMode { Strict, Permissive };

enum class ExecErrorKind { HitPolicyViolation };

struct ExecError {
    std::string node_id;
    ExecErrorKind kind;
};

struct TableResult {
    Value value;
    bool hit_policy_violation = false;
};

struct ExecutionResult {
    Value output_value;
    std::map<std::string, Value> node_values;
    std::vector<ExecError> errors;
};

// `inputs` is positionally aligned with table.input_refs. A rule matches iff
// every condition holds. Zero matches yield Null (COLLECT: empty list); a
// UNIQUE multi-match or ANY conflict yields Null with the violation flag set.
TableResult evaluate_table(const DecisionTable& table, std::span<const Value> inputs);

ExecutionResult execute(const DecisionGraph& g, const Assignment& a,
                        ExecMode mode = ExecMode::Permissive);

std::vector<ExecutionResult> batch_execute(const DecisionGraph& g,
                                           const std::vector<Assignment>& cases,
                                           ExecMode mode = ExecMode::Permissive);

}  // namespace dmnkit

#endif
