#ifndef DMNKIT_SIMPLIFY_HPP
#define DMNKIT_SIMPLIFY_HPP

#include <string>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace dmnkit {

struct RewiredEdge {
    std::string consumer;
    std::string old_ref;
    std::string new_ref;
};

struct SimplificationReport {
    std::vector<std::string> removed_node_ids;
    std::size_t nodes_before = 0;
    std::size_t nodes_after = 0;
    std::size_t edges_before = 0;
    std::size_t edges_after = 0;
    // Fraction of decision nodes that were identity before elimination, and
    // the same count over all nodes (both conventions are in circulation).
    double identity_fraction_before = 0.0;
    double identity_fraction_all_nodes = 0.0;
    std::vector<RewiredEdge> rewired_edges;
};

struct ChainEntry {
    std::string input_id;
    std::size_t shortest = 0;  // node count, 0 when the output is unreachable
    std::size_t longest = 0;
};

struct ChainProfile {
    std::vector<ChainEntry> chains;  // one per InputVariable, node-list order
    double mean_shortest = 0.0;      // over reachable inputs
    double mean_longest = 0.0;
    std::size_t min_chain = 0;
    std::size_t max_chain = 0;
    std::size_t ur_nodes = 0;  // names ending in " UR" after trimming
    std::size_t cr_nodes = 0;
};

// True iff a Decision node passes its single input through unchanged: one
// input_ref, at least one rule, every rule a single EqualsLiteral(v) -> v,
// literals pairwise distinct. Output and InputVariable nodes never qualify.
bool is_identity_node(const Node& n);

// Removes identity nodes to fixpoint, rewiring consumers to the upstream
// node; processing order is ascending node id. A node is left in place when
// rewiring would give some consumer a duplicate input_ref.
std::pair<DecisionGraph, SimplificationReport> eliminate_identity_nodes(const DecisionGraph& g);

// InputVariable ids whose name contains "vaste waarde" case-insensitively.
std::vector<std::string> detect_placeholder_inputs(const DecisionGraph& g);

ChainProfile chain_profile(const DecisionGraph& g);

}  // namespace dmnkit

#endif
