#ifndef DMNKIT_STRUCTEVAL_HPP
#define DMNKIT_STRUCTEVAL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "graph.hpp"

namespace dmnkit {

// (source kind, target kind, shortest directed distance >= 1) -> pair count.
struct SpKey {
    NodeKind from;
    NodeKind to;
    int distance;
    auto operator<=>(const SpKey&) const = default;
};
using KernelFeatures = std::map<SpKey, long long>;

KernelFeatures sp_features(const DecisionGraph& g, bool directed = true);

// Normalized dot product of shortest-path features. Two empty feature maps
// compare as 1.0; exactly one empty compares as 0.0.
double sp_similarity(const DecisionGraph& g1, const DecisionGraph& g2, bool directed = true);

// Graphlet class: (size, canonical adjacency bitmask of the undirected
// induced subgraph). Canonical = minimum over all vertex permutations.
struct GraphletKey {
    int size;
    std::uint32_t mask;
    auto operator<=>(const GraphletKey&) const = default;
};
using GraphletCounts = std::map<GraphletKey, double>;

struct GraphletOptions {
    std::vector<int> sizes = {3, 4, 5};
    std::size_t exhaustive_node_limit = 30;
    std::size_t sample_budget = 20000;  // uniform subset draws per size
    std::uint64_t seed = 1;
};

// Connected induced subgraph counts on the undirected skeleton; exhaustive
// up to exhaustive_node_limit nodes, seeded uniform rejection sampling above.
GraphletCounts graphlet_counts(const DecisionGraph& g, const GraphletOptions& opt = {});

double graphlet_similarity(const DecisionGraph& g1, const DecisionGraph& g2,
                           const GraphletOptions& opt = {});

struct GraphStats {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t input_nodes = 0;
    std::size_t total_rules = 0;
    double rules_per_decision_node = 0.0;  // denominator: Decision + Output nodes
    double inputs_per_rule = 0.0;          // mean non-wildcard conditions per rule
    double mean_in_degree = 0.0;
    double density = 0.0;         // edges / (n * (n - 1))
    std::size_t depth = 0;        // longest directed path, node count
    std::size_t depth_edges = 0;  // same path, edge count
    std::size_t max_width = 0;    // widest longest-distance-from-source level

    std::vector<std::pair<std::string, double>> metrics() const;
};

GraphStats descriptive_stats(const DecisionGraph& g);

struct MetricSummary {
    std::string name;
    double mean = 0.0;
    double stddev = 0.0;  // population
};

struct GroupSummary {
    std::size_t count = 0;
    std::vector<MetricSummary> metrics;
};

std::map<ModelType, GroupSummary> aggregate_stats(const std::vector<const DecisionGraph*>& graphs);

}  // namespace dmnkit

#endif
