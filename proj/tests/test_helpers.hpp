#ifndef DMNKIT_TEST_HELPERS_HPP
#define DMNKIT_TEST_HELPERS_HPP

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "../src/graph.hpp"
#include "../src/unary_test.hpp"
#include "../src/value.hpp"

namespace dmnkit::testing {

inline Node mk_input(std::string id, ValueType vt) {
    Node n;
    n.id = id;
    n.name = id;
    n.kind = NodeKind::InputVariable;
    n.value_type = vt;
    return n;
}

inline Node mk_table_node(std::string id, NodeKind kind, HitPolicy hp,
                          std::vector<std::string> refs, std::vector<Rule> rules) {
    Node n;
    n.id = id;
    n.name = id;
    n.kind = kind;
    DecisionTable t;
    t.hit_policy = hp;
    t.input_refs = std::move(refs);
    t.output_name = id;
    t.rules = std::move(rules);
    n.table = std::move(t);
    return n;
}

inline Rule mk_rule(std::vector<std::string> tests, std::string output_literal) {
    Rule r;
    for (const auto& t : tests) r.conditions.push_back(parse_unary_test(t));
    r.output = parse_literal(output_literal);
    return r;
}

inline void add_table_edges(DecisionGraph& g) {
    for (const Node& n : g.nodes)
        if (n.table)
            for (const std::string& ref : n.table->input_refs) g.edges.push_back({ref, n.id});
}

inline std::vector<Rule> boolean_identity_rules() {
    return {mk_rule({"true"}, "true"), mk_rule({"false"}, "false")};
}

// input -> pass-through decision -> output echo, all boolean.
inline DecisionGraph identity_chain() {
    DecisionGraph g;
    g.id = "chain";
    g.nodes.push_back(mk_input("a", ValueType::Boolean));
    g.nodes.push_back(
        mk_table_node("b", NodeKind::Decision, HitPolicy::Unique, {"a"}, boolean_identity_rules()));
    g.nodes.push_back(
        mk_table_node("c", NodeKind::Output, HitPolicy::Unique, {"b"}, boolean_identity_rules()));
    g.output_node_id = "c";
    add_table_edges(g);
    return g;
}

// Wind-turbine noise reporting duty: duty holds only for the one conforming
// input combination; any deviation short-circuits to false.
inline DecisionGraph wind_turbine_model() {
    DecisionGraph g;
    g.id = "wind";
    for (const char* id : {"i_elek", "i_noordzee", "i_rotor", "i_windpark"})
        g.nodes.push_back(mk_input(id, ValueType::Boolean));
    auto passthrough = [](std::string id, std::string ref) {
        return mk_table_node(id, NodeKind::Decision, HitPolicy::Unique, {std::move(ref)},
                             boolean_identity_rules());
    };
    g.nodes.push_back(passthrough("d_elek", "i_elek"));
    g.nodes.push_back(passthrough("d_noordzee", "i_noordzee"));
    g.nodes.push_back(passthrough("d_rotor", "i_rotor"));
    g.nodes.push_back(passthrough("d_windpark", "i_windpark"));
    g.nodes.push_back(mk_table_node(
        "d_duty", NodeKind::Decision, HitPolicy::First,
        {"d_elek", "d_rotor", "d_windpark", "d_noordzee"},
        {mk_rule({"true", "true", "false", "false"}, "true"), mk_rule({"-", "-", "-", "-"}, "false")}));
    g.nodes.push_back(mk_table_node("out", NodeKind::Output, HitPolicy::Unique, {"d_duty"},
                                    boolean_identity_rules()));
    g.output_node_id = "out";
    add_table_edges(g);
    return g;
}

// Random boolean DAG whose decision nodes are never identity by shape:
// single-ref nodes negate, double-ref nodes enumerate all four combinations.
inline DecisionGraph synthetic_boolean_model(std::mt19937& rng, int n_inputs, int n_decisions) {
    DecisionGraph g;
    g.id = "synth";
    std::vector<std::string> pool;
    for (int i = 0; i < n_inputs; ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "i%02d", i);
        g.nodes.push_back(mk_input(id, ValueType::Boolean));
        pool.push_back(id);
    }
    for (int d = 0; d < n_decisions; ++d) {
        char id[16];
        std::snprintf(id, sizeof id, "m%02d", d);
        bool last = d == n_decisions - 1;
        NodeKind kind = last ? NodeKind::Output : NodeKind::Decision;
        if (rng() % 2 == 0 || pool.size() < 2) {
            std::string ref = pool[rng() % pool.size()];
            g.nodes.push_back(mk_table_node(id, kind, HitPolicy::Unique, {ref},
                                            {mk_rule({"true"}, "false"), mk_rule({"false"}, "true")}));
        } else {
            std::size_t a = rng() % pool.size();
            std::size_t b = rng() % (pool.size() - 1);
            if (b >= a) ++b;
            std::vector<Rule> rules;
            for (int mask = 0; mask < 4; ++mask)
                rules.push_back(mk_rule({mask & 1 ? "true" : "false", mask & 2 ? "true" : "false"},
                                        rng() % 2 ? "true" : "false"));
            g.nodes.push_back(
                mk_table_node(id, kind, HitPolicy::Unique, {pool[a], pool[b]}, std::move(rules)));
        }
        pool.push_back(id);
        if (last) g.output_node_id = id;
    }
    add_table_edges(g);
    return g;
}

// Splices `count` boolean identity nodes into random edges; returns their ids.
inline std::vector<std::string> inject_identity_nodes(DecisionGraph& g, std::mt19937& rng,
                                                      int count) {
    std::vector<std::string> injected;
    for (int k = 0; k < count && !g.edges.empty(); ++k) {
        std::size_t ei = rng() % g.edges.size();
        std::string u = g.edges[ei].from;
        std::string v = g.edges[ei].to;
        char id[16];
        std::snprintf(id, sizeof id, "z_id%02d", k);
        g.nodes.push_back(
            mk_table_node(id, NodeKind::Decision, HitPolicy::Unique, {u}, boolean_identity_rules()));
        g.edges[ei] = {u, id};
        g.edges.push_back({id, v});
        for (Node& n : g.nodes)
            if (n.id == v && n.table)
                for (std::string& ref : n.table->input_refs)
                    if (ref == u) ref = id;
        injected.push_back(id);
    }
    return injected;
}

}  // namespace dmnkit::testing

#endif
