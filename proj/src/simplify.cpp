#include "simplify.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "util.hpp"

namespace dmnkit {

bool is_identity_node(const Node& n) {
    if (n.kind != NodeKind::Decision || !n.table) return false;
    const DecisionTable& t = *n.table;
    if (t.input_refs.size() != 1 || t.rules.empty()) return false;
    std::vector<Value> seen;
    for (const Rule& r : t.rules) {
        if (r.conditions.size() != 1) return false;
        const UnaryTest& c = r.conditions[0];
        if (c.kind() != UnaryTest::Kind::EqualsLiteral) return false;
        if (!(c.literal() == r.output)) return false;
        for (const Value& v : seen)
            if (v == c.literal()) return false;
        seen.push_back(c.literal());
    }
    return true;
}

namespace {

std::size_t count_identity(const DecisionGraph& g) {
    std::size_t k = 0;
    for (const Node& n : g.nodes)
        if (is_identity_node(n)) ++k;
    return k;
}

std::size_t count_decisions(const DecisionGraph& g) {
    std::size_t k = 0;
    for (const Node& n : g.nodes)
        if (n.kind == NodeKind::Decision) ++k;
    return k;
}

// The smallest-id identity node whose removal keeps every consumer's
// input_refs duplicate-free, or nullptr.
const Node* next_removable(const DecisionGraph& g) {
    std::vector<const Node*> candidates;
    for (const Node& n : g.nodes)
        if (is_identity_node(n)) candidates.push_back(&n);
    std::sort(candidates.begin(), candidates.end(),
              [](const Node* a, const Node* b) { return a->id < b->id; });
    for (const Node* d : candidates) {
        const std::string& u = d->table->input_refs[0];
        bool blocked = false;
        for (const Node& c : g.nodes) {
            if (!c.table) continue;
            const auto& refs = c.table->input_refs;
            if (std::find(refs.begin(), refs.end(), d->id) != refs.end() &&
                std::find(refs.begin(), refs.end(), u) != refs.end()) {
                blocked = true;
                break;
            }
        }
        if (!blocked) return d;
    }
    return nullptr;
}

}  // namespace

std::pair<DecisionGraph, SimplificationReport> eliminate_identity_nodes(const DecisionGraph& g) {
    SimplificationReport rep;
    rep.nodes_before = g.nodes.size();
    rep.edges_before = g.edges.size();
    std::size_t identity = count_identity(g);
    std::size_t decisions = count_decisions(g);
    rep.identity_fraction_before = decisions ? double(identity) / double(decisions) : 0.0;
    rep.identity_fraction_all_nodes =
        g.nodes.empty() ? 0.0 : double(identity) / double(g.nodes.size());

    DecisionGraph out = g;
    while (const Node* d = next_removable(out)) {
        const std::string removed = d->id;
        const std::string upstream = d->table->input_refs[0];

        for (Node& c : out.nodes) {
            if (!c.table) continue;
            for (std::string& ref : c.table->input_refs) {
                if (ref == removed) {
                    rep.rewired_edges.push_back({c.id, removed, upstream});
                    ref = upstream;
                }
            }
        }

        std::set<std::pair<std::string, std::string>> edge_set;
        std::vector<Edge> edges;
        for (const Edge& e : out.edges) {
            Edge ne = e;
            if (ne.from == removed) ne.from = upstream;
            if (ne.to == removed) continue;  // the upstream feed disappears with d
            if (edge_set.insert({ne.from, ne.to}).second) edges.push_back(ne);
        }
        out.edges = std::move(edges);
        out.nodes.erase(std::remove_if(out.nodes.begin(), out.nodes.end(),
                                       [&](const Node& n) { return n.id == removed; }),
                        out.nodes.end());
        rep.removed_node_ids.push_back(removed);
    }

    rep.nodes_after = out.nodes.size();
    rep.edges_after = out.edges.size();
    return {std::move(out), std::move(rep)};
}

std::vector<std::string> detect_placeholder_inputs(const DecisionGraph& g) {
    std::vector<std::string> out;
    for (const Node& n : g.nodes)
        if (n.kind == NodeKind::InputVariable && contains_ci(n.name, "vaste waarde"))
            out.push_back(n.id);
    return out;
}

ChainProfile chain_profile(const DecisionGraph& g) {
    ChainProfile p;

    std::map<std::string, std::vector<std::string>> adj;
    for (const Edge& e : g.edges) adj[e.from].push_back(e.to);

    std::vector<std::string> order = topological_order(g);

    for (const Node* input : g.input_nodes()) {
        // Edge-count distances from this input; node count = edges + 1.
        std::map<std::string, std::size_t> shortest, longest;
        shortest[input->id] = 0;
        longest[input->id] = 0;
        for (const std::string& id : order) {
            auto it = shortest.find(id);
            if (it == shortest.end()) continue;
            for (const std::string& nxt : adj[id]) {
                auto s = shortest.find(nxt);
                if (s == shortest.end() || it->second + 1 < s->second)
                    shortest[nxt] = it->second + 1;
                auto l = longest.find(nxt);
                if (l == longest.end() || longest[id] + 1 > l->second)
                    longest[nxt] = longest[id] + 1;
            }
        }
        ChainEntry e;
        e.input_id = input->id;
        auto s = shortest.find(g.output_node_id);
        if (s != shortest.end()) {
            e.shortest = s->second + 1;
            e.longest = longest[g.output_node_id] + 1;
        }
        p.chains.push_back(std::move(e));
    }

    std::size_t reachable = 0;
    double sum_s = 0, sum_l = 0;
    for (const ChainEntry& e : p.chains) {
        if (e.shortest == 0) continue;
        ++reachable;
        sum_s += double(e.shortest);
        sum_l += double(e.longest);
        if (p.min_chain == 0 || e.shortest < p.min_chain) p.min_chain = e.shortest;
        p.max_chain = std::max(p.max_chain, e.longest);
    }
    if (reachable) {
        p.mean_shortest = sum_s / double(reachable);
        p.mean_longest = sum_l / double(reachable);
    }

    for (const Node& n : g.nodes) {
        std::string name = trim(n.name);
        if (name.size() >= 3 && name.compare(name.size() - 3, 3, " UR") == 0) ++p.ur_nodes;
        if (name.size() >= 3 && name.compare(name.size() - 3, 3, " CR") == 0) ++p.cr_nodes;
    }
    return p;
}

}  // namespace dmnkit
