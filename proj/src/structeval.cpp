#include "structeval.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <set>

#include "unary_test.hpp"

namespace dmnkit {

namespace {

// Node indices and adjacency, optionally symmetrized.
struct IndexedGraph {
    std::vector<NodeKind> kinds;
    std::vector<std::vector<int>> adj;
};

IndexedGraph index_graph(const DecisionGraph& g, bool directed) {
    IndexedGraph ig;
    std::map<std::string, int> idx;
    for (const Node& n : g.nodes) {
        idx[n.id] = int(ig.kinds.size());
        ig.kinds.push_back(n.kind);
        ig.adj.emplace_back();
    }
    std::set<std::pair<int, int>> seen;
    for (const Edge& e : g.edges) {
        auto f = idx.find(e.from);
        auto t = idx.find(e.to);
        if (f == idx.end() || t == idx.end() || f->second == t->second) continue;
        if (seen.insert({f->second, t->second}).second) ig.adj[f->second].push_back(t->second);
        if (!directed && seen.insert({t->second, f->second}).second)
            ig.adj[t->second].push_back(f->second);
    }
    return ig;
}

double dot(const KernelFeatures& a, const KernelFeatures& b) {
    double s = 0;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        if (it != b.end()) s += double(v) * double(it->second);
    }
    return s;
}

double dot(const GraphletCounts& a, const GraphletCounts& b) {
    double s = 0;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        if (it != b.end()) s += v * it->second;
    }
    return s;
}

template <class Feats>
double normalized_similarity(const Feats& f1, const Feats& f2) {
    if (f1.empty() && f2.empty()) return 1.0;
    if (f1.empty() || f2.empty()) return 0.0;
    return dot(f1, f2) / std::sqrt(dot(f1, f1) * dot(f2, f2));
}

// Undirected skeleton as adjacency bitsets over node indices.
std::vector<std::set<int>> skeleton(const DecisionGraph& g) {
    IndexedGraph ig = index_graph(g, false);
    std::vector<std::set<int>> adj(ig.adj.size());
    for (std::size_t u = 0; u < ig.adj.size(); ++u)
        for (int v : ig.adj[u]) adj[u].insert(v);
    return adj;
}

std::uint32_t subgraph_mask(const std::vector<int>& nodes, const std::vector<std::set<int>>& adj) {
    std::uint32_t mask = 0;
    int bit = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j, ++bit)
            if (adj[nodes[i]].count(nodes[j])) mask |= 1u << bit;
    return mask;
}

std::uint32_t permuted_mask(std::uint32_t mask, int k, const std::vector<int>& perm) {
    auto bit_index = [k](int i, int j) {
        // Upper-triangle enumeration order: (0,1), (0,2), ..., (k-2,k-1).
        if (i > j) std::swap(i, j);
        return i * (2 * k - i - 1) / 2 + (j - i - 1);
    };
    std::uint32_t out = 0;
    int bit = 0;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j, ++bit)
            if (mask & (1u << bit)) out |= 1u << bit_index(perm[i], perm[j]);
    return out;
}

std::uint32_t canonical_mask(std::uint32_t mask, int k) {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint32_t best = mask;
    while (std::next_permutation(perm.begin(), perm.end()))
        best = std::min(best, permuted_mask(mask, k, perm));
    return best;
}

bool subset_connected(const std::vector<int>& nodes, const std::vector<std::set<int>>& adj) {
    if (nodes.empty()) return false;
    std::set<int> in(nodes.begin(), nodes.end());
    std::set<int> seen;
    std::deque<int> q = {nodes[0]};
    seen.insert(nodes[0]);
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v : adj[u])
            if (in.count(v) && seen.insert(v).second) q.push_back(v);
    }
    return seen.size() == nodes.size();
}

// ESU enumeration: every connected induced k-subgraph exactly once.
void esu_extend(std::vector<int>& sub, const std::set<int>& extension, int root, int k,
                const std::vector<std::set<int>>& adj, GraphletCounts& out) {
    if (int(sub.size()) == k) {
        out[{k, canonical_mask(subgraph_mask(sub, adj), k)}] += 1.0;
        return;
    }
    std::set<int> ext = extension;
    while (!ext.empty()) {
        int w = *ext.begin();
        ext.erase(ext.begin());
        std::set<int> next_ext = ext;
        std::set<int> neighborhood;  // exclusive neighbors of w
        for (int u : adj[w]) {
            if (u <= root) continue;
            bool known = false;
            for (int s : sub)
                if (s == u || adj[s].count(u)) { known = true; break; }
            if (!known && u != w) neighborhood.insert(u);
        }
        for (int u : neighborhood) next_ext.insert(u);
        sub.push_back(w);
        esu_extend(sub, next_ext, root, k, adj, out);
        sub.pop_back();
    }
}

}  // namespace

KernelFeatures sp_features(const DecisionGraph& g, bool directed) {
    IndexedGraph ig = index_graph(g, directed);
    KernelFeatures out;
    const int n = int(ig.kinds.size());
    std::vector<int> dist(n);
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        std::deque<int> q = {s};
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int v : ig.adj[u])
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    q.push_back(v);
                }
        }
        for (int v = 0; v < n; ++v)
            if (v != s && dist[v] > 0) out[{ig.kinds[s], ig.kinds[v], dist[v]}]++;
    }
    return out;
}

double sp_similarity(const DecisionGraph& g1, const DecisionGraph& g2, bool directed) {
    return normalized_similarity(sp_features(g1, directed), sp_features(g2, directed));
}

GraphletCounts graphlet_counts(const DecisionGraph& g, const GraphletOptions& opt) {
    std::vector<std::set<int>> adj = skeleton(g);
    const int n = int(adj.size());
    GraphletCounts out;

    if (std::size_t(n) <= opt.exhaustive_node_limit) {
        for (int k : opt.sizes) {
            if (k > n) continue;
            for (int v = 0; v < n; ++v) {
                std::vector<int> sub = {v};
                std::set<int> ext;
                for (int u : adj[v])
                    if (u > v) ext.insert(u);
                esu_extend(sub, ext, v, k, adj, out);
            }
        }
        return out;
    }

    // Uniform k-subset rejection sampling; accepted draws estimate the
    // relative frequency of each class among connected subgraphs.
    std::mt19937_64 rng(opt.seed);
    for (int k : opt.sizes) {
        if (k > n) continue;
        for (std::size_t t = 0; t < opt.sample_budget; ++t) {
            std::set<int> pick;
            while (int(pick.size()) < k) pick.insert(int(rng() % std::uint64_t(n)));
            std::vector<int> sub(pick.begin(), pick.end());
            if (!subset_connected(sub, adj)) continue;
            out[{k, canonical_mask(subgraph_mask(sub, adj), k)}] += 1.0;
        }
    }
    return out;
}

double graphlet_similarity(const DecisionGraph& g1, const DecisionGraph& g2,
                           const GraphletOptions& opt) {
    return normalized_similarity(graphlet_counts(g1, opt), graphlet_counts(g2, opt));
}

std::vector<std::pair<std::string, double>> GraphStats::metrics() const {
    return {{"nodes", double(nodes)},
            {"edges", double(edges)},
            {"input_nodes", double(input_nodes)},
            {"total_rules", double(total_rules)},
            {"rules_per_decision_node", rules_per_decision_node},
            {"inputs_per_rule", inputs_per_rule},
            {"mean_in_degree", mean_in_degree},
            {"density", density},
            {"depth", double(depth)},
            {"depth_edges", double(depth_edges)},
            {"max_width", double(max_width)}};
}

GraphStats descriptive_stats(const DecisionGraph& g) {
    GraphStats s;
    s.nodes = g.nodes.size();
    s.edges = g.edges.size();

    std::size_t decision_like = 0;
    std::size_t conditions = 0;
    for (const Node& n : g.nodes) {
        if (n.kind == NodeKind::InputVariable) {
            s.input_nodes++;
            continue;
        }
        decision_like++;
        if (!n.table) continue;
        s.total_rules += n.table->rules.size();
        for (const Rule& r : n.table->rules)
            for (const UnaryTest& c : r.conditions)
                if (c.kind() != UnaryTest::Kind::Irrelevant) ++conditions;
    }
    if (decision_like) s.rules_per_decision_node = double(s.total_rules) / double(decision_like);
    if (s.total_rules) s.inputs_per_rule = double(conditions) / double(s.total_rules);
    if (s.nodes) s.mean_in_degree = double(s.edges) / double(s.nodes);
    if (s.nodes > 1) s.density = double(s.edges) / double(s.nodes * (s.nodes - 1));

    if (!g.nodes.empty()) {
        // Longest-path levels over the DAG; sources sit at level 0.
        std::map<std::string, std::size_t> level;
        for (const Node& n : g.nodes) level[n.id] = 0;
        std::map<std::string, std::vector<std::string>> adj;
        for (const Edge& e : g.edges) adj[e.from].push_back(e.to);
        for (const std::string& id : topological_order(g))
            for (const std::string& nxt : adj[id])
                level[nxt] = std::max(level[nxt], level[id] + 1);
        std::map<std::size_t, std::size_t> width;
        std::size_t deepest = 0;
        for (const auto& [id, lv] : level) {
            width[lv]++;
            deepest = std::max(deepest, lv);
        }
        s.depth_edges = deepest;
        s.depth = deepest + 1;
        for (const auto& [lv, w] : width) s.max_width = std::max(s.max_width, w);
    }
    return s;
}

std::map<ModelType, GroupSummary> aggregate_stats(const std::vector<const DecisionGraph*>& graphs) {
    std::map<ModelType, std::vector<GraphStats>> groups;
    for (const DecisionGraph* g : graphs) groups[g->model_type].push_back(descriptive_stats(*g));

    std::map<ModelType, GroupSummary> out;
    for (const auto& [type, stats] : groups) {
        GroupSummary sum;
        sum.count = stats.size();
        std::vector<std::pair<std::string, double>> names = stats[0].metrics();
        for (std::size_t m = 0; m < names.size(); ++m) {
            MetricSummary ms;
            ms.name = names[m].first;
            double total = 0;
            for (const GraphStats& st : stats) total += st.metrics()[m].second;
            ms.mean = total / double(stats.size());
            double var = 0;
            for (const GraphStats& st : stats) {
                double d = st.metrics()[m].second - ms.mean;
                var += d * d;
            }
            ms.stddev = std::sqrt(var / double(stats.size()));
            sum.metrics.push_back(std::move(ms));
        }
        out[type] = std::move(sum);
    }
    return out;
}

}  // namespace dmnkit
