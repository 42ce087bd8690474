#include "compact_json.hpp"

#include <json.hpp>

#include "errors.hpp"
#include "unary_test.hpp"

namespace dmnkit {

namespace {

using ojson = nlohmann::ordered_json;
using njson = nlohmann::json;

std::string elem(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

const njson& require(const njson& obj, const std::string& path, const char* key,
                     njson::value_t type) {
    auto it = obj.find(key);
    std::string field = path.empty() ? std::string(key) : path + "." + key;
    if (it == obj.end()) throw SchemaError(field, "missing required field");
    if (it->type() != type) {
        const char* want = type == njson::value_t::string   ? "string"
                           : type == njson::value_t::array  ? "array"
                           : type == njson::value_t::object ? "object"
                                                            : "value";
        throw SchemaError(field, std::string("expected ") + want);
    }
    return *it;
}

DecisionTable parse_table(const njson& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected object");
    DecisionTable t;

    const njson& hp = require(j, path, "hit_policy", njson::value_t::string);
    auto policy = parse_hit_policy(hp.get<std::string>());
    if (!policy)
        throw SchemaError(path + ".hit_policy", "unknown hit policy '" + hp.get<std::string>() + "'");
    t.hit_policy = *policy;

    const njson& inputs = require(j, path, "inputs", njson::value_t::array);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (!inputs[i].is_string())
            throw SchemaError(elem(path + ".inputs", i), "expected string");
        t.input_refs.push_back(inputs[i].get<std::string>());
    }

    t.output_name = require(j, path, "output_name", njson::value_t::string).get<std::string>();

    const njson& rules = require(j, path, "rules", njson::value_t::array);
    for (std::size_t r = 0; r < rules.size(); ++r) {
        std::string rpath = elem(path + ".rules", r);
        if (!rules[r].is_object()) throw SchemaError(rpath, "expected object");
        Rule rule;
        const njson& when = require(rules[r], rpath, "when", njson::value_t::array);
        for (std::size_t c = 0; c < when.size(); ++c) {
            std::string cpath = elem(rpath + ".when", c);
            if (!when[c].is_string()) throw SchemaError(cpath, "expected string");
            try {
                rule.conditions.push_back(parse_unary_test(when[c].get<std::string>()));
            } catch (const ParseError& e) {
                throw SchemaError(cpath, std::string("bad test: ") + e.what());
            }
        }
        const njson& then = require(rules[r], rpath, "then", njson::value_t::string);
        try {
            rule.output = parse_literal(then.get<std::string>());
        } catch (const ParseError& e) {
            throw SchemaError(rpath + ".then", std::string("bad literal: ") + e.what());
        }
        t.rules.push_back(std::move(rule));
    }
    return t;
}

}  // namespace

std::string serialize_graph(const DecisionGraph& g) {
    ojson doc;
    doc["id"] = g.id;
    doc["model_type"] = to_string(g.model_type);
    doc["output_node"] = g.output_node_id;

    ojson nodes = ojson::array();
    for (const Node& n : g.nodes) {
        ojson jn;
        jn["id"] = n.id;
        jn["name"] = n.name;
        jn["kind"] = to_string(n.kind);
        if (n.kind == NodeKind::InputVariable && n.value_type)
            jn["value_type"] = to_string(*n.value_type);
        if (n.table) {
            ojson jt;
            jt["hit_policy"] = to_string(n.table->hit_policy);
            jt["inputs"] = n.table->input_refs;
            jt["output_name"] = n.table->output_name;
            ojson rules = ojson::array();
            for (const Rule& r : n.table->rules) {
                ojson jr;
                ojson when = ojson::array();
                for (const UnaryTest& c : r.conditions) when.push_back(render_unary_test(c));
                jr["when"] = std::move(when);
                jr["then"] = r.output.repr();
                rules.push_back(std::move(jr));
            }
            jt["rules"] = std::move(rules);
            jn["table"] = std::move(jt);
        }
        nodes.push_back(std::move(jn));
    }
    doc["nodes"] = std::move(nodes);

    ojson edges = ojson::array();
    for (const Edge& e : g.edges) edges.push_back(ojson::array({e.from, e.to}));
    doc["edges"] = std::move(edges);

    return doc.dump(2) + "\n";
}

DecisionGraph deserialize_graph(std::string_view bytes) {
    njson doc;
    try {
        doc = njson::parse(bytes);
    } catch (const njson::parse_error& e) {
        throw SchemaError("$", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("$", "document must be an object");

    DecisionGraph g;
    g.id = require(doc, "", "id", njson::value_t::string).get<std::string>();

    const njson& mt = require(doc, "", "model_type", njson::value_t::string);
    auto type = parse_model_type(mt.get<std::string>());
    if (!type)
        throw SchemaError("model_type", "unknown model type '" + mt.get<std::string>() + "'");
    g.model_type = *type;

    g.output_node_id = require(doc, "", "output_node", njson::value_t::string).get<std::string>();

    const njson& nodes = require(doc, "", "nodes", njson::value_t::array);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::string npath = elem("nodes", i);
        if (!nodes[i].is_object()) throw SchemaError(npath, "expected object");
        Node n;
        n.id = require(nodes[i], npath, "id", njson::value_t::string).get<std::string>();
        n.name = require(nodes[i], npath, "name", njson::value_t::string).get<std::string>();
        const njson& kind = require(nodes[i], npath, "kind", njson::value_t::string);
        std::string k = kind.get<std::string>();
        if (k == "input")
            n.kind = NodeKind::InputVariable;
        else if (k == "decision")
            n.kind = NodeKind::Decision;
        else if (k == "output")
            n.kind = NodeKind::Output;
        else
            throw SchemaError(npath + ".kind", "unknown node kind '" + k + "'");

        if (n.kind == NodeKind::InputVariable) {
            const njson& vt = require(nodes[i], npath, "value_type", njson::value_t::string);
            auto parsed = parse_value_type(vt.get<std::string>());
            if (!parsed)
                throw SchemaError(npath + ".value_type",
                                  "unknown value type '" + vt.get<std::string>() + "'");
            n.value_type = *parsed;
            if (nodes[i].contains("table"))
                throw SchemaError(npath + ".table", "input nodes carry no table");
        } else {
            const njson& table = require(nodes[i], npath, "table", njson::value_t::object);
            n.table = parse_table(table, npath + ".table");
        }
        g.nodes.push_back(std::move(n));
    }

    const njson& edges = require(doc, "", "edges", njson::value_t::array);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        std::string epath = elem("edges", i);
        const njson& e = edges[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw SchemaError(epath, "expected [from, to] string pair");
        g.edges.push_back({e[0].get<std::string>(), e[1].get<std::string>()});
    }
    return g;
}

}  // namespace dmnkit
