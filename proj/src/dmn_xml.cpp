#include "dmn_xml.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <map>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "unary_test.hpp"
#include "util.hpp"

namespace pt = boost::property_tree;

namespace dmnkit {

namespace {

std::string local_name(const std::string& key) {
    auto pos = key.rfind(':');
    return pos == std::string::npos ? key : key.substr(pos + 1);
}

std::string attr(const pt::ptree& node, const char* name) {
    auto attrs = node.get_child_optional("<xmlattr>");
    if (!attrs) return "";
    return attrs->get<std::string>(name, "");
}

const pt::ptree* child_by_local(const pt::ptree& node, const std::string& name) {
    for (const auto& [key, c] : node)
        if (local_name(key) == name) return &c;
    return nullptr;
}

std::vector<const pt::ptree*> children_by_local(const pt::ptree& node, const std::string& name) {
    std::vector<const pt::ptree*> out;
    for (const auto& [key, c] : node)
        if (local_name(key) == name) out.push_back(&c);
    return out;
}

std::string text_of(const pt::ptree& node) {
    const pt::ptree* t = child_by_local(node, "text");
    return trim(t ? t->data() : node.data());
}

// "feel:boolean" and "boolean" both mean boolean.
std::optional<ValueType> type_ref_of(const std::string& raw) {
    return parse_value_type(local_name(trim(raw)));
}

std::string strip_hash(const std::string& href) {
    return href.empty() || href[0] != '#' ? href : href.substr(1);
}

struct PendingTable {
    std::string decision_id;
    const pt::ptree* table;
    std::string path;
};

DecisionTable parse_table(const pt::ptree& xml, const std::string& path,
                          const DecisionGraph& g, const std::vector<std::string>& required) {
    DecisionTable t;
    std::string policy_raw = attr(xml, "hitPolicy");
    if (policy_raw.empty()) policy_raw = "UNIQUE";
    auto policy = parse_hit_policy(policy_raw);
    if (!policy) throw XmlError(path, "unsupported hit policy '" + policy_raw + "'");
    t.hit_policy = *policy;

    // Column order comes from the table; each column must name one of the
    // nodes this decision requires.
    for (const pt::ptree* col : children_by_local(xml, "input")) {
        const pt::ptree* expr = child_by_local(*col, "inputExpression");
        std::string label = expr ? text_of(*expr) : "";
        if (label.empty()) label = attr(*col, "label");
        if (label.empty()) throw XmlError(path + "/input", "column without expression text");
        const std::string* matched = nullptr;
        for (const std::string& req : required) {
            const Node* n = g.find_node(req);
            if (n && (n->id == label || n->name == label)) {
                matched = &req;
                break;
            }
        }
        if (!matched)
            throw XmlError(path + "/input",
                           "column '" + label + "' matches no required node");
        t.input_refs.push_back(*matched);
    }

    const pt::ptree* out_col = child_by_local(xml, "output");
    if (out_col) t.output_name = attr(*out_col, "name");

    std::size_t rule_no = 0;
    for (const pt::ptree* rule_xml : children_by_local(xml, "rule")) {
        std::string rpath = path + "/rule[" + std::to_string(rule_no++) + "]";
        Rule r;
        for (const pt::ptree* entry : children_by_local(*rule_xml, "inputEntry")) {
            std::string text = text_of(*entry);
            if (text.empty()) text = "-";  // DMN blank cell means irrelevant
            try {
                r.conditions.push_back(parse_unary_test(text));
            } catch (const ParseError& e) {
                throw XmlError(rpath + "/inputEntry",
                               "unsupported test '" + text + "': " + e.what());
            }
        }
        auto outputs = children_by_local(*rule_xml, "outputEntry");
        if (outputs.size() != 1)
            throw XmlError(rpath, "expected exactly one outputEntry");
        std::string out_text = text_of(*outputs[0]);
        try {
            r.output = parse_literal(out_text);
        } catch (const ParseError& e) {
            throw XmlError(rpath + "/outputEntry",
                           "non-literal output '" + out_text + "': " + e.what());
        }
        t.rules.push_back(std::move(r));
    }
    return t;
}

}  // namespace

DecisionGraph parse_dmn(std::string_view xml_bytes, const std::string& fallback_id) {
    pt::ptree tree;
    std::istringstream is{std::string(xml_bytes)};
    try {
        pt::read_xml(is, tree);
    } catch (const pt::xml_parser_error& e) {
        throw XmlError("definitions", std::string("XML parse failure: ") + e.what());
    }

    const pt::ptree* defs = nullptr;
    for (const auto& [key, child] : tree) {
        if (local_name(key) == "definitions") {
            defs = &child;
            break;
        }
    }
    if (!defs) throw XmlError("definitions", "no definitions element");

    DecisionGraph g;
    g.id = attr(*defs, "id");
    if (g.id.empty()) g.id = attr(*defs, "name");
    if (g.id.empty()) g.id = fallback_id;
    if (g.id.empty()) throw XmlError("definitions", "definitions lack id and name");

    for (const pt::ptree* in : children_by_local(*defs, "inputData")) {
        Node n;
        n.id = attr(*in, "id");
        n.name = attr(*in, "name");
        if (n.id.empty()) throw XmlError("definitions/inputData", "inputData without id");
        if (n.name.empty()) n.name = n.id;
        n.kind = NodeKind::InputVariable;
        std::string type_raw = attr(*in, "typeRef");
        const pt::ptree* var = child_by_local(*in, "variable");
        if (type_raw.empty() && var) type_raw = attr(*var, "typeRef");
        auto vt = type_ref_of(type_raw);
        if (!vt)
            throw XmlError("definitions/inputData[" + n.id + "]",
                           "missing or unsupported typeRef '" + type_raw + "'");
        n.value_type = *vt;
        g.nodes.push_back(std::move(n));
    }

    // First pass collects decisions and requirement edges; tables wait until
    // every node exists so columns can be matched.
    std::vector<PendingTable> pending;
    std::map<std::string, std::vector<std::string>> requirements;
    for (const pt::ptree* dec : children_by_local(*defs, "decision")) {
        Node n;
        n.id = attr(*dec, "id");
        n.name = attr(*dec, "name");
        if (n.id.empty()) throw XmlError("definitions/decision", "decision without id");
        if (n.name.empty()) n.name = n.id;
        n.kind = NodeKind::Decision;
        std::string dpath = "definitions/decision[" + n.id + "]";

        for (const pt::ptree* req : children_by_local(*dec, "informationRequirement")) {
            const pt::ptree* target = child_by_local(*req, "requiredInput");
            if (!target) target = child_by_local(*req, "requiredDecision");
            if (!target)
                throw XmlError(dpath + "/informationRequirement",
                               "requirement without requiredInput/requiredDecision");
            std::string from = strip_hash(attr(*target, "href"));
            if (from.empty())
                throw XmlError(dpath + "/informationRequirement", "empty href");
            g.edges.push_back({from, n.id});
            requirements[n.id].push_back(from);
        }

        const pt::ptree* table = child_by_local(*dec, "decisionTable");
        if (!table) throw XmlError(dpath, "decision without decisionTable");
        pending.push_back({n.id, table, dpath + "/decisionTable"});
        g.nodes.push_back(std::move(n));
    }

    for (const PendingTable& p : pending) {
        for (Node& n : g.nodes)
            if (n.id == p.decision_id)
                n.table = parse_table(*p.table, p.path, g, requirements[p.decision_id]);
    }

    // The root decision: required by no other decision.
    std::set<std::string> required_ids;
    for (const Edge& e : g.edges) required_ids.insert(e.from);
    std::vector<std::string> roots;
    for (const Node& n : g.nodes)
        if (n.kind == NodeKind::Decision && !required_ids.count(n.id)) roots.push_back(n.id);
    if (roots.size() != 1)
        throw XmlError("definitions", roots.empty()
                                          ? "no root decision found"
                                          : "multiple root decisions: " + std::to_string(roots.size()));
    for (Node& n : g.nodes)
        if (n.id == roots[0]) n.kind = NodeKind::Output;
    g.output_node_id = roots[0];

    ValidationReport rep = validate_graph(g);
    if (!rep.ok()) throw XmlError("definitions", "parsed graph invalid: " + rep.to_string());
    return g;
}

namespace {

void collect_knowledge_sources(const pt::ptree& node, std::vector<std::string>& out,
                               std::set<std::string>& seen) {
    for (const auto& [key, child] : node) {
        if (key == "<xmlattr>") continue;
        if (local_name(key) == "knowledgeSource") {
            std::string uri = trim(attr(child, "locationURI"));
            if (!uri.empty() && seen.insert(uri).second) out.push_back(uri);
        }
        collect_knowledge_sources(child, out, seen);
    }
}

}  // namespace

std::vector<std::string> extract_article_refs(std::string_view xml_bytes) {
    pt::ptree tree;
    std::istringstream is{std::string(xml_bytes)};
    try {
        pt::read_xml(is, tree);
    } catch (const pt::xml_parser_error& e) {
        throw XmlError("definitions", std::string("XML parse failure: ") + e.what());
    }
    std::vector<std::string> out;
    std::set<std::string> seen;
    collect_knowledge_sources(tree, out, seen);
    return out;
}

}  // namespace dmnkit
