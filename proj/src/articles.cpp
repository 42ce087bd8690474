#include "articles.hpp"

#include <algorithm>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <regex>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "util.hpp"

namespace pt = boost::property_tree;

namespace dmnkit {

namespace {

std::string local_name(const std::string& key) {
    auto pos = key.rfind(':');
    return pos == std::string::npos ? key : key.substr(pos + 1);
}

std::string attr(const pt::ptree& node, std::initializer_list<const char*> names) {
    auto attrs = node.get_child_optional("<xmlattr>");
    if (!attrs) return "";
    for (const char* name : names) {
        auto v = attrs->get_optional<std::string>(name);
        if (v) return *v;
    }
    return "";
}

// Depth-first text gathering: element data first, then children. Whitespace
// runs collapse to single spaces.
void gather_text(const pt::ptree& node, std::string& out) {
    std::string data = trim(node.data());
    if (!data.empty()) {
        if (!out.empty()) out += ' ';
        out += data;
    }
    for (const auto& [key, child] : node) {
        if (key == "<xmlattr>" || key == "<xmlcomment>") continue;
        gather_text(child, out);
    }
}

void collect(const pt::ptree& node, const std::set<std::string>& names,
             std::vector<const pt::ptree*>& out) {
    for (const auto& [key, child] : node) {
        if (key == "<xmlattr>" || key == "<xmlcomment>") continue;
        if (names.count(local_name(key))) out.push_back(&child);
        collect(child, names, out);
    }
}

std::size_t count_marker_lines(const std::string& text) {
    static const std::regex marker(R"(^\s*([a-z]\.|\d+°|\d+\.|-)\s+\S)");
    std::size_t count = 0;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (std::regex_search(line, marker)) ++count;
    return count;
}

LegalArticle parse_one(const pt::ptree& node, const std::string& act,
                       const std::string& source_path) {
    LegalArticle a;
    a.id = attr(node, {"id"});
    a.act = act;
    a.source_xml_path = source_path;
    if (a.id.empty()) throw XmlError(source_path + "/artikel", "article without id attribute");

    std::string raw_body;
    for (const auto& [key, child] : node) {
        std::string name = local_name(key);
        if (name == "titel" || name == "title") {
            std::string t;
            gather_text(child, t);
            a.title = t;
        } else if (name == "tekst" || name == "text") {
            gather_text(child, raw_body);
            std::vector<const pt::ptree*> items;
            collect(child, {"li", "item"}, items);
            a.list_item_count += items.size();
            if (items.empty()) a.list_item_count += count_marker_lines(child.data());
        } else if (name == "toelichting" || name == "recital") {
            std::string t;
            gather_text(child, t);
            a.recital_text = t;
        }
    }
    a.body_text = raw_body;

    std::vector<const pt::ptree*> refs;
    collect(node, {"IntRef"}, refs);
    std::set<std::string> seen;
    for (const pt::ptree* r : refs) {
        std::string target = attr(*r, {"ref", "target", "doc"});
        if (target.empty() || target == a.id) continue;
        if (seen.insert(target).second) a.internal_refs.push_back(target);
    }
    return a;
}

}  // namespace

std::vector<LegalArticle> parse_articles(std::string_view xml_bytes,
                                         const std::string& source_path) {
    pt::ptree tree;
    std::istringstream is{std::string(xml_bytes)};
    try {
        pt::read_xml(is, tree);
    } catch (const pt::xml_parser_error& e) {
        throw XmlError(source_path, std::string("XML parse failure: ") + e.what());
    }

    const pt::ptree* root = nullptr;
    std::string root_key;
    for (const auto& [key, child] : tree) {
        root = &child;
        root_key = local_name(key);
        break;
    }
    if (!root) throw XmlError(source_path, "empty document");

    std::string act = attr(*root, {"act", "wet"});

    std::vector<LegalArticle> out;
    if (root_key == "artikel" || root_key == "article") {
        out.push_back(parse_one(*root, act, source_path));
        return out;
    }
    for (const auto& [key, child] : *root) {
        std::string name = local_name(key);
        if (name == "artikel" || name == "article")
            out.push_back(parse_one(child, act, source_path));
    }
    return out;
}

void ArticleStore::add(LegalArticle article) {
    by_id_[article.id] = std::move(article);
}

const LegalArticle* ArticleStore::find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &it->second;
}

ExpansionResult expand_cross_references(const std::vector<std::string>& seed,
                                        const ArticleStore& store) {
    ExpansionResult res;
    std::set<std::string> present;
    for (const std::string& id : seed) {
        if (present.insert(id).second) res.ids.push_back(id);
    }

    std::set<std::string> added;
    for (const std::string& id : seed) {
        const LegalArticle* a = store.find(id);
        if (!a) {
            res.warnings.push_back("seed article '" + id + "' not in store");
            continue;
        }
        for (const std::string& ref : a->internal_refs) {
            if (present.count(ref) || added.count(ref)) continue;
            const LegalArticle* target = store.find(ref);
            if (!target) {
                res.warnings.push_back("article '" + id + "' references unknown '" + ref + "'");
                continue;
            }
            if (target->act != a->act) continue;  // only same-act references expand
            added.insert(ref);
        }
    }
    for (const std::string& id : added) res.ids.push_back(id);
    return res;
}

}  // namespace dmnkit
