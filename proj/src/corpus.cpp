#include "corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <set>

#include "compact_json.hpp"
#include "dmn_xml.hpp"
#include "errors.hpp"
#include "util.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace dmnkit {

namespace {

std::vector<fs::path> xml_files_recursive(const fs::path& dir) {
    std::vector<fs::path> out;
    if (!fs::exists(dir)) return out;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".xml")
            out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<ModelType> infer_type(const fs::path& p) {
    std::string s = to_lower(p.generic_string());
    if (s.find("indiening") != std::string::npos || s.find("requirement") != std::string::npos)
        return ModelType::Requirements;
    if (s.find("conclusie") != std::string::npos || s.find("outcome") != std::string::npos)
        return ModelType::Outcome;
    return std::nullopt;
}

std::vector<std::string> string_list(const nlohmann::json& doc, const char* key) {
    std::vector<std::string> out;
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_array()) return out;
    for (const auto& v : *it)
        if (v.is_string()) out.push_back(v.get<std::string>());
    return out;
}

std::optional<SrlAnnotations> load_srl(const fs::path& srl_dir, const std::string& model_id,
                                       std::vector<CorpusIssue>& errors) {
    fs::path p = srl_dir / (model_id + ".json");
    if (!fs::exists(p)) return std::nullopt;
    try {
        auto doc = nlohmann::json::parse(read_file(p));
        SrlAnnotations srl;
        srl.actors = string_list(doc, "actors");
        srl.actions = string_list(doc, "actions");
        srl.objects = string_list(doc, "objects");
        srl.recipients = string_list(doc, "recipients");
        return srl;
    } catch (const std::exception& e) {
        errors.push_back({p.string(), e.what()});
        return std::nullopt;
    }
}

}  // namespace

Corpus load_corpus(const std::string& model_dir, const std::string& article_dir,
                   const std::string& srl_dir, const LoadOptions& options) {
    Corpus corpus;

    for (const fs::path& p : xml_files_recursive(article_dir)) {
        try {
            for (LegalArticle& a : parse_articles(read_file(p), p.string()))
                corpus.articles.add(std::move(a));
        } catch (const std::exception& e) {
            corpus.errors.push_back({p.string(), e.what()});
        }
    }

    for (const fs::path& p : xml_files_recursive(model_dir)) {
        std::string bytes;
        ModelBundle bundle;
        try {
            bytes = read_file(p);
            bundle.graph = parse_dmn(bytes, p.stem().string());
        } catch (const std::exception& e) {
            corpus.errors.push_back({p.string(), e.what()});
            continue;
        }
        bundle.source_path = p.string();
        bundle.source_bytes = bytes.size();

        if (options.force_type) {
            bundle.graph.model_type = *options.force_type;
        } else if (auto t = infer_type(p)) {
            bundle.graph.model_type = *t;
        } else {
            corpus.warnings.push_back("model '" + bundle.graph.id +
                                      "': no type marker in path, defaulting to Outcome");
            bundle.graph.model_type = ModelType::Outcome;
        }

        std::vector<std::string> seed;
        try {
            seed = extract_article_refs(bytes);
        } catch (const XmlError&) {
            seed.clear();  // parse_dmn already succeeded; unreachable in practice
        }
        ExpansionResult exp = expand_cross_references(seed, corpus.articles);
        for (const std::string& w : exp.warnings)
            corpus.warnings.push_back("model '" + bundle.graph.id + "': " + w);
        for (const std::string& id : exp.ids) {
            if (const LegalArticle* a = corpus.articles.find(id)) {
                bundle.articles.push_back(*a);
                bundle.article_ids.push_back(id);
            }
        }
        bundle.missing_articles = bundle.articles.empty();

        if (!srl_dir.empty())
            bundle.srl = load_srl(srl_dir, bundle.graph.id, corpus.errors);

        corpus.bundles.push_back(std::move(bundle));
    }

    std::sort(corpus.bundles.begin(), corpus.bundles.end(),
              [](const ModelBundle& a, const ModelBundle& b) { return a.graph.id < b.graph.id; });
    return corpus;
}

void write_corpus(const Corpus& corpus, const std::string& out_dir) {
    fs::path root(out_dir);
    ensure_dir(root);
    ensure_dir(root / "compact");

    ojson manifest;
    ojson models = ojson::object();
    for (const ModelBundle& b : corpus.bundles) {
        std::string compact = serialize_graph(b.graph);
        write_file(root / "compact" / (b.graph.id + ".json"), compact);
        ojson entry;
        entry["model_type"] = to_string(b.graph.model_type);
        entry["article_ids"] = b.article_ids;
        entry["missing_articles"] = b.missing_articles;
        entry["has_srl"] = b.srl.has_value();
        entry["source_path"] = b.source_path;
        entry["source_bytes"] = b.source_bytes;
        entry["compact_bytes"] = compact.size();
        models[b.graph.id] = std::move(entry);
    }
    manifest["models"] = std::move(models);

    ojson errors = ojson::array();
    for (const CorpusIssue& e : corpus.errors)
        errors.push_back(ojson{{"path", e.path}, {"message", e.message}});
    manifest["errors"] = std::move(errors);
    manifest["warnings"] = corpus.warnings;
    write_file(root / "corpus_manifest.json", manifest.dump(2) + "\n");

    ojson articles = ojson::object();
    for (const auto& [id, a] : corpus.articles.all()) {
        ojson entry;
        entry["title"] = a.title;
        entry["act"] = a.act;
        entry["body_text"] = a.body_text;
        entry["recital_text"] = a.recital_text;
        entry["internal_refs"] = a.internal_refs;
        entry["list_item_count"] = a.list_item_count;
        entry["source_xml_path"] = a.source_xml_path;
        articles[id] = std::move(entry);
    }
    write_file(root / "articles.json", articles.dump(2) + "\n");

    ojson srl = ojson::object();
    for (const ModelBundle& b : corpus.bundles) {
        if (!b.srl) continue;
        ojson entry;
        entry["actors"] = b.srl->actors;
        entry["actions"] = b.srl->actions;
        entry["objects"] = b.srl->objects;
        entry["recipients"] = b.srl->recipients;
        srl[b.graph.id] = std::move(entry);
    }
    write_file(root / "srl.json", srl.dump(2) + "\n");
}

}  // namespace dmnkit
