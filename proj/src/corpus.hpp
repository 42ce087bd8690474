#ifndef DMNKIT_CORPUS_HPP
#define DMNKIT_CORPUS_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "articles.hpp"
#include "graph.hpp"

namespace dmnkit {

struct SrlAnnotations {
    std::vector<std::string> actors;
    std::vector<std::string> actions;
    std::vector<std::string> objects;
    std::vector<std::string> recipients;
};

struct ModelBundle {
    DecisionGraph graph;
    std::vector<LegalArticle> articles;    // after one-level expansion, resolution order
    std::vector<std::string> article_ids;  // ids of `articles`
    std::optional<SrlAnnotations> srl;
    bool missing_articles = false;  // no linked article could be resolved
    std::string source_path;
    std::size_t source_bytes = 0;  // raw XML size, feeds the compact-form ratio
};

struct CorpusIssue {
    std::string path;
    std::string message;
};

struct Corpus {
    std::vector<ModelBundle> bundles;  // ascending graph id
    ArticleStore articles;             // everything parsed from article_dir
    std::vector<CorpusIssue> errors;   // per-file failures; the batch continues
    std::vector<std::string> warnings;
};

struct LoadOptions {
    std::optional<ModelType> force_type;  // overrides path-based inference
};

// Loads every .xml under model_dir (recursive; path segments carry the model
// type: "indiening"/"requirement" vs "conclusie"/"outcome"), all article
// documents under article_dir, and optional per-model SRL JSON from srl_dir
// (<model id>.json with actors/actions/objects/recipients lists). A model's
// articles are its knowledgeSource references expanded one level within the
// same act. Unreadable or invalid files land in `errors`.
Corpus load_corpus(const std::string& model_dir, const std::string& article_dir,
                   const std::string& srl_dir = "", const LoadOptions& options = {});

// Writes the canonical layout under out_dir: compact/<graph id>.json per
// model, articles.json, srl.json, and corpus_manifest.json (model id ->
// article ids, type, flags, plus load errors and warnings).
void write_corpus(const Corpus& corpus, const std::string& out_dir);

}  // namespace dmnkit

#endif
