#ifndef DMNKIT_ARTICLES_HPP
#define DMNKIT_ARTICLES_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dmnkit {

struct LegalArticle {
    std::string id;
    std::string title;
    std::string body_text;
    std::string recital_text;  // empty when the source has no recital
    std::string act;           // grouping used by the same-act reference filter
    std::vector<std::string> internal_refs;  // deduped, never the article itself
    std::size_t list_item_count = 0;
    std::string source_xml_path;
};

// Parses one article collection document. Accepted element names (namespace
// prefixes ignored): artikelen/articles root with an optional act attribute;
// artikel/article entries with id; titel/title; tekst/text; a recital under
// toelichting/recital; references as IntRef elements with a ref/target/doc
// attribute; list items as li/item elements or lines opening with
// enumeration markers (a., 1°, -).
std::vector<LegalArticle> parse_articles(std::string_view xml_bytes,
                                         const std::string& source_path = "");

class ArticleStore {
public:
    void add(LegalArticle article);
    const LegalArticle* find(const std::string& id) const;
    std::size_t size() const { return by_id_.size(); }
    const std::map<std::string, LegalArticle>& all() const { return by_id_; }

private:
    std::map<std::string, LegalArticle> by_id_;
};

struct ExpansionResult {
    std::vector<std::string> ids;       // seed order first, then new ids ascending
    std::vector<std::string> warnings;  // dangling references
};

// One level of expansion: adds articles referenced by seed articles that
// belong to the same act. Never transitive.
ExpansionResult expand_cross_references(const std::vector<std::string>& seed,
                                        const ArticleStore& store);

}  // namespace dmnkit

#endif
