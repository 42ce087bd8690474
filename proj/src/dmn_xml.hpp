#ifndef DMNKIT_DMN_XML_HPP
#define DMNKIT_DMN_XML_HPP

#include <string>
#include <string_view>

#include "graph.hpp"

namespace dmnkit {

// Parses a DMN 1.x definitions document into a DecisionGraph. Namespace
// prefixes are ignored. inputData elements become InputVariable nodes,
// informationRequirement hrefs become edges, and the unique root decision
// (required by no other decision) becomes the Output node. Table columns are
// matched to required nodes by inputExpression text (node name or id).
// Throws XmlError with the offending element path; the result always passes
// validate_graph. `fallback_id` names the graph when definitions lack an id.
DecisionGraph parse_dmn(std::string_view xml_bytes, const std::string& fallback_id = "");

// Collects the legal-article ids a DMN document links to, taken from
// knowledgeSource locationURI attributes anywhere in the definitions.
// Order of first appearance, duplicates dropped. Returns an empty list for
// documents without knowledge sources; throws XmlError on malformed XML.
std::vector<std::string> extract_article_refs(std::string_view xml_bytes);

}  // namespace dmnkit

#endif
