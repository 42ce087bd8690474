#include "outcome_eval.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "simplify.hpp"
#include "util.hpp"

namespace dmnkit {

const char* const kPresenceSentinel = "<aanwezig>";

const char* to_string(TestabilityReason r) {
    switch (r) {
        case TestabilityReason::AllBooleanWithinCap: return "AllBooleanWithinCap";
        case TestabilityReason::StringDomainsExtracted: return "StringDomainsExtracted";
        case TestabilityReason::TooManyCombinations: return "TooManyCombinations";
        case TestabilityReason::UnsupportedInputType: return "UnsupportedInputType";
    }
    return "?";
}

const char* to_string(OutcomeClass c) {
    switch (c) {
        case OutcomeClass::NotApplicable: return "NotApplicable";
        case OutcomeClass::PermitRequired: return "PermitRequired";
        case OutcomeClass::GeneralRulesApply: return "GeneralRulesApply";
        case OutcomeClass::NotificationRequired: return "NotificationRequired";
        case OutcomeClass::Unclassified: return "Unclassified";
    }
    return "?";
}

namespace {

// Collected observations about one origin input.
struct DomainScan {
    std::vector<std::string> texts;  // extraction order, deduped
    bool null_guard = false;
    void add_text(const std::string& t) {
        if (std::find(texts.begin(), texts.end(), t) == texts.end()) texts.push_back(t);
    }
};

void scan_test(const UnaryTest& t, DomainScan& scan) {
    switch (t.kind()) {
        case UnaryTest::Kind::Contains:
            scan.add_text(t.needle());
            break;
        case UnaryTest::Kind::EqualsLiteral:
            if (t.literal().kind() == Value::Kind::Text) scan.add_text(t.literal().as_text());
            break;
        case UnaryTest::Kind::IsNull:
        case UnaryTest::Kind::NotNull:
            scan.null_guard = true;
            break;
        case UnaryTest::Kind::Not:
            scan_test(t.inner(), scan);
            break;
        default:
            break;
    }
}

// Maps every node to the InputVariable it transparently forwards, if any:
// inputs map to themselves, identity nodes to their upstream's origin.
std::map<std::string, std::string> origin_inputs(const DecisionGraph& g) {
    std::map<std::string, std::string> origin;
    for (const std::string& id : topological_order(g)) {
        const Node* n = g.find_node(id);
        if (n->kind == NodeKind::InputVariable) {
            origin[id] = id;
        } else if (is_identity_node(*n)) {
            auto it = origin.find(n->table->input_refs[0]);
            if (it != origin.end()) origin[id] = it->second;
        }
    }
    return origin;
}

}  // namespace

DomainMap extract_domains(const DecisionGraph& g) {
    std::map<std::string, std::string> origin = origin_inputs(g);

    std::map<std::string, DomainScan> scans;
    for (const Node& n : g.nodes) {
        if (!n.table) continue;
        const DecisionTable& t = *n.table;
        for (const Rule& r : t.rules) {
            if (r.conditions.size() != t.input_refs.size()) continue;
            for (std::size_t col = 0; col < t.input_refs.size(); ++col) {
                auto it = origin.find(t.input_refs[col]);
                if (it == origin.end()) continue;
                scan_test(r.conditions[col], scans[it->second]);
            }
        }
    }

    DomainMap out;
    for (const Node* input : g.input_nodes()) {
        if (!input->value_type) continue;
        if (*input->value_type == ValueType::Boolean) {
            InputDomain d;
            d.kind = InputDomain::Kind::Boolean;
            d.values = {Value::boolean(false), Value::boolean(true)};
            out[input->id] = std::move(d);
            continue;
        }
        if (*input->value_type != ValueType::String) continue;
        auto it = scans.find(input->id);
        if (it == scans.end()) continue;
        const DomainScan& scan = it->second;
        if (!scan.texts.empty()) {
            InputDomain d;
            d.kind = InputDomain::Kind::Categorical;
            for (const std::string& t : scan.texts) d.values.push_back(Value::text(t));
            if (scan.null_guard) d.values.push_back(Value::null());
            out[input->id] = std::move(d);
        } else if (scan.null_guard) {
            InputDomain d;
            d.kind = InputDomain::Kind::Presence;
            d.values = {Value::text(kPresenceSentinel), Value::null()};
            out[input->id] = std::move(d);
        }
    }
    return out;
}

TestabilityVerdict assess_testability(const DecisionGraph& g, const TestabilityCaps& caps) {
    TestabilityVerdict v;
    std::vector<const Node*> inputs = g.input_nodes();

    if (g.model_type == ModelType::Outcome) {
        for (const Node* n : inputs) {
            if (!n->value_type || *n->value_type != ValueType::Boolean) {
                v.reason = TestabilityReason::UnsupportedInputType;
                return v;
            }
        }
        if (inputs.size() > caps.outcome_max_inputs) {
            v.reason = TestabilityReason::TooManyCombinations;
            return v;
        }
        v.eligible = true;
        v.reason = TestabilityReason::AllBooleanWithinCap;
        v.case_count = std::size_t(1) << inputs.size();
        return v;
    }

    DomainMap domains = extract_domains(g);
    bool all_boolean = true;
    std::size_t cases = 1;
    for (const Node* n : inputs) {
        auto it = domains.find(n->id);
        if (it == domains.end()) {
            v.reason = TestabilityReason::UnsupportedInputType;
            return v;
        }
        if (it->second.kind != InputDomain::Kind::Boolean) all_boolean = false;
        cases *= it->second.values.size();
        if (cases > caps.requirements_max_cases) {
            v.reason = TestabilityReason::TooManyCombinations;
            return v;
        }
    }
    v.eligible = true;
    v.reason = all_boolean ? TestabilityReason::AllBooleanWithinCap
                           : TestabilityReason::StringDomainsExtracted;
    v.case_count = cases;
    return v;
}

std::vector<Assignment> generate_cases(const DomainMap& domains) {
    std::vector<const std::string*> ids;
    std::vector<const InputDomain*> doms;
    for (const auto& [id, d] : domains) {
        ids.push_back(&id);
        doms.push_back(&d);
    }

    std::size_t total = 1;
    for (const InputDomain* d : doms) total *= d->values.size();

    std::vector<Assignment> out;
    out.reserve(total);
    std::vector<std::size_t> odo(doms.size(), 0);
    for (std::size_t c = 0; c < total; ++c) {
        Assignment a;
        for (std::size_t i = 0; i < doms.size(); ++i) a[*ids[i]] = doms[i]->values[odo[i]];
        out.push_back(std::move(a));
        for (std::size_t i = doms.size(); i-- > 0;) {
            if (++odo[i] < doms[i]->values.size()) break;
            odo[i] = 0;
        }
    }
    return out;
}

const KeywordConfig& default_keyword_config() {
    static const KeywordConfig cfg = {{
        {OutcomeClass::NotApplicable, {"niet van toepassing"}},
        {OutcomeClass::PermitRequired, {"vergunningplicht", "vergunning"}},
        {OutcomeClass::NotificationRequired, {"informatieplicht", "meldingsplicht", "melding"}},
        {OutcomeClass::GeneralRulesApply, {"algemene regels"}},
    }};
    return cfg;
}

KeywordConfig load_keyword_config(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("$", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("classes") || !doc["classes"].is_array())
        throw SchemaError("classes", "keyword config needs a 'classes' array");

    auto parse_class = [](const std::string& name) -> OutcomeClass {
        if (name == "NotApplicable") return OutcomeClass::NotApplicable;
        if (name == "PermitRequired") return OutcomeClass::PermitRequired;
        if (name == "GeneralRulesApply") return OutcomeClass::GeneralRulesApply;
        if (name == "NotificationRequired") return OutcomeClass::NotificationRequired;
        throw SchemaError("class", "unknown outcome class '" + name + "'");
    };

    KeywordConfig cfg;
    try {
        for (const nlohmann::json& entry : doc["classes"]) {
            OutcomeClass cls = parse_class(entry.at("class").get<std::string>());
            std::vector<std::string> keywords =
                entry.at("keywords").get<std::vector<std::string>>();
            if (keywords.empty())
                throw SchemaError("keywords", "empty keyword list for '" +
                                                  entry.at("class").get<std::string>() + "'");
            cfg.entries.emplace_back(cls, std::move(keywords));
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("classes", std::string("bad keyword entry: ") + e.what());
    }
    if (cfg.entries.empty()) throw SchemaError("classes", "no keyword classes defined");
    return cfg;
}

OutcomeClass classify_outcome(const Value& v, const KeywordConfig& cfg) {
    if (v.kind() != Value::Kind::Text) return OutcomeClass::Unclassified;
    std::string hay = to_lower(v.as_text());
    for (const auto& [cls, keywords] : cfg.entries)
        for (const std::string& kw : keywords)
            if (hay.find(to_lower(kw)) != std::string::npos) return cls;
    return OutcomeClass::Unclassified;
}

Value normalize_output(const Value& v, ModelType type, const KeywordConfig& cfg) {
    if (v.kind() != Value::Kind::Text) return v;
    if (type == ModelType::Requirements) {
        std::string t = to_lower(trim(v.as_text()));
        if (t == "ja") return Value::boolean(true);
        if (t == "nee") return Value::boolean(false);
        return v;
    }
    return Value::text(to_string(classify_outcome(v, cfg)));
}

EquivalenceResult equivalence(const DecisionGraph& gold, const DecisionGraph& candidate,
                              const std::vector<Assignment>& cases, const KeywordConfig& cfg) {
    EquivalenceResult res;
    res.model_id = gold.id;
    res.case_count = cases.size();

    if (!validate_graph(candidate).ok()) {
        res.candidate_valid = false;
        res.verdicts.assign(cases.size(), false);
        return res;
    }

    // Candidate inputs matched to gold inputs: id first, then exact name,
    // then normalized name.
    std::vector<const Node*> gold_inputs = gold.input_nodes();
    std::map<std::string, std::string> cand_for_gold;
    std::vector<std::string> unmatched;
    for (const Node* cn : candidate.input_nodes()) {
        const Node* match = nullptr;
        for (const Node* gn : gold_inputs)
            if (gn->id == cn->id) { match = gn; break; }
        if (!match)
            for (const Node* gn : gold_inputs)
                if (gn->name == cn->name) { match = gn; break; }
        if (!match)
            for (const Node* gn : gold_inputs)
                if (normalize_name(gn->name) == normalize_name(cn->name)) { match = gn; break; }
        if (match && !cand_for_gold.count(match->id))
            cand_for_gold[match->id] = cn->id;
        else
            unmatched.push_back(cn->id);
    }
    res.input_mapping = cand_for_gold;
    res.unmatched_candidate_inputs = std::move(unmatched);

    for (const Assignment& a : cases) {
        Assignment cand_a;
        for (const auto& [gold_id, value] : a) {
            auto it = cand_for_gold.find(gold_id);
            if (it != cand_for_gold.end()) cand_a[it->second] = value;
        }
        Value g_out = normalize_output(execute(gold, a).output_value, gold.model_type, cfg);
        Value c_out = normalize_output(execute(candidate, cand_a).output_value, gold.model_type, cfg);
        bool agree = g_out == c_out;
        res.verdicts.push_back(agree);
        if (agree) ++res.agree_count;
    }
    res.rate = res.case_count ? double(res.agree_count) / double(res.case_count) : 0.0;
    return res;
}

double macro_average(const std::vector<EquivalenceResult>& results) {
    if (results.empty()) return 0.0;
    double s = 0;
    for (const EquivalenceResult& r : results) s += r.rate;
    return s / double(results.size());
}

}  // namespace dmnkit
