#ifndef DMNKIT_OUTCOME_EVAL_HPP
#define DMNKIT_OUTCOME_EVAL_HPP

#include <map>
#include <string>
#include <vector>

#include "engine.hpp"
#include "graph.hpp"

namespace dmnkit {

// Enumerable value set of one input variable, in case-generation order.
struct InputDomain {
    enum class Kind { Boolean, Categorical, Presence };
    Kind kind = Kind::Boolean;
    std::vector<Value> values;  // Boolean: [false, true]; Null always last
};

using DomainMap = std::map<std::string, InputDomain>;

// Sentinel for inputs whose rules only ever null-check them.
extern const char* const kPresenceSentinel;

// Walks every table column, resolves identity chains back to origin inputs,
// and derives enumerable domains. Inputs with no derivable domain (numbers,
// never-tested strings) are absent from the result.
DomainMap extract_domains(const DecisionGraph& g);

struct TestabilityCaps {
    std::size_t outcome_max_inputs = 10;
    std::size_t requirements_max_cases = 1024;
};

enum class TestabilityReason {
    AllBooleanWithinCap,
    StringDomainsExtracted,
    TooManyCombinations,
    UnsupportedInputType,
};

const char* to_string(TestabilityReason r);

struct TestabilityVerdict {
    bool eligible = false;
    TestabilityReason reason = TestabilityReason::UnsupportedInputType;
    std::size_t case_count = 0;
};

TestabilityVerdict assess_testability(const DecisionGraph& g, const TestabilityCaps& caps = {});

// Cartesian product over inputs in ascending id order; the last input cycles
// fastest. Value order within a domain is the InputDomain order.
std::vector<Assignment> generate_cases(const DomainMap& domains);

enum class OutcomeClass {
    NotApplicable,
    PermitRequired,
    GeneralRulesApply,
    NotificationRequired,
    Unclassified,
};

const char* to_string(OutcomeClass c);

// Ordered keyword lists; the first list containing a matching keyword wins.
struct KeywordConfig {
    std::vector<std::pair<OutcomeClass, std::vector<std::string>>> entries;
};

const KeywordConfig& default_keyword_config();

// JSON file {"classes": [{"class": name, "keywords": [...]}, ...]}; array
// order is the match priority. Throws SchemaError/IoError.
KeywordConfig load_keyword_config(const std::string& path);

// Case-insensitive substring classification of Text values; everything else
// is Unclassified.
OutcomeClass classify_outcome(const Value& v, const KeywordConfig& cfg = default_keyword_config());

// Requirements: "ja"/"nee" Text (trimmed, case-insensitive) -> Boolean.
// Outcome: Text -> its OutcomeClass tag as Text. Other kinds pass through.
Value normalize_output(const Value& v, ModelType type,
                       const KeywordConfig& cfg = default_keyword_config());

struct EquivalenceResult {
    std::string model_id;
    std::size_t case_count = 0;
    std::size_t agree_count = 0;
    double rate = 0.0;
    std::vector<bool> verdicts;  // one per case
    bool candidate_valid = true;
    std::vector<std::string> unmatched_candidate_inputs;
    std::map<std::string, std::string> input_mapping;  // gold id -> candidate id
};

// Executes both models on gold-keyed cases and compares normalized outputs
// (normalization uses the gold model type). Null never equals false. An
// invalid candidate scores 0 with candidate_valid cleared.
EquivalenceResult equivalence(const DecisionGraph& gold, const DecisionGraph& candidate,
                              const std::vector<Assignment>& cases,
                              const KeywordConfig& cfg = default_keyword_config());

double macro_average(const std::vector<EquivalenceResult>& results);

}  // namespace dmnkit

#endif
