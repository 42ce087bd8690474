#ifndef DMNKIT_GENHARNESS_HPP
#define DMNKIT_GENHARNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"
#include "graph.hpp"
#include "provider.hpp"

namespace dmnkit {

// Prompt conditions: plain article text, optionally enriched with semantic
// role annotations (Srl) and/or the required input/output interface (Io).
enum class Condition { Text, TextSrl, TextIo, TextSrlIo };

const char* to_string(Condition c);
std::optional<Condition> parse_condition(std::string_view s);
const std::vector<Condition>& all_conditions();
bool condition_has_srl(Condition c);
bool condition_has_io(Condition c);

struct IoPort {
    std::string name;
    ValueType type = ValueType::Boolean;
};

// The interface a generated model must expose: every external input variable
// (id order) plus the output. Requirements models answer a boolean; outcome
// models answer one of the four outcome classes listed in output_values.
struct IoSpecification {
    std::vector<IoPort> inputs;
    std::string output_name;
    ValueType output_type = ValueType::Boolean;
    std::vector<std::string> output_values;  // empty for boolean outputs
};

IoSpecification build_io_spec(const DecisionGraph& g);

// One-shot example ids, one per run, fixed per (seed, target id) and shared
// by every condition. Eligible pool: same model type, at least 3 linked
// articles, at least 3 nodes, never the target itself. Drawing falls back to
// replacement only when the pool is smaller than the number of runs.
struct ExampleSelection {
    std::vector<std::string> ids;
    bool with_replacement = false;
    std::size_t pool_size = 0;
};

ExampleSelection select_examples(const ModelBundle& target, const Corpus& corpus, int runs,
                                 std::uint64_t seed);

// system.txt, user.txt and VERSION read from one directory. Placeholders use
// {{name}} syntax; a placeholder without a binding raises TemplateError.
struct PromptTemplates {
    std::string system_text;
    std::string user_text;
    std::string version;
};

PromptTemplates load_templates(const std::string& dir);

struct Prompt {
    std::string system_text;
    std::string user_text;
    std::string hash;        // sha256 over system, user and template version
    bool srl_flagged = false;  // condition wanted SRL but the target has none
};

Prompt build_prompt(Condition c, const ModelBundle& target, const ModelBundle& example,
                    const PromptTemplates& tpl);

// How far a raw response made it through parsing. ProviderError records never
// reached parsing at all.
enum class Validity { Parsed, SchemaError, ValidationError, ProviderError };

const char* to_string(Validity v);
std::optional<Validity> parse_validity(std::string_view s);

struct ParsedGeneration {
    Validity validity = Validity::SchemaError;
    std::optional<DecisionGraph> graph;  // present exactly when validity == Parsed
    std::string detail;
};

// Strips a surrounding code fence, deserializes the compact form, and runs
// structural validation. Classification only; never throws.
ParsedGeneration parse_generation(const std::string& raw);

struct RunRecord {
    std::string target_model_id;
    Condition condition = Condition::Text;
    int run_index = 0;
    std::string example_model_id;
    bool example_with_replacement = false;
    std::string prompt_hash;
    Validity validity = Validity::ProviderError;
    std::string detail;  // empty on Parsed
    int attempts = 0;
    long long latency_ms = 0;
    int prompt_tokens = 0;
    int completion_tokens = 0;
    std::string raw_response;
    std::optional<DecisionGraph> parsed_graph;
};

// "target|condition|run", the resume key.
std::string record_key(const RunRecord& r);
std::string record_key(const std::string& target, Condition c, int run);

// Single JSON line without trailing newline; inverse of each other.
std::string serialize_record(const RunRecord& r);
RunRecord deserialize_record(const std::string& line);

// Every line of a records.jsonl file, in file order.
std::vector<RunRecord> load_run_records(const std::string& path);

struct ExperimentPlan {
    std::vector<Condition> conditions = all_conditions();
    int runs = 5;
    std::uint64_t seed = 1;
    std::string out_dir;
    int concurrency = 4;
};

struct ExperimentSummary {
    std::size_t total_keys = 0;
    std::size_t completed_now = 0;
    std::size_t skipped_existing = 0;
    std::map<std::string, std::size_t> validity_counts;
    std::vector<RunRecord> records;  // full records.jsonl content after the run
};

// Walks targets (corpus order) x conditions x runs, skipping keys already in
// out_dir/manifest.txt, and appends one record per remaining key to
// out_dir/records.jsonl. Provider failures become ProviderError records; the
// batch always continues. Prompts are built per record, but example ids are
// drawn once per target so each (target, run) pair sees the same example in
// every condition. Up to plan.concurrency requests run in parallel; records
// are committed in plan order regardless.
ExperimentSummary run_experiment(const Corpus& corpus, const ExperimentPlan& plan,
                                 Provider& provider, const ProviderConfig& provider_cfg,
                                 const PromptTemplates& tpl);

}  // namespace dmnkit

#endif
