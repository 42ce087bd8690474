#include "dmnkit.h"

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "analytics.hpp"
#include "compact_json.hpp"
#include "corpus.hpp"
#include "engine.hpp"
#include "errors.hpp"
#include "genharness.hpp"
#include "graph.hpp"
#include "outcome_eval.hpp"
#include "provider.hpp"
#include "simplify.hpp"
#include "structeval.hpp"
#include "util.hpp"

using namespace dmnkit;
namespace njson = nlohmann;

struct dmnkit_graph {
    DecisionGraph g;
};

namespace {

thread_local std::string t_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Maps the library's exception taxonomy onto C status codes and captures the
// message for dmnkit_last_error.
template <typename Fn>
dmnkit_status guarded(Fn&& fn) {
    t_last_error.clear();
    try {
        fn();
        return DMNKIT_OK;
    } catch (const SchemaError& e) {
        t_last_error = e.what();
        return DMNKIT_E_DATA;
    } catch (const ParseError& e) {
        t_last_error = e.what();
        return DMNKIT_E_DATA;
    } catch (const XmlError& e) {
        t_last_error = e.what();
        return DMNKIT_E_DATA;
    } catch (const MissingAssignmentError& e) {
        t_last_error = e.what();
        return DMNKIT_E_DATA;
    } catch (const GraphCycleError& e) {
        t_last_error = e.what();
        return DMNKIT_E_DATA;
    } catch (const TemplateError& e) {
        t_last_error = e.what();
        return DMNKIT_E_DATA;
    } catch (const IoError& e) {
        t_last_error = e.what();
        return DMNKIT_E_IO;
    } catch (const ProviderError& e) {
        t_last_error = e.what();
        return DMNKIT_E_IO;
    } catch (const std::invalid_argument& e) {
        t_last_error = e.what();
        return DMNKIT_E_USAGE;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return DMNKIT_E_INTERNAL;
    } catch (...) {
        t_last_error = "unknown failure";
        return DMNKIT_E_INTERNAL;
    }
}

dmnkit_status usage_error(const char* msg) {
    t_last_error = msg;
    return DMNKIT_E_USAGE;
}

Value json_to_value(const njson::json& j) {
    switch (j.type()) {
        case njson::json::value_t::null:
            return Value::null();
        case njson::json::value_t::boolean:
            return Value::boolean(j.get<bool>());
        case njson::json::value_t::string:
            return Value::text(j.get<std::string>());
        case njson::json::value_t::number_integer:
        case njson::json::value_t::number_unsigned:
        case njson::json::value_t::number_float:
            // route through the literal parser to keep decimals exact
            return parse_literal(j.dump());
        default:
            throw SchemaError("assignment", "values must be scalars");
    }
}

Corpus load_corpus_dirs(const char* model_dir, const char* article_dir,
                        const char* srl_dir_or_null) {
    std::string srl = srl_dir_or_null ? srl_dir_or_null : "";
    return load_corpus(model_dir, article_dir, srl);
}

njson::ordered_json equivalence_to_json(const EquivalenceResult& r) {
    njson::ordered_json out;
    out["model_id"] = r.model_id;
    out["case_count"] = r.case_count;
    out["agree_count"] = r.agree_count;
    out["rate"] = r.rate;
    out["candidate_valid"] = r.candidate_valid;
    out["unmatched_candidate_inputs"] = r.unmatched_candidate_inputs;
    njson::ordered_json mapping = njson::ordered_json::object();
    for (const auto& [gold_id, cand_id] : r.input_mapping) mapping[gold_id] = cand_id;
    out["input_mapping"] = mapping;
    return out;
}

}  // namespace

extern "C" {

const char* dmnkit_last_error(void) { return t_last_error.c_str(); }

void dmnkit_string_free(char* s) { std::free(s); }

dmnkit_status dmnkit_graph_parse(const char* compact_json, dmnkit_graph** out) {
    if (!compact_json || !out) return usage_error("null argument");
    return guarded([&] {
        auto* handle = new dmnkit_graph{deserialize_graph(compact_json)};
        *out = handle;
    });
}

dmnkit_status dmnkit_graph_from_file(const char* path, dmnkit_graph** out) {
    if (!path || !out) return usage_error("null argument");
    return guarded([&] {
        auto* handle = new dmnkit_graph{deserialize_graph(read_file(path))};
        *out = handle;
    });
}

void dmnkit_graph_free(dmnkit_graph* g) { delete g; }

dmnkit_status dmnkit_graph_serialize(const dmnkit_graph* g, char** out_json) {
    if (!g || !out_json) return usage_error("null argument");
    return guarded([&] { *out_json = dup_string(serialize_graph(g->g)); });
}

dmnkit_status dmnkit_graph_validate(const dmnkit_graph* g, char** out_json) {
    if (!g || !out_json) return usage_error("null argument");
    return guarded([&] {
        ValidationReport report = validate_graph(g->g);
        njson::ordered_json out;
        out["ok"] = report.ok();
        njson::ordered_json violations = njson::ordered_json::array();
        for (const auto& v : report.violations) {
            njson::ordered_json item;
            item["kind"] = to_string(v.kind);
            item["detail"] = v.message;
            violations.push_back(std::move(item));
        }
        out["violations"] = violations;
        *out_json = dup_string(out.dump(2) + "\n");
    });
}

dmnkit_status dmnkit_graph_execute(const dmnkit_graph* g, const char* assignment_json,
                                   int strict, char** out_json) {
    if (!g || !assignment_json || !out_json) return usage_error("null argument");
    return guarded([&] {
        njson::json doc;
        try {
            doc = njson::json::parse(assignment_json);
        } catch (const njson::json::parse_error& e) {
            throw SchemaError("assignment", std::string("invalid JSON: ") + e.what());
        }
        if (!doc.is_object()) throw SchemaError("assignment", "must be a JSON object");
        Assignment a;
        for (const auto& [key, value] : doc.items()) a[key] = json_to_value(value);

        ExecutionResult result =
            execute(g->g, a, strict ? ExecMode::Strict : ExecMode::Permissive);
        njson::ordered_json out;
        out["output"] = result.output_value.repr();
        njson::ordered_json nodes = njson::ordered_json::object();
        for (const auto& [id, value] : result.node_values) nodes[id] = value.repr();
        out["node_values"] = nodes;
        njson::ordered_json violations = njson::ordered_json::array();
        for (const ExecError& e : result.errors) {
            njson::ordered_json item;
            item["node"] = e.node_id;
            item["kind"] = "hit_policy";
            violations.push_back(std::move(item));
        }
        out["violations"] = violations;
        *out_json = dup_string(out.dump(2) + "\n");
    });
}

dmnkit_status dmnkit_graph_simplify(const dmnkit_graph* g, dmnkit_graph** out_graph,
                                    char** out_report_json) {
    if (!g || !out_graph || !out_report_json) return usage_error("null argument");
    return guarded([&] {
        auto [simplified, report] = eliminate_identity_nodes(g->g);
        njson::ordered_json out;
        out["removed"] = report.removed_node_ids;
        out["nodes_before"] = report.nodes_before;
        out["nodes_after"] = report.nodes_after;
        out["edges_before"] = report.edges_before;
        out["edges_after"] = report.edges_after;
        out["identity_fraction_decisions"] = report.identity_fraction_before;
        out["identity_fraction_all_nodes"] = report.identity_fraction_all_nodes;
        *out_graph = new dmnkit_graph{std::move(simplified)};
        *out_report_json = dup_string(out.dump(2) + "\n");
    });
}

dmnkit_status dmnkit_graph_stats(const dmnkit_graph* g, char** out_json) {
    if (!g || !out_json) return usage_error("null argument");
    return guarded([&] {
        njson::ordered_json out;
        for (const auto& [name, value] : descriptive_stats(g->g).metrics())
            out[name] = value;
        *out_json = dup_string(out.dump(2) + "\n");
    });
}

dmnkit_status dmnkit_sp_similarity(const dmnkit_graph* a, const dmnkit_graph* b,
                                   double* out_value) {
    if (!a || !b || !out_value) return usage_error("null argument");
    return guarded([&] { *out_value = sp_similarity(a->g, b->g); });
}

dmnkit_status dmnkit_graphlet_similarity(const dmnkit_graph* a, const dmnkit_graph* b,
                                         unsigned long long seed, double* out_value) {
    if (!a || !b || !out_value) return usage_error("null argument");
    return guarded([&] {
        GraphletOptions opt;
        if (seed != 0) opt.seed = seed;
        *out_value = graphlet_similarity(a->g, b->g, opt);
    });
}

dmnkit_status dmnkit_graph_cases(const dmnkit_graph* g, char** out_json) {
    if (!g || !out_json) return usage_error("null argument");
    return guarded([&] {
        TestabilityVerdict verdict = assess_testability(g->g);
        njson::ordered_json out;
        out["eligible"] = verdict.eligible;
        out["reason"] = to_string(verdict.reason);
        out["case_count"] = verdict.case_count;
        if (verdict.eligible) {
            njson::ordered_json cases = njson::ordered_json::array();
            for (const Assignment& a : generate_cases(extract_domains(g->g))) {
                njson::ordered_json row = njson::ordered_json::object();
                for (const auto& [id, value] : a) row[id] = value.repr();
                cases.push_back(std::move(row));
            }
            out["cases"] = cases;
        }
        *out_json = dup_string(out.dump(2) + "\n");
    });
}

dmnkit_status dmnkit_graph_equivalence(const dmnkit_graph* gold,
                                       const dmnkit_graph* candidate,
                                       const char* keywords_path_or_null,
                                       char** out_json) {
    if (!gold || !candidate || !out_json) return usage_error("null argument");
    return guarded([&] {
        TestabilityVerdict verdict = assess_testability(gold->g);
        if (!verdict.eligible)
            throw SchemaError("gold",
                              std::string("gold model is not testable: ") +
                                  to_string(verdict.reason));
        std::vector<Assignment> cases = generate_cases(extract_domains(gold->g));
        EquivalenceResult r =
            keywords_path_or_null
                ? equivalence(gold->g, candidate->g, cases,
                              load_keyword_config(keywords_path_or_null))
                : equivalence(gold->g, candidate->g, cases);
        *out_json = dup_string(equivalence_to_json(r).dump(2) + "\n");
    });
}

dmnkit_status dmnkit_pipe_ingest(const char* model_dir, const char* article_dir,
                                 const char* srl_dir_or_null,
                                 const char* out_dir_or_null, char** out_json) {
    if (!model_dir || !article_dir || !out_json) return usage_error("null argument");
    return guarded([&] {
        Corpus corpus = load_corpus_dirs(model_dir, article_dir, srl_dir_or_null);
        if (out_dir_or_null && *out_dir_or_null) write_corpus(corpus, out_dir_or_null);
        njson::ordered_json out;
        out["models"] = corpus.bundles.size();
        out["articles"] = corpus.articles.size();
        njson::ordered_json errors = njson::ordered_json::array();
        for (const CorpusIssue& issue : corpus.errors)
            errors.push_back(issue.path + ": " + issue.message);
        out["errors"] = errors;
        njson::ordered_json warnings = njson::ordered_json::array();
        for (const std::string& w : corpus.warnings) warnings.push_back(w);
        out["warnings"] = warnings;
        njson::ordered_json ids = njson::ordered_json::array();
        for (const ModelBundle& b : corpus.bundles) ids.push_back(b.graph.id);
        out["model_ids"] = ids;
        *out_json = dup_string(out.dump(2) + "\n");
    });
}

dmnkit_status dmnkit_pipe_stats(const char* model_dir, const char* article_dir,
                                const char* srl_dir_or_null, char** out_json) {
    if (!model_dir || !article_dir || !out_json) return usage_error("null argument");
    return guarded([&] {
        Corpus corpus = load_corpus_dirs(model_dir, article_dir, srl_dir_or_null);
        std::vector<const DecisionGraph*> graphs;
        for (const ModelBundle& b : corpus.bundles) graphs.push_back(&b.graph);

        njson::ordered_json groups = njson::ordered_json::object();
        for (const auto& [type, summary] : aggregate_stats(graphs)) {
            njson::ordered_json group;
            group["count"] = summary.count;
            njson::ordered_json metrics = njson::ordered_json::array();
            for (const MetricSummary& m : summary.metrics) {
                njson::ordered_json metric;
                metric["name"] = m.name;
                metric["mean"] = m.mean;
                metric["stddev"] = m.stddev;
                metrics.push_back(std::move(metric));
            }
            group["metrics"] = metrics;
            groups[to_string(type)] = group;
        }

        njson::ordered_json models = njson::ordered_json::array();
        for (const ModelBundle& b : corpus.bundles) {
            njson::ordered_json row;
            row["id"] = b.graph.id;
            row["model_type"] = to_string(b.graph.model_type);
            njson::ordered_json metrics = njson::ordered_json::object();
            for (const auto& [name, value] : descriptive_stats(b.graph).metrics())
                metrics[name] = value;
            row["metrics"] = metrics;
            models.push_back(std::move(row));
        }

        njson::ordered_json out;
        out["groups"] = groups;
        out["models"] = models;
        *out_json = dup_string(out.dump(2) + "\n");
    });
}

dmnkit_status dmnkit_pipe_generate(const char* options_json, char** out_json) {
    if (!options_json || !out_json) return usage_error("null argument");
    return guarded([&] {
        njson::json opts;
        try {
            opts = njson::json::parse(options_json);
        } catch (const njson::json::parse_error& e) {
            throw SchemaError("options", std::string("invalid JSON: ") + e.what());
        }
        if (!opts.is_object()) throw SchemaError("options", "must be a JSON object");

        auto need = [&](const char* key) -> std::string {
            if (!opts.contains(key) || !opts[key].is_string())
                throw SchemaError(key, "required string option");
            return opts[key].get<std::string>();
        };
        std::string model_dir = need("model_dir");
        std::string article_dir = need("article_dir");
        std::string prompts_dir = need("prompts_dir");
        std::string out_dir = need("out_dir");
        std::string srl_dir = opts.value("srl_dir", std::string());
        std::string provider_spec = opts.value("provider", std::string("stub"));

        ExperimentPlan plan;
        plan.out_dir = out_dir;
        plan.runs = opts.value("runs", 5);
        plan.seed = opts.value("seed", std::uint64_t(1));
        plan.concurrency = opts.value("concurrency", 4);
        if (opts.contains("conditions")) {
            plan.conditions.clear();
            for (const njson::json& c : opts["conditions"]) {
                std::optional<Condition> parsed = parse_condition(c.get<std::string>());
                if (!parsed)
                    throw SchemaError("conditions",
                                      "unknown condition '" + c.get<std::string>() + "'");
                plan.conditions.push_back(*parsed);
            }
            if (plan.conditions.empty())
                throw SchemaError("conditions", "must not be empty");
        }

        Corpus corpus = load_corpus(model_dir, article_dir, srl_dir);
        PromptTemplates tpl = load_templates(prompts_dir);

        ProviderConfig cfg;
        StubProvider stub;
        std::unique_ptr<HttpProvider> http;
        Provider* provider = &stub;
        if (provider_spec != "stub") {
            cfg = load_provider_config(provider_spec);
            http = std::make_unique<HttpProvider>(cfg);
            provider = http.get();
        }

        ExperimentSummary summary = run_experiment(corpus, plan, *provider, cfg, tpl);
        njson::ordered_json out;
        out["total"] = summary.total_keys;
        out["completed"] = summary.completed_now;
        out["skipped"] = summary.skipped_existing;
        njson::ordered_json validity = njson::ordered_json::object();
        for (const auto& [tag, count] : summary.validity_counts) validity[tag] = count;
        out["validity"] = validity;
        *out_json = dup_string(out.dump(2) + "\n");
    });
}

dmnkit_status dmnkit_pipe_analyze(const char* records_path, const char* model_dir,
                                  const char* article_dir, const char* srl_dir_or_null,
                                  const char* out_dir, char** out_json) {
    if (!records_path || !model_dir || !article_dir || !out_dir || !out_json)
        return usage_error("null argument");
    return guarded([&] {
        Corpus corpus = load_corpus_dirs(model_dir, article_dir, srl_dir_or_null);
        std::vector<RunRecord> records = load_run_records(records_path);
        std::vector<RecordEvaluation> evals = evaluate_records(records, corpus);
        ensure_dir(out_dir);
        write_file(std::filesystem::path(out_dir) / "evaluations.json",
                   serialize_evaluations(evals));

        std::size_t parsed = 0, evaluated = 0;
        for (const RecordEvaluation& ev : evals) {
            if (ev.validity == Validity::Parsed) ++parsed;
            if (ev.equivalence_rate) ++evaluated;
        }
        njson::ordered_json out;
        out["records"] = records.size();
        out["parsed"] = parsed;
        out["evaluated"] = evaluated;
        *out_json = dup_string(out.dump(2) + "\n");
    });
}

dmnkit_status dmnkit_pipe_report(const char* records_path,
                                 const char* evaluations_path_or_null,
                                 const char* model_dir, const char* article_dir,
                                 const char* srl_dir_or_null, const char* out_dir,
                                 char** out_json) {
    if (!records_path || !model_dir || !article_dir || !out_dir || !out_json)
        return usage_error("null argument");
    return guarded([&] {
        Corpus corpus = load_corpus_dirs(model_dir, article_dir, srl_dir_or_null);
        std::vector<RunRecord> records = load_run_records(records_path);
        std::vector<RecordEvaluation> evals =
            evaluations_path_or_null
                ? load_evaluations(read_file(evaluations_path_or_null))
                : evaluate_records(records, corpus);
        emit_report(corpus, records, evals, out_dir);

        njson::ordered_json out;
        njson::ordered_json files = njson::ordered_json::array();
        for (const char* name :
             {"table1_gold_stats.csv", "table2_similarity.csv", "table3_descriptive.csv",
              "table4_equivalence.csv", "table5_tertiles.csv",
              "table6_example_effects.csv", "run_health.csv", "gaps.txt"})
            files.push_back(name);
        out["files"] = files;
        njson::ordered_json gaps = njson::ordered_json::array();
        for (const std::string& line :
             split(read_file(std::filesystem::path(out_dir) / "gaps.txt"), '\n'))
            if (!line.empty()) gaps.push_back(line);
        out["gaps"] = gaps;
        *out_json = dup_string(out.dump(2) + "\n");
    });
}

}  // extern "C"
