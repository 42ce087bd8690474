#include "genharness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <regex>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "compact_json.hpp"
#include "errors.hpp"
#include "outcome_eval.hpp"
#include "util.hpp"

namespace dmnkit {

namespace njson = nlohmann;
namespace fs = std::filesystem;

const char* to_string(Condition c) {
    switch (c) {
        case Condition::Text: return "Text";
        case Condition::TextSrl: return "TextSrl";
        case Condition::TextIo: return "TextIo";
        case Condition::TextSrlIo: return "TextSrlIo";
    }
    return "?";
}

std::optional<Condition> parse_condition(std::string_view s) {
    std::string lowered = to_lower(trim(s));
    if (lowered == "text") return Condition::Text;
    if (lowered == "textsrl") return Condition::TextSrl;
    if (lowered == "textio") return Condition::TextIo;
    if (lowered == "textsrlio") return Condition::TextSrlIo;
    return std::nullopt;
}

const std::vector<Condition>& all_conditions() {
    static const std::vector<Condition> kAll = {Condition::Text, Condition::TextSrl,
                                                Condition::TextIo, Condition::TextSrlIo};
    return kAll;
}

bool condition_has_srl(Condition c) {
    return c == Condition::TextSrl || c == Condition::TextSrlIo;
}

bool condition_has_io(Condition c) {
    return c == Condition::TextIo || c == Condition::TextSrlIo;
}

IoSpecification build_io_spec(const DecisionGraph& g) {
    IoSpecification spec;
    std::vector<const Node*> inputs;
    for (const Node& n : g.nodes)
        if (n.kind == NodeKind::InputVariable) inputs.push_back(&n);
    std::sort(inputs.begin(), inputs.end(),
              [](const Node* a, const Node* b) { return a->id < b->id; });

    std::set<std::string> seen;
    for (const Node* n : inputs) {
        if (!n->value_type)
            throw SchemaError("nodes", "input '" + n->id + "' has no value type");
        if (!seen.insert(n->name).second)
            throw SchemaError("nodes", "duplicate input name '" + n->name + "'");
        spec.inputs.push_back(IoPort{n->name, *n->value_type});
    }

    const Node* out = g.find_node(g.output_node_id);
    if (!out) throw SchemaError("output_node", "unknown node '" + g.output_node_id + "'");
    spec.output_name = out->name;
    if (g.model_type == ModelType::Requirements) {
        spec.output_type = ValueType::Boolean;
    } else {
        spec.output_type = ValueType::String;
        spec.output_values = {
            to_string(OutcomeClass::NotApplicable),
            to_string(OutcomeClass::PermitRequired),
            to_string(OutcomeClass::GeneralRulesApply),
            to_string(OutcomeClass::NotificationRequired),
        };
    }
    return spec;
}

ExampleSelection select_examples(const ModelBundle& target, const Corpus& corpus, int runs,
                                 std::uint64_t seed) {
    std::size_t others = 0, typed = 0, with_articles = 0;
    std::vector<std::string> eligible;  // corpus order is ascending id
    for (const ModelBundle& b : corpus.bundles) {
        if (b.graph.id == target.graph.id) continue;
        ++others;
        if (b.graph.model_type != target.graph.model_type) continue;
        ++typed;
        if (b.article_ids.size() < 3) continue;
        ++with_articles;
        if (b.graph.nodes.size() < 3) continue;
        eligible.push_back(b.graph.id);
    }

    if (eligible.empty()) {
        std::string reason;
        if (others == 0)
            reason = "the corpus has no other models";
        else if (typed == 0)
            reason = std::string("no other model has model type ") +
                     to_string(target.graph.model_type);
        else if (with_articles == 0)
            reason = "no candidate has at least 3 linked articles";
        else
            reason = "no candidate has at least 3 nodes";
        throw std::runtime_error("example selection for target '" + target.graph.id +
                                 "': " + reason);
    }

    ExampleSelection sel;
    sel.pool_size = eligible.size();
    if (runs <= 0) return sel;

    std::mt19937_64 rng(seed ^ fnv1a64(target.graph.id));
    std::size_t n = eligible.size();
    if (n >= static_cast<std::size_t>(runs)) {
        for (std::size_t i = 0; i < static_cast<std::size_t>(runs); ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, n - 1);
            std::swap(eligible[i], eligible[pick(rng)]);
            sel.ids.push_back(eligible[i]);
        }
    } else {
        sel.with_replacement = true;
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (int r = 0; r < runs; ++r) sel.ids.push_back(eligible[pick(rng)]);
    }
    return sel;
}

PromptTemplates load_templates(const std::string& dir) {
    fs::path base(dir);
    PromptTemplates t;
    t.system_text = read_file(base / "system.txt");
    t.user_text = read_file(base / "user.txt");
    t.version = trim(read_file(base / "VERSION"));
    if (t.version.empty())
        throw IoError("template VERSION file is empty: " + (base / "VERSION").string());
    return t;
}

namespace {

std::string rstrip(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' '))
        s.pop_back();
    return s;
}

std::string render_articles(const ModelBundle& bundle) {
    if (bundle.articles.empty()) return "(no linked articles were resolved)\n";
    std::string out;
    for (const LegalArticle& a : bundle.articles) {
        out += "### Artikel " + a.id + ": " + a.title + "\n\n";
        out += a.body_text + "\n";
        if (!a.recital_text.empty()) out += "\nToelichting: " + a.recital_text + "\n";
        out += "\n";
    }
    return rstrip(out) + "\n";
}

std::string join_list(const std::vector<std::string>& items) {
    if (items.empty()) return "(none)";
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += "; ";
        out += items[i];
    }
    return out;
}

std::string render_srl_block(const SrlAnnotations& srl) {
    std::string out = "## Semantic roles in the target articles\n";
    out += "Actors: " + join_list(srl.actors) + "\n";
    out += "Actions: " + join_list(srl.actions) + "\n";
    out += "Objects: " + join_list(srl.objects) + "\n";
    out += "Recipients: " + join_list(srl.recipients) + "\n\n";
    return out;
}

std::string render_io_block(const IoSpecification& spec) {
    std::string out = "## Required interface\nInputs:\n";
    if (spec.inputs.empty()) out += "- (none)\n";
    for (const IoPort& p : spec.inputs)
        out += "- " + p.name + ": " + to_string(p.type) + "\n";
    out += "Output:\n- " + spec.output_name + ": ";
    if (spec.output_values.empty()) {
        out += to_string(spec.output_type);
    } else {
        out += "one of ";
        for (std::size_t i = 0; i < spec.output_values.size(); ++i) {
            if (i) out += ", ";
            out += spec.output_values[i];
        }
    }
    out += "\n\n";
    return out;
}

std::string substitute(const std::string& tpl, const std::map<std::string, std::string>& vars,
                       const char* which) {
    static const std::regex placeholder(R"(\{\{([A-Za-z_]+)\}\})");
    std::string out;
    out.reserve(tpl.size());
    auto begin = std::sregex_iterator(tpl.begin(), tpl.end(), placeholder);
    auto end = std::sregex_iterator();
    std::size_t last = 0;
    for (auto it = begin; it != end; ++it) {
        const std::smatch& m = *it;
        std::string name = m[1].str();
        auto found = vars.find(name);
        if (found == vars.end())
            throw TemplateError(name, std::string("unresolved template variable '") + name +
                                          "' in " + which + " template");
        out.append(tpl, last, static_cast<std::size_t>(m.position()) - last);
        out += found->second;
        last = static_cast<std::size_t>(m.position() + m.length());
    }
    out.append(tpl, last, tpl.size() - last);
    return out;
}

}  // namespace

Prompt build_prompt(Condition c, const ModelBundle& target, const ModelBundle& example,
                    const PromptTemplates& tpl) {
    Prompt p;

    std::string srl_block;
    if (condition_has_srl(c)) {
        bool has_content = target.srl &&
                           !(target.srl->actors.empty() && target.srl->actions.empty() &&
                             target.srl->objects.empty() && target.srl->recipients.empty());
        if (has_content)
            srl_block = render_srl_block(*target.srl);
        else
            p.srl_flagged = true;
    }

    std::string io_block;
    if (condition_has_io(c)) io_block = render_io_block(build_io_spec(target.graph));

    std::map<std::string, std::string> vars = {
        {"example_articles", render_articles(example)},
        {"example_graph", rstrip(serialize_graph(example.graph))},
        {"target_articles", render_articles(target)},
        {"srl_block", srl_block},
        {"io_block", io_block},
    };

    p.system_text = substitute(tpl.system_text, vars, "system");
    p.user_text = substitute(tpl.user_text, vars, "user");
    p.hash = sha256_hex(p.system_text + '\0' + p.user_text + '\0' + tpl.version);
    return p;
}

const char* to_string(Validity v) {
    switch (v) {
        case Validity::Parsed: return "Parsed";
        case Validity::SchemaError: return "SchemaError";
        case Validity::ValidationError: return "ValidationError";
        case Validity::ProviderError: return "ProviderError";
    }
    return "?";
}

std::optional<Validity> parse_validity(std::string_view s) {
    if (s == "Parsed") return Validity::Parsed;
    if (s == "SchemaError") return Validity::SchemaError;
    if (s == "ValidationError") return Validity::ValidationError;
    if (s == "ProviderError") return Validity::ProviderError;
    return std::nullopt;
}

ParsedGeneration parse_generation(const std::string& raw) {
    ParsedGeneration out;
    std::string body = first_fenced_block(raw).value_or(raw);
    DecisionGraph g;
    try {
        g = deserialize_graph(body);
    } catch (const SchemaError& e) {
        out.validity = Validity::SchemaError;
        out.detail = e.what();
        return out;
    }
    ValidationReport report = validate_graph(g);
    if (!report.ok()) {
        out.validity = Validity::ValidationError;
        out.detail = report.to_string();
        return out;
    }
    out.validity = Validity::Parsed;
    out.graph = std::move(g);
    return out;
}

std::string record_key(const std::string& target, Condition c, int run) {
    return target + "|" + to_string(c) + "|" + std::to_string(run);
}

std::string record_key(const RunRecord& r) {
    return record_key(r.target_model_id, r.condition, r.run_index);
}

std::string serialize_record(const RunRecord& r) {
    njson::ordered_json j;
    j["target"] = r.target_model_id;
    j["condition"] = to_string(r.condition);
    j["run"] = r.run_index;
    j["example"] = r.example_model_id;
    j["with_replacement"] = r.example_with_replacement;
    j["prompt_hash"] = r.prompt_hash;
    j["validity"] = to_string(r.validity);
    j["detail"] = r.detail;
    j["attempts"] = r.attempts;
    j["latency_ms"] = r.latency_ms;
    j["prompt_tokens"] = r.prompt_tokens;
    j["completion_tokens"] = r.completion_tokens;
    j["raw_response"] = r.raw_response;
    if (r.parsed_graph)
        j["graph"] = njson::ordered_json::parse(serialize_graph(*r.parsed_graph));
    else
        j["graph"] = nullptr;
    return j.dump();
}

RunRecord deserialize_record(const std::string& line) {
    njson::json j;
    try {
        j = njson::json::parse(line);
    } catch (const njson::json::parse_error& e) {
        throw SchemaError("$", std::string("invalid record JSON: ") + e.what());
    }
    RunRecord r;
    try {
        r.target_model_id = j.at("target").get<std::string>();
        std::optional<Condition> c = parse_condition(j.at("condition").get<std::string>());
        if (!c) throw SchemaError("condition", "unknown condition");
        r.condition = *c;
        r.run_index = j.at("run").get<int>();
        r.example_model_id = j.at("example").get<std::string>();
        r.example_with_replacement = j.at("with_replacement").get<bool>();
        r.prompt_hash = j.at("prompt_hash").get<std::string>();
        std::optional<Validity> v = parse_validity(j.at("validity").get<std::string>());
        if (!v) throw SchemaError("validity", "unknown validity");
        r.validity = *v;
        r.detail = j.at("detail").get<std::string>();
        r.attempts = j.at("attempts").get<int>();
        r.latency_ms = j.at("latency_ms").get<long long>();
        r.prompt_tokens = j.at("prompt_tokens").get<int>();
        r.completion_tokens = j.at("completion_tokens").get<int>();
        r.raw_response = j.at("raw_response").get<std::string>();
        if (!j.at("graph").is_null()) r.parsed_graph = deserialize_graph(j["graph"].dump());
    } catch (const njson::json::exception& e) {
        throw SchemaError("$", std::string("bad record field: ") + e.what());
    }
    return r;
}

std::vector<RunRecord> load_run_records(const std::string& path) {
    std::vector<RunRecord> out;
    if (!fs::exists(path)) return out;
    for (const std::string& line : split(read_file(path), '\n')) {
        if (trim(line).empty()) continue;
        out.push_back(deserialize_record(line));
    }
    return out;
}

namespace {

const ModelBundle* find_bundle_by_id(const Corpus& corpus, const std::string& id) {
    for (const ModelBundle& b : corpus.bundles)
        if (b.graph.id == id) return &b;
    return nullptr;
}

struct PendingTask {
    const ModelBundle* target = nullptr;
    const ModelBundle* example = nullptr;  // null when selection failed
    Condition condition = Condition::Text;
    int run = 0;
    bool with_replacement = false;
    std::string example_id;
    std::string failure;  // nonempty when the record is decided already
};

RunRecord execute_task(const PendingTask& t, Provider& provider, const ProviderConfig& pcfg,
                       const PromptTemplates& tpl) {
    RunRecord r;
    r.target_model_id = t.target->graph.id;
    r.condition = t.condition;
    r.run_index = t.run;
    r.example_model_id = t.example_id;
    r.example_with_replacement = t.with_replacement;

    if (!t.failure.empty() || !t.example) {
        r.validity = Validity::ProviderError;
        r.detail = t.failure.empty() ? "example model not found in corpus" : t.failure;
        return r;
    }

    Prompt prompt = build_prompt(t.condition, *t.target, *t.example, tpl);
    r.prompt_hash = prompt.hash;
    try {
        ProviderResult res =
            request_generation(provider, pcfg, prompt.system_text, prompt.user_text);
        r.attempts = res.attempts;
        r.latency_ms = res.latency_ms;
        r.prompt_tokens = res.prompt_tokens;
        r.completion_tokens = res.completion_tokens;
        r.raw_response = res.text;
        ParsedGeneration parsed = parse_generation(res.text);
        r.validity = parsed.validity;
        r.detail = parsed.detail;
        r.parsed_graph = std::move(parsed.graph);
    } catch (const ProviderError& e) {
        r.validity = Validity::ProviderError;
        r.detail = e.what();
        r.attempts = e.attempts();
    }
    return r;
}

void check_or_write_meta(const fs::path& meta_path, const ExperimentPlan& plan,
                         const ProviderConfig& pcfg, const PromptTemplates& tpl) {
    njson::ordered_json meta;
    meta["seed"] = plan.seed;
    meta["runs"] = plan.runs;
    njson::ordered_json conds = njson::ordered_json::array();
    for (Condition c : plan.conditions) conds.push_back(to_string(c));
    meta["conditions"] = conds;
    meta["template_version"] = tpl.version;
    meta["model"] = pcfg.model;

    if (fs::exists(meta_path)) {
        njson::json existing = njson::json::parse(read_file(meta_path));
        if (njson::json(meta) != existing)
            throw IoError("experiment directory " + meta_path.parent_path().string() +
                          " was created with different parameters; use a fresh --out");
        return;
    }
    write_file(meta_path, meta.dump(2) + "\n");
}

}  // namespace

ExperimentSummary run_experiment(const Corpus& corpus, const ExperimentPlan& plan,
                                 Provider& provider, const ProviderConfig& provider_cfg,
                                 const PromptTemplates& tpl) {
    if (plan.out_dir.empty()) throw IoError("experiment plan needs an output directory");
    if (plan.runs < 1) throw IoError("experiment plan needs at least one run");
    fs::path out(plan.out_dir);
    ensure_dir(out);
    fs::path records_path = out / "records.jsonl";
    fs::path manifest_path = out / "manifest.txt";
    check_or_write_meta(out / "meta.json", plan, provider_cfg, tpl);

    std::set<std::string> done;
    if (fs::exists(manifest_path))
        for (const std::string& line : split(read_file(manifest_path), '\n'))
            if (!trim(line).empty()) done.insert(trim(line));

    ExperimentSummary summary;
    summary.total_keys = corpus.bundles.size() * plan.conditions.size() *
                         static_cast<std::size_t>(plan.runs);

    std::vector<PendingTask> pending;
    for (const ModelBundle& target : corpus.bundles) {
        ExampleSelection sel;
        std::string selection_failure;
        try {
            sel = select_examples(target, corpus, plan.runs, plan.seed);
        } catch (const std::runtime_error& e) {
            selection_failure = std::string("example selection: ") + e.what();
        }
        for (Condition c : plan.conditions) {
            for (int run = 0; run < plan.runs; ++run) {
                if (done.count(record_key(target.graph.id, c, run))) {
                    ++summary.skipped_existing;
                    continue;
                }
                PendingTask t;
                t.target = &target;
                t.condition = c;
                t.run = run;
                t.failure = selection_failure;
                if (selection_failure.empty()) {
                    t.example_id = sel.ids[static_cast<std::size_t>(run)];
                    t.with_replacement = sel.with_replacement;
                    t.example = find_bundle_by_id(corpus, t.example_id);
                }
                pending.push_back(t);
            }
        }
    }

    std::ofstream records_out(records_path, std::ios::app | std::ios::binary);
    std::ofstream manifest_out(manifest_path, std::ios::app | std::ios::binary);
    if (!records_out || !manifest_out)
        throw IoError("cannot open experiment outputs under " + plan.out_dir);

    std::size_t workers = plan.concurrency < 1 ? 1 : static_cast<std::size_t>(plan.concurrency);
    for (std::size_t base = 0; base < pending.size(); base += workers) {
        std::size_t count = std::min(workers, pending.size() - base);
        std::vector<std::future<RunRecord>> futures;
        futures.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            const PendingTask& t = pending[base + i];
            if (count == 1) {
                std::promise<RunRecord> ready;
                ready.set_value(execute_task(t, provider, provider_cfg, tpl));
                futures.push_back(ready.get_future());
            } else {
                futures.push_back(std::async(std::launch::async, [&t, &provider, &provider_cfg,
                                                                  &tpl] {
                    return execute_task(t, provider, provider_cfg, tpl);
                }));
            }
        }
        for (std::size_t i = 0; i < count; ++i) {
            RunRecord r = futures[i].get();
            records_out << serialize_record(r) << '\n';
            manifest_out << record_key(r) << '\n';
            records_out.flush();
            manifest_out.flush();
            ++summary.completed_now;
        }
    }
    records_out.close();
    manifest_out.close();

    summary.records = load_run_records(records_path.string());
    for (const RunRecord& r : summary.records) ++summary.validity_counts[to_string(r.validity)];
    return summary;
}

}  // namespace dmnkit
