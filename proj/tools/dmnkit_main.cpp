// Command-line front end. Everything model-related goes through the public C
// API in dmnkit.h; this file only does argument handling, file listing, and
// JSON plumbing.
#include <dmnkit.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using njson = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

int status_to_exit(dmnkit_status s) {
    if (s == DMNKIT_OK) return kExitOk;
    if (s == DMNKIT_E_USAGE) return kExitUsage;
    return kExitData;
}

int fail(dmnkit_status s) {
    std::cerr << "error: " << dmnkit_last_error() << "\n";
    return status_to_exit(s);
}

// Owning wrappers so early returns cannot leak C handles.
struct GraphDeleter {
    void operator()(dmnkit_graph* g) const { dmnkit_graph_free(g); }
};
using GraphPtr = std::unique_ptr<dmnkit_graph, GraphDeleter>;

struct StringDeleter {
    void operator()(char* s) const { dmnkit_string_free(s); }
};
using CStr = std::unique_ptr<char, StringDeleter>;

int load_graph(const std::string& path, GraphPtr& out) {
    dmnkit_graph* raw = nullptr;
    dmnkit_status s = dmnkit_graph_from_file(path.c_str(), &raw);
    if (s != DMNKIT_OK) return fail(s);
    out.reset(raw);
    return kExitOk;
}

int write_or_print(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::error_code ec;
    fs::path parent = fs::path(out_path).parent_path();
    if (!parent.empty()) fs::create_directories(parent, ec);
    std::ofstream f(out_path, std::ios::binary);
    f << text;
    if (!f) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitData;
    }
    return kExitOk;
}

std::string slurp(const std::string& path, bool& ok) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream buf;
    buf << f.rdbuf();
    ok = f.good() || f.eof();
    return buf.str();
}

std::vector<std::string> parse_conditions(const std::string& csv) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream stream(csv);
    while (std::getline(stream, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

const char* opt_or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

struct CorpusArgs {
    std::string models, articles, srl;
};

void add_corpus_options(CLI::App* cmd, CorpusArgs& args) {
    cmd->add_option("--models", args.models, "Directory of model XML/JSON files")
        ->required();
    cmd->add_option("--articles", args.articles, "Directory of legislation XML files")
        ->required();
    cmd->add_option("--srl", args.srl, "Directory of SRL annotation files");
}

int run_ingest(const CorpusArgs& corpus, const std::string& out_dir, bool strict) {
    CStr summary;
    char* raw = nullptr;
    dmnkit_status s = dmnkit_pipe_ingest(corpus.models.c_str(), corpus.articles.c_str(),
                                         opt_or_null(corpus.srl), opt_or_null(out_dir), &raw);
    if (s != DMNKIT_OK) return fail(s);
    summary.reset(raw);
    std::cout << summary.get();
    if (strict) {
        njson doc = njson::parse(summary.get());
        if (!doc["errors"].empty()) {
            std::cerr << "error: corpus has " << doc["errors"].size() << " load errors\n";
            return kExitData;
        }
    }
    return kExitOk;
}

int run_generate(const CorpusArgs& corpus, const std::string& prompts,
                 const std::string& out_dir, const std::string& conditions_csv, int runs,
                 unsigned long long seed, const std::string& provider, int concurrency) {
    ojson opts;
    opts["model_dir"] = corpus.models;
    opts["article_dir"] = corpus.articles;
    if (!corpus.srl.empty()) opts["srl_dir"] = corpus.srl;
    opts["prompts_dir"] = prompts;
    opts["out_dir"] = out_dir;
    if (!conditions_csv.empty()) opts["conditions"] = parse_conditions(conditions_csv);
    opts["runs"] = runs;
    opts["seed"] = seed;
    opts["provider"] = provider;
    opts["concurrency"] = concurrency;

    CStr summary;
    char* raw = nullptr;
    dmnkit_status s = dmnkit_pipe_generate(opts.dump().c_str(), &raw);
    if (s != DMNKIT_OK) return fail(s);
    summary.reset(raw);
    std::cout << summary.get();
    return kExitOk;
}

int run_analyze(const CorpusArgs& corpus, const std::string& records,
                const std::string& out_dir) {
    CStr summary;
    char* raw = nullptr;
    dmnkit_status s =
        dmnkit_pipe_analyze(records.c_str(), corpus.models.c_str(), corpus.articles.c_str(),
                            opt_or_null(corpus.srl), out_dir.c_str(), &raw);
    if (s != DMNKIT_OK) return fail(s);
    summary.reset(raw);
    std::cout << summary.get();
    return kExitOk;
}

int run_report(const CorpusArgs& corpus, const std::string& records,
               const std::string& evaluations, const std::string& out_dir) {
    CStr summary;
    char* raw = nullptr;
    dmnkit_status s = dmnkit_pipe_report(records.c_str(), opt_or_null(evaluations),
                                         corpus.models.c_str(), corpus.articles.c_str(),
                                         opt_or_null(corpus.srl), out_dir.c_str(), &raw);
    if (s != DMNKIT_OK) return fail(s);
    summary.reset(raw);
    std::cout << summary.get();
    return kExitOk;
}

// Per-model profiles for the reproduce chain, built from the canonical model
// files ingest wrote.
int profile_models(const fs::path& canonical_dir, const fs::path& out_dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(canonical_dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    ojson simplify_profile = ojson::array();
    ojson cases_profile = ojson::array();
    for (const fs::path& file : files) {
        GraphPtr g;
        int rc = load_graph(file.string(), g);
        if (rc != kExitOk) return rc;

        dmnkit_graph* simplified_raw = nullptr;
        char* report_raw = nullptr;
        dmnkit_status s = dmnkit_graph_simplify(g.get(), &simplified_raw, &report_raw);
        if (s != DMNKIT_OK) return fail(s);
        GraphPtr simplified(simplified_raw);
        CStr report(report_raw);
        ojson entry = ojson::parse(report.get());
        entry["model"] = file.stem().string();
        simplify_profile.push_back(std::move(entry));

        char* cases_raw = nullptr;
        s = dmnkit_graph_cases(g.get(), &cases_raw);
        if (s != DMNKIT_OK) return fail(s);
        CStr cases(cases_raw);
        njson full = njson::parse(cases.get());
        ojson row;
        row["model"] = file.stem().string();
        row["eligible"] = full["eligible"];
        row["reason"] = full["reason"];
        row["case_count"] = full["case_count"];
        cases_profile.push_back(std::move(row));
    }

    int rc = write_or_print(simplify_profile.dump(2) + "\n",
                            (out_dir / "simplify_profile.json").string());
    if (rc != kExitOk) return rc;
    return write_or_print(cases_profile.dump(2) + "\n",
                          (out_dir / "cases_profile.json").string());
}

int run_reproduce(const CorpusArgs& corpus, const std::string& prompts,
                  const std::string& out_dir, const std::string& conditions_csv, int runs,
                  unsigned long long seed, const std::string& provider, int concurrency) {
    fs::path out(out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);

    // 1. ingest: canonical model JSON plus the load summary
    CStr ingest_summary;
    {
        char* raw = nullptr;
        std::string canonical = (out / "canonical").string();
        dmnkit_status s =
            dmnkit_pipe_ingest(corpus.models.c_str(), corpus.articles.c_str(),
                               opt_or_null(corpus.srl), canonical.c_str(), &raw);
        if (s != DMNKIT_OK) return fail(s);
        ingest_summary.reset(raw);
        int rc = write_or_print(ingest_summary.get(), (out / "ingest.json").string());
        if (rc != kExitOk) return rc;
        njson doc = njson::parse(ingest_summary.get());
        if (!doc["errors"].empty()) {
            std::cerr << "error: corpus has load errors; see " << (out / "ingest.json")
                      << "\n";
            return kExitData;
        }
    }

    // 2. corpus statistics
    {
        char* raw = nullptr;
        dmnkit_status s = dmnkit_pipe_stats(corpus.models.c_str(), corpus.articles.c_str(),
                                            opt_or_null(corpus.srl), &raw);
        if (s != DMNKIT_OK) return fail(s);
        CStr stats(raw);
        int rc = write_or_print(stats.get(), (out / "stats.json").string());
        if (rc != kExitOk) return rc;
    }

    // 3 + 4. simplification and test-case profiles per model
    {
        int rc = profile_models(out / "canonical" / "compact", out);
        if (rc != kExitOk) return rc;
    }

    // 5. generation experiment (stub provider unless configured otherwise)
    {
        int rc = run_generate(corpus, prompts, (out / "experiment").string(),
                              conditions_csv, runs, seed, provider, concurrency);
        if (rc != kExitOk) return rc;
    }

    // 6. evaluation incl. outcome equivalence per record
    std::string records = (out / "experiment" / "records.jsonl").string();
    {
        char* raw = nullptr;
        dmnkit_status s =
            dmnkit_pipe_analyze(records.c_str(), corpus.models.c_str(),
                                corpus.articles.c_str(), opt_or_null(corpus.srl),
                                out.string().c_str(), &raw);
        if (s != DMNKIT_OK) return fail(s);
        CStr summary(raw);
        int rc = write_or_print(summary.get(), (out / "analyze.json").string());
        if (rc != kExitOk) return rc;
    }

    // 7. report tables
    {
        char* raw = nullptr;
        std::string evals = (out / "evaluations.json").string();
        std::string report_dir = (out / "report").string();
        dmnkit_status s = dmnkit_pipe_report(records.c_str(), evals.c_str(),
                                             corpus.models.c_str(), corpus.articles.c_str(),
                                             opt_or_null(corpus.srl), report_dir.c_str(),
                                             &raw);
        if (s != DMNKIT_OK) return fail(s);
        CStr summary(raw);
        int rc = write_or_print(summary.get(), (out / "report_summary.json").string());
        if (rc != kExitOk) return rc;
    }

    std::cout << "reproduce: artifacts under " << out.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dmnkit: canonicalize, execute, and evaluate legal decision models"};
    app.require_subcommand(1);

    // ingest
    CorpusArgs ingest_corpus;
    std::string ingest_out;
    bool ingest_strict = false;
    CLI::App* ingest = app.add_subcommand("ingest", "Load a corpus and write canonical JSON");
    add_corpus_options(ingest, ingest_corpus);
    ingest->add_option("--out", ingest_out, "Directory for canonical model JSON");
    ingest->add_flag("--strict", ingest_strict, "Fail when any model or article fails to load");

    // validate
    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "Check a compact model document");
    validate->add_option("model", validate_path, "Model JSON file")->required();

    // exec
    std::string exec_path, exec_assign, exec_assign_file, exec_out;
    bool exec_strict = false;
    CLI::App* exec_cmd = app.add_subcommand("exec", "Execute a model on one assignment");
    exec_cmd->add_option("model", exec_path, "Model JSON file")->required();
    exec_cmd->add_option("--assign", exec_assign, "Assignment as inline JSON object");
    exec_cmd->add_option("--assign-file", exec_assign_file, "Assignment JSON file");
    exec_cmd->add_flag("--strict", exec_strict, "Every input must be assigned");
    exec_cmd->add_option("--out", exec_out, "Write the result here instead of stdout");

    // simplify
    std::string simplify_path, simplify_out, simplify_report;
    CLI::App* simplify = app.add_subcommand("simplify", "Eliminate identity decision nodes");
    simplify->add_option("model", simplify_path, "Model JSON file")->required();
    simplify->add_option("--out", simplify_out, "Write the simplified model here");
    simplify->add_option("--report", simplify_report, "Write the elimination report here");

    // stats
    CorpusArgs stats_corpus;
    std::string stats_out;
    CLI::App* stats = app.add_subcommand("stats", "Descriptive statistics over a corpus");
    add_corpus_options(stats, stats_corpus);
    stats->add_option("--out", stats_out, "Write the statistics here instead of stdout");

    // kernel
    std::string kernel_a, kernel_b;
    unsigned long long kernel_seed = 0;
    CLI::App* kernel = app.add_subcommand("kernel", "Structural similarity of two models");
    kernel->add_option("first", kernel_a, "Model JSON file")->required();
    kernel->add_option("second", kernel_b, "Model JSON file")->required();
    kernel->add_option("--seed", kernel_seed, "Graphlet sampling seed (0 keeps the default)");

    // gen-cases
    std::string cases_path, cases_out;
    CLI::App* cases = app.add_subcommand("gen-cases", "Exhaustive test inputs for a model");
    cases->add_option("model", cases_path, "Model JSON file")->required();
    cases->add_option("--out", cases_out, "Write the case suite here instead of stdout");

    // equivalence
    std::string eq_gold, eq_cand, eq_keywords, eq_out;
    CLI::App* eq = app.add_subcommand("equivalence", "Outcome equivalence of two models");
    eq->add_option("gold", eq_gold, "Gold model JSON file")->required();
    eq->add_option("candidate", eq_cand, "Candidate model JSON file")->required();
    eq->add_option("--keywords", eq_keywords, "Keyword config for outcome classification");
    eq->add_option("--out", eq_out, "Write the result here instead of stdout");

    // generate
    CorpusArgs gen_corpus;
    std::string gen_prompts, gen_out, gen_conditions, gen_provider = "stub";
    int gen_runs = 5, gen_concurrency = 4;
    unsigned long long gen_seed = 1;
    bool gen_stub = false;
    CLI::App* gen = app.add_subcommand("generate", "Run the generation experiment");
    add_corpus_options(gen, gen_corpus);
    gen->add_option("--prompts", gen_prompts, "Prompt template directory")->required();
    gen->add_option("--out", gen_out, "Experiment output directory")->required();
    gen->add_option("--conditions", gen_conditions,
                    "Comma-separated conditions (default: all four)");
    gen->add_option("--runs", gen_runs, "Runs per (model, condition)");
    gen->add_option("--seed", gen_seed, "Example-selection seed");
    gen->add_option("--provider", gen_provider, "'stub' or a provider config path");
    gen->add_option("--concurrency", gen_concurrency, "Parallel provider requests");
    gen->add_flag("--stub", gen_stub, "Force the deterministic stub provider");

    // analyze
    CorpusArgs an_corpus;
    std::string an_records, an_out;
    CLI::App* analyze = app.add_subcommand("analyze", "Evaluate run records against gold");
    add_corpus_options(analyze, an_corpus);
    analyze->add_option("--records", an_records, "records.jsonl from generate")->required();
    analyze->add_option("--out", an_out, "Directory for evaluations.json")->required();

    // report
    CorpusArgs rep_corpus;
    std::string rep_records, rep_evals, rep_out;
    CLI::App* report = app.add_subcommand("report", "Emit the CSV report tables");
    add_corpus_options(report, rep_corpus);
    report->add_option("--records", rep_records, "records.jsonl from generate")->required();
    report->add_option("--evaluations", rep_evals,
                       "evaluations.json from analyze (recomputed when absent)");
    report->add_option("--out", rep_out, "Report output directory")->required();

    // reproduce
    CorpusArgs rp_corpus;
    std::string rp_prompts, rp_out, rp_conditions, rp_provider = "stub";
    int rp_runs = 5, rp_concurrency = 4;
    unsigned long long rp_seed = 1;
    bool rp_stub = false;
    CLI::App* reproduce =
        app.add_subcommand("reproduce", "Full pipeline: ingest through report");
    add_corpus_options(reproduce, rp_corpus);
    reproduce->add_option("--prompts", rp_prompts, "Prompt template directory")->required();
    reproduce->add_option("--out", rp_out, "Output directory for all artifacts")->required();
    reproduce->add_option("--conditions", rp_conditions,
                          "Comma-separated conditions (default: all four)");
    reproduce->add_option("--runs", rp_runs, "Runs per (model, condition)");
    reproduce->add_option("--seed", rp_seed, "Example-selection seed");
    reproduce->add_option("--provider", rp_provider, "'stub' or a provider config path");
    reproduce->add_option("--concurrency", rp_concurrency, "Parallel provider requests");
    reproduce->add_flag("--stub", rp_stub, "Force the deterministic stub provider");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (ingest->parsed()) return run_ingest(ingest_corpus, ingest_out, ingest_strict);

    if (validate->parsed()) {
        GraphPtr g;
        int rc = load_graph(validate_path, g);
        if (rc != kExitOk) return rc;
        char* raw = nullptr;
        dmnkit_status s = dmnkit_graph_validate(g.get(), &raw);
        if (s != DMNKIT_OK) return fail(s);
        CStr report_json(raw);
        std::cout << report_json.get();
        return njson::parse(report_json.get())["ok"].get<bool>() ? kExitOk : kExitData;
    }

    if (exec_cmd->parsed()) {
        if (exec_assign.empty() == exec_assign_file.empty()) {
            std::cerr << "error: pass exactly one of --assign or --assign-file\n";
            return kExitUsage;
        }
        std::string assignment = exec_assign;
        if (!exec_assign_file.empty()) {
            bool ok = false;
            assignment = slurp(exec_assign_file, ok);
            if (!ok) {
                std::cerr << "error: cannot read " << exec_assign_file << "\n";
                return kExitData;
            }
        }
        GraphPtr g;
        int rc = load_graph(exec_path, g);
        if (rc != kExitOk) return rc;
        char* raw = nullptr;
        dmnkit_status s =
            dmnkit_graph_execute(g.get(), assignment.c_str(), exec_strict ? 1 : 0, &raw);
        if (s != DMNKIT_OK) return fail(s);
        CStr result(raw);
        return write_or_print(result.get(), exec_out);
    }

    if (simplify->parsed()) {
        GraphPtr g;
        int rc = load_graph(simplify_path, g);
        if (rc != kExitOk) return rc;
        dmnkit_graph* simplified_raw = nullptr;
        char* report_raw = nullptr;
        dmnkit_status s = dmnkit_graph_simplify(g.get(), &simplified_raw, &report_raw);
        if (s != DMNKIT_OK) return fail(s);
        GraphPtr simplified(simplified_raw);
        CStr report_json(report_raw);
        char* model_raw = nullptr;
        s = dmnkit_graph_serialize(simplified.get(), &model_raw);
        if (s != DMNKIT_OK) return fail(s);
        CStr model_json(model_raw);
        rc = write_or_print(model_json.get(), simplify_out);
        if (rc != kExitOk) return rc;
        if (!simplify_report.empty())
            return write_or_print(report_json.get(), simplify_report);
        if (!simplify_out.empty()) std::cout << report_json.get();
        return kExitOk;
    }

    if (stats->parsed()) {
        char* raw = nullptr;
        dmnkit_status s = dmnkit_pipe_stats(stats_corpus.models.c_str(),
                                            stats_corpus.articles.c_str(),
                                            opt_or_null(stats_corpus.srl), &raw);
        if (s != DMNKIT_OK) return fail(s);
        CStr summary(raw);
        return write_or_print(summary.get(), stats_out);
    }

    if (kernel->parsed()) {
        GraphPtr a, b;
        int rc = load_graph(kernel_a, a);
        if (rc != kExitOk) return rc;
        rc = load_graph(kernel_b, b);
        if (rc != kExitOk) return rc;
        double sp = 0, graphlet = 0;
        dmnkit_status s = dmnkit_sp_similarity(a.get(), b.get(), &sp);
        if (s != DMNKIT_OK) return fail(s);
        s = dmnkit_graphlet_similarity(a.get(), b.get(), kernel_seed, &graphlet);
        if (s != DMNKIT_OK) return fail(s);
        ojson out;
        out["sp"] = sp;
        out["graphlet"] = graphlet;
        std::cout << out.dump(2) << "\n";
        return kExitOk;
    }

    if (cases->parsed()) {
        GraphPtr g;
        int rc = load_graph(cases_path, g);
        if (rc != kExitOk) return rc;
        char* raw = nullptr;
        dmnkit_status s = dmnkit_graph_cases(g.get(), &raw);
        if (s != DMNKIT_OK) return fail(s);
        CStr result(raw);
        return write_or_print(result.get(), cases_out);
    }

    if (eq->parsed()) {
        GraphPtr gold, cand;
        int rc = load_graph(eq_gold, gold);
        if (rc != kExitOk) return rc;
        rc = load_graph(eq_cand, cand);
        if (rc != kExitOk) return rc;
        char* raw = nullptr;
        dmnkit_status s = dmnkit_graph_equivalence(gold.get(), cand.get(),
                                                   opt_or_null(eq_keywords), &raw);
        if (s != DMNKIT_OK) return fail(s);
        CStr result(raw);
        return write_or_print(result.get(), eq_out);
    }

    if (gen->parsed())
        return run_generate(gen_corpus, gen_prompts, gen_out, gen_conditions, gen_runs,
                            gen_seed, gen_stub ? "stub" : gen_provider, gen_concurrency);

    if (analyze->parsed()) return run_analyze(an_corpus, an_records, an_out);

    if (report->parsed()) return run_report(rep_corpus, rep_records, rep_evals, rep_out);

    if (reproduce->parsed())
        return run_reproduce(rp_corpus, rp_prompts, rp_out, rp_conditions, rp_runs, rp_seed,
                             rp_stub ? "stub" : rp_provider, rp_concurrency);

    std::cerr << "error: no subcommand\n";
    return kExitUsage;
}
