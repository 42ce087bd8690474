#include "analytics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "simplify.hpp"
#include "util.hpp"

namespace dmnkit {

namespace njson = nlohmann;

namespace {

bool is_terminator(char c) { return c == '.' || c == '?' || c == '!'; }

std::size_t word_count(std::string_view text) {
    std::size_t words = 0;
    bool in_word = false;
    for (char c : text) {
        bool space = std::isspace(static_cast<unsigned char>(c));
        if (!space && !in_word) ++words;
        in_word = !space;
    }
    return words;
}

// Act prefix of an article id ("bal-2.11" -> "bal"); no dash means the id
// carries no act and is treated as internal.
std::string act_of(const std::string& article_id) {
    std::size_t dash = article_id.find('-');
    return dash == std::string::npos ? std::string() : article_id.substr(0, dash);
}

}  // namespace

TextFeatures text_features(const std::vector<LegalArticle>& articles) {
    TextFeatures f;
    std::size_t total_words_in_sentences = 0;
    for (const LegalArticle& a : articles) {
        const std::string& body = a.body_text;
        std::size_t start = 0;
        for (std::size_t i = 0; i < body.size(); ++i) {
            bool at_end = i + 1 == body.size();
            if (is_terminator(body[i]) &&
                (at_end || std::isspace(static_cast<unsigned char>(body[i + 1])))) {
                std::size_t words = word_count(std::string_view(body).substr(start, i + 1 - start));
                if (words > 0) {
                    ++f.sentence_count;
                    total_words_in_sentences += words;
                }
                start = i + 1;
            }
        }
        if (start < body.size()) {
            std::size_t words = word_count(std::string_view(body).substr(start));
            if (words > 0) {
                ++f.sentence_count;
                total_words_in_sentences += words;
            }
        }

        f.recital_length += word_count(a.recital_text);
        f.cross_reference_count += a.internal_refs.size();
        std::string own_act = a.act.empty() ? act_of(a.id) : a.act;
        for (const std::string& ref : a.internal_refs) {
            std::string ref_act = act_of(ref);
            if (!ref_act.empty() && ref_act != own_act) ++f.external_reference_count;
        }
        f.list_item_count += static_cast<std::size_t>(a.list_item_count);
    }
    if (f.sentence_count > 0)
        f.avg_sentence_length =
            static_cast<double>(total_words_in_sentences) / static_cast<double>(f.sentence_count);
    return f;
}

std::vector<double> average_ranks(const std::vector<double>& v) {
    std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

namespace {

// Pearson correlation; nullopt when either side has zero variance.
std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b) {
    std::size_t n = a.size();
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
    double cov = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va <= 0.0 || vb <= 0.0) return std::nullopt;
    double r = cov / std::sqrt(va * vb);
    return std::clamp(r, -1.0, 1.0);
}

constexpr double kStatEps = 1e-12;

}  // namespace

StatResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("spearman needs vectors of equal length");
    StatResult r;
    r.n = x.size();
    r.method = "spearman";
    if (x.size() < 3) {
        r.defined = false;
        r.note = "needs at least 3 pairs";
        return r;
    }
    std::vector<double> rx = average_ranks(x);
    std::vector<double> ry = average_ranks(y);
    std::optional<double> rho = pearson(rx, ry);
    if (!rho) {
        r.defined = false;
        r.note = "zero variance";
        return r;
    }
    r.statistic = *rho;

    std::size_t n = x.size();
    if (n < 10) {
        // Exact permutation distribution of rho, conditioning on the ranks.
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<double> permuted(n);
        long long hits = 0, total = 0;
        do {
            for (std::size_t i = 0; i < n; ++i) permuted[i] = ry[perm[i]];
            std::optional<double> rp = pearson(rx, permuted);
            if (rp && std::fabs(*rp) >= std::fabs(*rho) - kStatEps) ++hits;
            ++total;
        } while (std::next_permutation(perm.begin(), perm.end()));
        r.p_value = static_cast<double>(hits) / static_cast<double>(total);
        r.method = "spearman-exact-permutation";
    } else {
        double denom = 1.0 - *rho * *rho;
        if (denom <= 0.0) {
            r.p_value = 0.0;
        } else {
            double t = *rho * std::sqrt((static_cast<double>(n) - 2.0) / denom);
            boost::math::students_t dist(static_cast<double>(n) - 2.0);
            r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
        }
        r.method = "spearman-t";
    }
    return r;
}

StatResult wilcoxon_signed_rank(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("wilcoxon needs vectors of equal length");
    StatResult r;

    std::vector<double> diffs;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - y[i];
        if (d != 0.0) diffs.push_back(d);
    }
    r.n = diffs.size();
    if (diffs.empty()) {
        r.method = "wilcoxon-degenerate";
        r.p_value = 1.0;
        r.note = "all differences zero";
        return r;
    }

    std::vector<double> abs_d(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) abs_d[i] = std::fabs(diffs[i]);
    std::vector<double> ranks = average_ranks(abs_d);

    double w_plus = 0.0, rank_sum = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        rank_sum += ranks[i];
        if (diffs[i] > 0) w_plus += ranks[i];
    }
    r.statistic = w_plus;
    double mean = rank_sum / 2.0;
    std::size_t n = diffs.size();

    if (n <= 12) {
        // Every sign pattern is equally likely under the null; two-sided p by
        // symmetry around the midpoint of the W+ range.
        long long total = 1LL << n;
        long long hits = 0;
        double observed = std::fabs(w_plus - mean);
        for (long long mask = 0; mask < total; ++mask) {
            double w = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1LL << i)) w += ranks[i];
            if (std::fabs(w - mean) >= observed - kStatEps) ++hits;
        }
        r.p_value = static_cast<double>(hits) / static_cast<double>(total);
        r.method = "wilcoxon-exact";
    } else {
        double nn = static_cast<double>(n);
        double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
        std::map<double, std::size_t> tie_groups;
        for (double v : abs_d) ++tie_groups[v];
        for (const auto& [value, count] : tie_groups) {
            double t = static_cast<double>(count);
            var -= (t * t * t - t) / 48.0;
        }
        if (var <= 0.0) {
            r.p_value = 1.0;
            r.method = "wilcoxon-degenerate";
            r.note = "zero variance after tie correction";
            return r;
        }
        double z = (std::fabs(w_plus - mean) - 0.5) / std::sqrt(var);
        if (z < 0.0) z = 0.0;
        r.p_value = std::erfc(z / std::sqrt(2.0));
        r.method = "wilcoxon-normal";
    }
    if (r.p_value > 1.0) r.p_value = 1.0;
    return r;
}

std::vector<TertileRow> tertile_table(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3)
        throw std::invalid_argument("tertile split needs at least 3 models");
    std::vector<std::pair<double, double>> sorted = pairs;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::size_t n = sorted.size();
    std::size_t base = n / 3, rem = n % 3;
    std::size_t sizes[3] = {base + (rem >= 1 ? 1u : 0u), base + (rem >= 2 ? 1u : 0u), base};

    std::vector<TertileRow> rows;
    std::size_t pos = 0;
    for (std::size_t g = 0; g < 3; ++g) {
        TertileRow row;
        row.count = sizes[g];
        row.feature_min = sorted[pos].first;
        row.feature_max = sorted[pos + sizes[g] - 1].first;
        double total = 0.0;
        for (std::size_t i = 0; i < sizes[g]; ++i) total += sorted[pos + i].second;
        row.mean_metric = total / static_cast<double>(sizes[g]);
        rows.push_back(row);
        pos += sizes[g];
    }
    return rows;
}

namespace {

const ModelBundle* bundle_of(const Corpus& corpus, const std::string& id) {
    for (const ModelBundle& b : corpus.bundles)
        if (b.graph.id == id) return &b;
    return nullptr;
}

double population_sd(const std::vector<double>& v, double mean) {
    if (v.empty()) return 0.0;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::sqrt(var / static_cast<double>(v.size()));
}

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) /
                                 static_cast<double>(v.size());
}

}  // namespace

ExampleEffects example_effect_metrics(const std::vector<RunRecord>& records,
                                      const Corpus& corpus) {
    ExampleEffects out;

    // Example graphs per (target, run); fixed across conditions by design.
    std::map<std::pair<std::string, int>, std::string> example_of;
    std::map<std::pair<std::string, Condition>, std::vector<double>> gen_sims;

    for (const RunRecord& rec : records) {
        const ModelBundle* target = bundle_of(corpus, rec.target_model_id);
        const ModelBundle* example = bundle_of(corpus, rec.example_model_id);
        if (rec.validity != Validity::Parsed || !target || !example) {
            ++out.excluded_records;
            continue;
        }
        example_of[{rec.target_model_id, rec.run_index}] = rec.example_model_id;

        ExampleEffectRow row;
        row.target = rec.target_model_id;
        row.condition = rec.condition;
        row.run = rec.run_index;
        row.ex_sim = sp_similarity(example->graph, target->graph);
        row.gen_sim = sp_similarity(*rec.parsed_graph, target->graph);
        out.rows.push_back(row);
        gen_sims[{rec.target_model_id, rec.condition}].push_back(row.gen_sim);
    }

    // Example consistency per target: mean pairwise similarity over the runs'
    // example graphs. Fewer than two examples are trivially consistent.
    std::map<std::string, double> ex_con;
    std::map<std::string, std::vector<const DecisionGraph*>> examples_by_target;
    for (const auto& [key, example_id] : example_of) {
        const ModelBundle* example = bundle_of(corpus, example_id);
        if (example) examples_by_target[key.first].push_back(&example->graph);
    }
    for (const auto& [target, graphs] : examples_by_target) {
        if (graphs.size() < 2) {
            ex_con[target] = 1.0;
            continue;
        }
        double total = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < graphs.size(); ++i)
            for (std::size_t j = i + 1; j < graphs.size(); ++j) {
                total += sp_similarity(*graphs[i], *graphs[j]);
                ++pairs;
            }
        ex_con[target] = total / static_cast<double>(pairs);
    }

    for (const auto& [key, sims] : gen_sims) {
        ExampleEffectGroup g;
        g.target = key.first;
        g.condition = key.second;
        g.parsed_runs = sims.size();
        g.ex_con = ex_con.at(key.first);
        double mean = mean_of(sims);
        g.gen_var = population_sd(sims, mean);
        out.groups.push_back(g);
    }

    for (Condition c : all_conditions()) {
        std::vector<double> ex, gen;
        for (const ExampleEffectRow& row : out.rows)
            if (row.condition == c) {
                ex.push_back(row.ex_sim);
                gen.push_back(row.gen_sim);
            }
        if (!ex.empty()) out.exsim_gensim[c] = spearman(ex, gen);

        std::vector<double> con, var;
        for (const ExampleEffectGroup& g : out.groups)
            if (g.condition == c) {
                con.push_back(g.ex_con);
                var.push_back(g.gen_var);
            }
        if (!con.empty()) out.excon_genvar[c] = spearman(con, var);
    }
    return out;
}

std::vector<RecordEvaluation> evaluate_records(const std::vector<RunRecord>& records,
                                               const Corpus& corpus,
                                               const GraphletOptions& gopt,
                                               const TestabilityCaps& caps) {
    // Case suites are shared across every record of one target.
    std::map<std::string, std::optional<std::vector<Assignment>>> cases_by_target;
    std::map<std::string, std::string> untestable_reason;

    std::vector<RecordEvaluation> out;
    out.reserve(records.size());
    for (const RunRecord& rec : records) {
        RecordEvaluation ev;
        ev.key = record_key(rec);
        ev.target = rec.target_model_id;
        ev.condition = rec.condition;
        ev.run = rec.run_index;
        ev.validity = rec.validity;

        const ModelBundle* target = bundle_of(corpus, rec.target_model_id);
        if (!target) {
            ev.note = "target not in corpus";
            out.push_back(std::move(ev));
            continue;
        }
        if (rec.validity != Validity::Parsed) {
            ev.note = rec.validity == Validity::ProviderError ? "no generation" : "not parsed";
            out.push_back(std::move(ev));
            continue;
        }

        const DecisionGraph& gold = target->graph;
        const DecisionGraph& candidate = *rec.parsed_graph;
        ev.sp = sp_similarity(candidate, gold);
        ev.graphlet = graphlet_similarity(candidate, gold, gopt);
        ev.gen_metrics = descriptive_stats(candidate).metrics();

        auto found = cases_by_target.find(rec.target_model_id);
        if (found == cases_by_target.end()) {
            TestabilityVerdict verdict = assess_testability(gold, caps);
            if (verdict.eligible) {
                cases_by_target[rec.target_model_id] = generate_cases(extract_domains(gold));
            } else {
                cases_by_target[rec.target_model_id] = std::nullopt;
                untestable_reason[rec.target_model_id] = to_string(verdict.reason);
            }
            found = cases_by_target.find(rec.target_model_id);
        }
        if (!found->second) {
            ev.note = "target untestable: " + untestable_reason[rec.target_model_id];
            out.push_back(std::move(ev));
            continue;
        }

        EquivalenceResult eq = equivalence(gold, candidate, *found->second);
        ev.equivalence_rate = eq.rate;
        ev.equivalence_cases = eq.case_count;
        ev.candidate_valid = eq.candidate_valid;
        if (!eq.candidate_valid) ev.note = "candidate interface did not match";
        out.push_back(std::move(ev));
    }
    return out;
}

std::string serialize_evaluations(const std::vector<RecordEvaluation>& evals) {
    njson::ordered_json arr = njson::ordered_json::array();
    for (const RecordEvaluation& ev : evals) {
        njson::ordered_json j;
        j["key"] = ev.key;
        j["target"] = ev.target;
        j["condition"] = to_string(ev.condition);
        j["run"] = ev.run;
        j["validity"] = to_string(ev.validity);
        j["sp"] = ev.sp ? njson::ordered_json(*ev.sp) : njson::ordered_json(nullptr);
        j["graphlet"] =
            ev.graphlet ? njson::ordered_json(*ev.graphlet) : njson::ordered_json(nullptr);
        njson::ordered_json metrics = njson::ordered_json::object();
        for (const auto& [name, value] : ev.gen_metrics) metrics[name] = value;
        j["gen_metrics"] = metrics;
        j["equivalence_rate"] = ev.equivalence_rate
                                    ? njson::ordered_json(*ev.equivalence_rate)
                                    : njson::ordered_json(nullptr);
        j["equivalence_cases"] = ev.equivalence_cases;
        j["candidate_valid"] = ev.candidate_valid;
        j["note"] = ev.note;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::vector<RecordEvaluation> load_evaluations(const std::string& bytes) {
    // ordered parse keeps gen_metrics in emission order
    njson::ordered_json arr;
    try {
        arr = njson::ordered_json::parse(bytes);
    } catch (const njson::json::parse_error& e) {
        throw SchemaError("$", std::string("invalid JSON: ") + e.what());
    }
    if (!arr.is_array()) throw SchemaError("$", "evaluations must be an array");
    std::vector<RecordEvaluation> out;
    try {
        for (const auto& j : arr) {
            RecordEvaluation ev;
            ev.key = j.at("key").get<std::string>();
            ev.target = j.at("target").get<std::string>();
            std::optional<Condition> c = parse_condition(j.at("condition").get<std::string>());
            if (!c) throw SchemaError("condition", "unknown condition");
            ev.condition = *c;
            ev.run = j.at("run").get<int>();
            std::optional<Validity> v = parse_validity(j.at("validity").get<std::string>());
            if (!v) throw SchemaError("validity", "unknown validity");
            ev.validity = *v;
            if (!j.at("sp").is_null()) ev.sp = j["sp"].get<double>();
            if (!j.at("graphlet").is_null()) ev.graphlet = j["graphlet"].get<double>();
            for (const auto& [name, value] : j.at("gen_metrics").items())
                ev.gen_metrics.emplace_back(name, value.get<double>());
            if (!j.at("equivalence_rate").is_null())
                ev.equivalence_rate = j["equivalence_rate"].get<double>();
            ev.equivalence_cases = j.at("equivalence_cases").get<std::size_t>();
            ev.candidate_valid = j.at("candidate_valid").get<bool>();
            ev.note = j.at("note").get<std::string>();
            out.push_back(std::move(ev));
        }
    } catch (const njson::json::exception& e) {
        throw SchemaError("$", std::string("bad evaluation field: ") + e.what());
    }
    return out;
}

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string num(double v) { return format_double(v, 4); }

struct CsvBuilder {
    std::string text;
    std::size_t data_rows = 0;
    explicit CsvBuilder(const std::string& header) { text = header + "\n"; }
    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) text += ',';
            text += csv_escape(fields[i]);
        }
        text += '\n';
        ++data_rows;
    }
};

double metric_value(const std::vector<std::pair<std::string, double>>& metrics,
                    const std::string& name) {
    for (const auto& [n, v] : metrics)
        if (n == name) return v;
    return 0.0;
}

}  // namespace

void emit_report(const Corpus& corpus, const std::vector<RunRecord>& records,
                 const std::vector<RecordEvaluation>& evals, const std::string& out_dir) {
    ensure_dir(out_dir);
    std::filesystem::path out(out_dir);
    std::vector<std::string> gaps;

    std::map<std::string, const RecordEvaluation*> eval_by_key;
    for (const RecordEvaluation& ev : evals) eval_by_key[ev.key] = &ev;

    auto type_of_target = [&](const std::string& id) -> std::optional<ModelType> {
        const ModelBundle* b = bundle_of(corpus, id);
        if (!b) return std::nullopt;
        return b->graph.model_type;
    };

    // Table 1: gold corpus descriptive statistics plus pooled identity-node
    // fractions under both denominators.
    {
        CsvBuilder csv("model_type,count,metric,mean,stddev");
        std::vector<const DecisionGraph*> graphs;
        for (const ModelBundle& b : corpus.bundles) graphs.push_back(&b.graph);
        if (graphs.empty()) {
            gaps.push_back("table1_gold_stats: corpus is empty");
        } else {
            std::map<ModelType, GroupSummary> agg = aggregate_stats(graphs);
            for (const auto& [type, summary] : agg) {
                for (const MetricSummary& m : summary.metrics)
                    csv.row({to_string(type), std::to_string(summary.count), m.name,
                             num(m.mean), num(m.stddev)});

                std::size_t identity = 0, decisions = 0, all_nodes = 0;
                for (const ModelBundle& b : corpus.bundles) {
                    if (b.graph.model_type != type) continue;
                    for (const Node& n : b.graph.nodes) {
                        ++all_nodes;
                        if (n.kind == NodeKind::Decision) {
                            ++decisions;
                            if (is_identity_node(n)) ++identity;
                        }
                    }
                }
                double frac_dec = decisions ? double(identity) / double(decisions) : 0.0;
                double frac_all = all_nodes ? double(identity) / double(all_nodes) : 0.0;
                csv.row({to_string(type), std::to_string(summary.count),
                         "identity_fraction_decisions", num(frac_dec), ""});
                csv.row({to_string(type), std::to_string(summary.count),
                         "identity_fraction_all_nodes", num(frac_all), ""});
            }
        }
        write_file(out / "table1_gold_stats.csv", csv.text);
    }

    // Grouping of records by (model type, condition), corpus-resolvable only.
    struct Cell {
        std::size_t total = 0, parsed = 0;
        std::vector<double> sp, graphlet;
        std::vector<const RecordEvaluation*> parsed_evals;
        std::set<std::string> targets;
    };
    std::map<std::pair<ModelType, Condition>, Cell> cells;
    for (const RunRecord& rec : records) {
        std::optional<ModelType> type = type_of_target(rec.target_model_id);
        if (!type) continue;
        Cell& cell = cells[{*type, rec.condition}];
        ++cell.total;
        cell.targets.insert(rec.target_model_id);
        auto found = eval_by_key.find(record_key(rec));
        if (found == eval_by_key.end()) continue;
        const RecordEvaluation* ev = found->second;
        if (ev->validity == Validity::Parsed && ev->sp) {
            ++cell.parsed;
            cell.sp.push_back(*ev->sp);
            if (ev->graphlet) cell.graphlet.push_back(*ev->graphlet);
            cell.parsed_evals.push_back(ev);
        }
    }

    // Table 2: structural similarity by condition.
    {
        CsvBuilder csv(
            "model_type,condition,n_records,n_parsed,sp_mean,sp_sd,graphlet_mean,graphlet_sd");
        for (const auto& [key, cell] : cells) {
            if (cell.parsed == 0) {
                csv.row({to_string(key.first), to_string(key.second),
                         std::to_string(cell.total), "0", "", "", "", ""});
                gaps.push_back(std::string("table2_similarity: no parsed generations for ") +
                               to_string(key.first) + "/" + to_string(key.second));
                continue;
            }
            double sp_mean = mean_of(cell.sp);
            double gl_mean = mean_of(cell.graphlet);
            csv.row({to_string(key.first), to_string(key.second), std::to_string(cell.total),
                     std::to_string(cell.parsed), num(sp_mean),
                     num(population_sd(cell.sp, sp_mean)), num(gl_mean),
                     num(population_sd(cell.graphlet, gl_mean))});
        }
        if (records.empty()) gaps.push_back("table2_similarity: no run records");
        write_file(out / "table2_similarity.csv", csv.text);
    }

    // Table 3: descriptive comparison, generated vs gold.
    {
        CsvBuilder csv(
            "model_type,condition,metric,n_parsed,gen_mean,gen_sd,n_gold,gold_mean,gold_sd");
        const std::vector<std::string> compared = {"nodes", "edges", "input_nodes",
                                                   "total_rules"};
        for (const auto& [key, cell] : cells) {
            if (cell.parsed == 0) continue;
            std::vector<const DecisionGraph*> golds;
            for (const std::string& id : cell.targets) {
                const ModelBundle* b = bundle_of(corpus, id);
                if (b) golds.push_back(&b->graph);
            }
            for (const std::string& metric : compared) {
                std::vector<double> gen, gold;
                for (const RecordEvaluation* ev : cell.parsed_evals)
                    gen.push_back(metric_value(ev->gen_metrics, metric));
                for (const DecisionGraph* g : golds)
                    gold.push_back(metric_value(descriptive_stats(*g).metrics(), metric));
                double gen_mean = mean_of(gen), gold_mean = mean_of(gold);
                csv.row({to_string(key.first), to_string(key.second), metric,
                         std::to_string(gen.size()), num(gen_mean),
                         num(population_sd(gen, gen_mean)), std::to_string(gold.size()),
                         num(gold_mean), num(population_sd(gold, gold_mean))});
            }
        }
        if (csv.data_rows == 0) gaps.push_back("table3_descriptive: no parsed generations");
        write_file(out / "table3_descriptive.csv", csv.text);
    }

    // Table 4: outcome equivalence by condition.
    {
        CsvBuilder csv(
            "model_type,condition,n_records,n_parsed,n_evaluated,n_candidate_invalid,"
            "macro_avg_rate");
        for (const auto& [key, cell] : cells) {
            std::vector<double> rates;
            std::size_t invalid = 0;
            for (const RecordEvaluation* ev : cell.parsed_evals) {
                if (!ev->equivalence_rate) continue;
                rates.push_back(*ev->equivalence_rate);
                if (!ev->candidate_valid) ++invalid;
            }
            std::string macro = rates.empty() ? std::string() : num(mean_of(rates));
            if (rates.empty())
                gaps.push_back(std::string("table4_equivalence: nothing evaluable for ") +
                               to_string(key.first) + "/" + to_string(key.second));
            csv.row({to_string(key.first), to_string(key.second), std::to_string(cell.total),
                     std::to_string(cell.parsed), std::to_string(rates.size()),
                     std::to_string(invalid), macro});
        }
        write_file(out / "table4_equivalence.csv", csv.text);
    }

    // Table 5: tertile stratification of mean similarity by text features.
    {
        CsvBuilder csv("feature,group,count,feature_min,feature_max,mean_similarity");
        std::map<std::string, std::vector<double>> sims_by_target;
        for (const RecordEvaluation& ev : evals)
            if (ev.validity == Validity::Parsed && ev.sp)
                sims_by_target[ev.target].push_back(*ev.sp);

        struct TargetRow {
            TextFeatures features;
            double mean_sim;
        };
        std::vector<TargetRow> targets;
        for (const auto& [id, sims] : sims_by_target) {
            const ModelBundle* b = bundle_of(corpus, id);
            if (!b) continue;
            targets.push_back({text_features(b->articles), mean_of(sims)});
        }

        if (targets.size() < 3) {
            gaps.push_back("table5_tertiles: fewer than 3 targets with parsed generations");
        } else {
            // Cross-references default to the external-act count; the raw
            // all-references variant is emitted alongside.
            std::vector<std::pair<std::string, std::function<double(const TextFeatures&)>>>
                features = {
                    {"avg_sentence_length",
                     [](const TextFeatures& f) { return f.avg_sentence_length; }},
                    {"recital_length",
                     [](const TextFeatures& f) { return double(f.recital_length); }},
                    {"cross_references",
                     [](const TextFeatures& f) { return double(f.external_reference_count); }},
                    {"cross_references_all",
                     [](const TextFeatures& f) { return double(f.cross_reference_count); }},
                    {"list_items",
                     [](const TextFeatures& f) { return double(f.list_item_count); }},
                };
            for (const auto& [name, get] : features) {
                std::vector<std::pair<double, double>> pairs;
                for (const TargetRow& t : targets)
                    pairs.emplace_back(get(t.features), t.mean_sim);
                std::vector<TertileRow> rows = tertile_table(pairs);
                for (std::size_t g = 0; g < rows.size(); ++g)
                    csv.row({name, std::to_string(g + 1), std::to_string(rows[g].count),
                             num(rows[g].feature_min), num(rows[g].feature_max),
                             num(rows[g].mean_metric)});
            }
        }
        write_file(out / "table5_tertiles.csv", csv.text);
    }

    // Table 6: example-effect correlations.
    {
        CsvBuilder csv("condition,correlation,n,rho,p_value,method,defined,note");
        ExampleEffects effects = example_effect_metrics(records, corpus);
        for (Condition c : all_conditions()) {
            auto emit = [&](const char* label, const std::map<Condition, StatResult>& stats) {
                auto found = stats.find(c);
                if (found == stats.end()) return;
                const StatResult& s = found->second;
                csv.row({to_string(c), label, std::to_string(s.n),
                         s.defined ? num(s.statistic) : std::string(),
                         s.defined ? num(s.p_value) : std::string(), s.method,
                         s.defined ? "true" : "false", s.note});
            };
            emit("ExSim_GenSim", effects.exsim_gensim);
            emit("ExCon_GenVar", effects.excon_genvar);
        }
        if (csv.data_rows == 0) gaps.push_back("table6_example_effects: no parsed generations");
        write_file(out / "table6_example_effects.csv", csv.text);
    }

    // Run health: parse failure rates by condition over every record.
    {
        CsvBuilder csv(
            "condition,total,parsed,schema_errors,validation_errors,provider_errors,"
            "parse_failure_rate");
        std::map<Condition, std::map<Validity, std::size_t>> health;
        for (const RunRecord& rec : records) ++health[rec.condition][rec.validity];
        for (const auto& [cond, counts] : health) {
            auto get = [&](Validity v) {
                auto found = counts.find(v);
                return found == counts.end() ? std::size_t(0) : found->second;
            };
            std::size_t total = 0;
            for (const auto& [v, c] : counts) total += c;
            std::size_t parsed = get(Validity::Parsed);
            double failure =
                total ? 1.0 - double(parsed) / double(total) : 0.0;
            csv.row({to_string(cond), std::to_string(total), std::to_string(parsed),
                     std::to_string(get(Validity::SchemaError)),
                     std::to_string(get(Validity::ValidationError)),
                     std::to_string(get(Validity::ProviderError)), num(failure)});
        }
        if (records.empty()) gaps.push_back("run_health: no run records");
        write_file(out / "run_health.csv", csv.text);
    }

    std::string gap_text;
    for (const std::string& g : gaps) gap_text += g + "\n";
    write_file(out / "gaps.txt", gap_text);
}

}  // namespace dmnkit
