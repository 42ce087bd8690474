#ifndef DMNKIT_ANALYTICS_HPP
#define DMNKIT_ANALYTICS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "articles.hpp"
#include "corpus.hpp"
#include "genharness.hpp"
#include "outcome_eval.hpp"
#include "structeval.hpp"

namespace dmnkit {

// Text-complexity features aggregated over one model's linked articles.
// Sentences end at '.', '?' or '!' followed by whitespace or end of text; a
// trailing unterminated fragment with words counts as a sentence. Words are
// whitespace-separated tokens.
struct TextFeatures {
    double avg_sentence_length = 0.0;  // 0 iff no sentences
    std::size_t sentence_count = 0;
    std::size_t recital_length = 0;               // words across recital texts
    std::size_t cross_reference_count = 0;        // every structured reference
    std::size_t external_reference_count = 0;     // references into another act
    std::size_t list_item_count = 0;
};

TextFeatures text_features(const std::vector<LegalArticle>& articles);

struct StatResult {
    double statistic = 0.0;  // rho (spearman) or W+ (wilcoxon)
    double p_value = 1.0;
    std::size_t n = 0;       // pairs used, after zero-difference dropping
    std::string method;
    bool defined = true;  // false: statistic has no meaning for this input
    std::string note;
};

// 1-based midranks; ties get the average of their positions.
std::vector<double> average_ranks(const std::vector<double>& v);

// Rank correlation. Two-sided p is an exact permutation value for n < 10 and
// a t-approximation from there. Zero variance in either vector (or fewer
// than 3 pairs) yields defined = false.
StatResult spearman(const std::vector<double>& x, const std::vector<double>& y);

// Paired signed-rank test, zero-differences dropped, statistic W+ (positive
// rank sum). Exact two-sided p over all sign patterns while n <= 12, then a
// normal approximation with tie and continuity correction. All differences
// zero is degenerate: p = 1.0, noted.
StatResult wilcoxon_signed_rank(const std::vector<double>& x, const std::vector<double>& y);

struct TertileRow {
    std::size_t count = 0;
    double feature_min = 0.0;
    double feature_max = 0.0;
    double mean_metric = 0.0;
};

// (feature, metric) per model -> three rows sorted by feature; group sizes
// differ by at most one, remainders land in the earlier groups.
std::vector<TertileRow> tertile_table(const std::vector<std::pair<double, double>>& pairs);

struct ExampleEffectRow {
    std::string target;
    Condition condition = Condition::Text;
    int run = 0;
    double ex_sim = 0.0;   // example gold vs target gold
    double gen_sim = 0.0;  // generation vs target gold
};

struct ExampleEffectGroup {
    std::string target;
    Condition condition = Condition::Text;
    double ex_con = 1.0;   // mean pairwise similarity among the target's examples
    double gen_var = 0.0;  // population sd of gen_sim across this cell's runs
    std::size_t parsed_runs = 0;
};

struct ExampleEffects {
    std::vector<ExampleEffectRow> rows;      // parsed records only
    std::vector<ExampleEffectGroup> groups;  // (target, condition), >= 1 parsed run
    std::map<Condition, StatResult> exsim_gensim;  // pooled rows, per condition
    std::map<Condition, StatResult> excon_genvar;  // over groups, per condition
    std::size_t excluded_records = 0;              // not parsed or target unknown
};

// All similarities via the shortest-path kernel against the gold graphs.
ExampleEffects example_effect_metrics(const std::vector<RunRecord>& records,
                                      const Corpus& corpus);

// Everything derivable from one run record against the gold corpus.
struct RecordEvaluation {
    std::string key;
    std::string target;
    Condition condition = Condition::Text;
    int run = 0;
    Validity validity = Validity::ProviderError;
    std::optional<double> sp;        // parsed only
    std::optional<double> graphlet;  // parsed only
    std::vector<std::pair<std::string, double>> gen_metrics;  // descriptive stats
    std::optional<double> equivalence_rate;  // parsed and target testable
    std::size_t equivalence_cases = 0;
    bool candidate_valid = true;
    std::string note;  // why equivalence or similarity is absent
};

std::vector<RecordEvaluation> evaluate_records(const std::vector<RunRecord>& records,
                                               const Corpus& corpus,
                                               const GraphletOptions& gopt = {},
                                               const TestabilityCaps& caps = {});

std::string serialize_evaluations(const std::vector<RecordEvaluation>& evals);
std::vector<RecordEvaluation> load_evaluations(const std::string& bytes);

// Writes the CSV report set under out_dir: table1_gold_stats, table2_similarity,
// table3_descriptive, table4_equivalence, table5_tertiles, table6_example_effects,
// run_health, plus gaps.txt naming every table left empty and why. Emission is
// byte-deterministic for identical inputs.
void emit_report(const Corpus& corpus, const std::vector<RunRecord>& records,
                 const std::vector<RecordEvaluation>& evals, const std::string& out_dir);

}  // namespace dmnkit

#endif
