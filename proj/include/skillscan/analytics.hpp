#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skillscan/categorizer.hpp"
#include "skillscan/findings.hpp"
#include "skillscan/hybrid_classifier.hpp"

namespace skillscan {

struct ConfusionMatrix {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    std::int64_t total() const { return tp + fp + fn + tn; }
};

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

struct WilsonResult {
    Interval ci;
    double half_width = 0.0;
};

/// Wilson score interval for a binomial proportion. Boundary estimates keep
/// exact bounds (p_hat = 0 -> low = 0, p_hat = 1 -> high = 1).
WilsonResult wilson_ci(double p_hat, std::int64_t n, double z);

struct RoganGladenResult {
    double value = 0.0;
    bool clamped = false;  // raw estimate fell outside [0,1]
};

/// Prevalence corrected for classifier error:
/// (p_obs + specificity - 1) / (sensitivity + specificity - 1), clamped to
/// [0,1]. Throws Error{degenerate_classifier} when Se + Sp <= 1.
RoganGladenResult rogan_gladen(double p_obs, double sensitivity, double specificity);

struct RoganGladenCi {
    RoganGladenResult point;
    Interval ci;
};

/// Delta-method interval around the corrected estimate with binomial
/// variances for p_obs, Se, and Sp.
RoganGladenCi rogan_gladen_ci(double p_obs, std::int64_t n_obs, double sensitivity,
                              std::int64_t n_se, double specificity, std::int64_t n_sp,
                              double z);

struct OddsRatioRow {
    std::string factor;
    std::int64_t a = 0, b = 0, c = 0, d = 0;  // with/without x outcome/not
    double rate_with = 0.0;
    double rate_without = 0.0;
    double odds_ratio = 0.0;
    Interval ci95;
    double p_value = 1.0;
    bool corrected = false;  // Haldane-Anscombe 0.5 applied (a zero cell)
    bool significant_bonferroni = false;
};

/// OR = (a*d)/(b*c) with Haldane-Anscombe correction on zero cells, 95% CI
/// via the log-OR normal approximation, and a two-sided Fisher exact p
/// (sum of tables with point probability <= observed). Throws
/// Error{degenerate_table} on a zero margin.
OddsRatioRow odds_ratio(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d,
                        const std::string& factor = "");

/// Two-sided Fisher exact p by hypergeometric enumeration. The table is
/// canonicalized under row/column swaps first, so symmetric inputs produce
/// bit-identical p-values.
double fisher_exact_p(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

/// Strict Bonferroni significance: flag_i = (p_i < alpha / m).
std::vector<bool> bonferroni(const std::vector<double>& p_values, double alpha);

/// IPW stratum weight = population proportion / sample proportion.
/// Throws Error{zero_sample_stratum} when sample_prop <= 0.
double ipw_weight(double pop_prop, double sample_prop);

double combine_weights(const std::vector<double>& weights);

/// Weighted positive rate: sum(w_i * flag_i) / sum(w_i).
double weighted_rate(const std::vector<bool>& flags, const std::vector<double>& weights);

struct MetricSet {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::optional<double> specificity;
};

struct ClassWeights {
    double vulnerable = 1.0;  // applied to tp and fn
    double benign = 1.0;      // applied to fp and tn
};

/// Standard classification metrics; zero-denominator entries stay undefined
/// rather than collapsing to 0. Weighted variants scale the positive-class
/// cells by w_v and negative-class cells by w_b.
MetricSet validation_metrics(const ConfusionMatrix& cm, const ClassWeights& weights = {});

/// Cohen's kappa on aligned binary sequences: (p_o - p_e) / (1 - p_e).
/// p_e = 1 is defined as 1 when p_o = 1, otherwise undefined. Throws
/// Error{length_mismatch} on ragged input.
std::optional<double> cohens_kappa(const std::vector<bool>& labels_a,
                                   const std::vector<bool>& labels_b);

/// Everything analytics needs to know about one scanned skill.
struct SkillOutcome {
    std::string id;
    std::string source;
    Category category = Category::Other;
    Verdict verdict;
    bool has_scripts = false;
    std::int64_t total_lines = 0;  // instruction + script lines
    std::int64_t dep_count = 0;
    std::optional<std::int64_t> days_since_update;
    double weight = 1.0;
};

struct CategoryRate {
    std::int64_t skills = 0;
    std::int64_t flagged = 0;
    double rate = 0.0;
};

struct SeverityBucket {
    std::int64_t count = 0;
    double proportion = 0.0;
};

struct CorpusReport {
    std::int64_t scanned = 0;
    std::int64_t flagged = 0;
    std::int64_t uncertain = 0;
    std::int64_t benign = 0;
    double prevalence_raw = 0.0;             // flagged / scanned
    double prevalence_excl_uncertain = 0.0;  // flagged / (scanned - uncertain)
    WilsonResult prevalence_ci;              // Wilson 95% on the raw rate
    std::optional<RoganGladenCi> prevalence_adjusted;
    std::map<Category, CategoryRate> by_category;
    std::map<VulnCategory, SeverityBucket> by_vuln_category;  // multi-label; may sum > 1
    std::map<Severity, SeverityBucket> by_severity;           // each skill once, at max tier
    std::array<std::array<double, 4>, 4> cooccurrence{};      // NaN marks undefined cells
    std::array<std::int64_t, 4> cooccurrence_base{};
    std::vector<OddsRatioRow> correlates;
    std::optional<std::string> weights_applied;
    std::optional<double> weighted_prevalence;
};

struct CorpusReportOptions {
    // Rogan-Gladen inputs; the correction is emitted when both are set.
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::int64_t n_sensitivity = 63;   // validation positives behind Se
    std::int64_t n_specificity = 137;  // validation negatives behind Sp
    double z = 1.96;
    std::int64_t large_skill_lines = 500;
    std::int64_t many_deps = 5;
    std::int64_t active_maintenance_days = 90;
    std::optional<std::string> weights_applied;  // set when outcome weights are not all 1
};

/// Conditional co-occurrence over flagged skills:
/// cell(r,c) = |skills with r and c| / |skills with r|; diagonal = 1;
/// rows with zero base hold NaN.
std::array<std::array<double, 4>, 4> cooccurrence_matrix(
    const std::vector<SkillOutcome>& outcomes, std::array<std::int64_t, 4>* bases = nullptr);

/// Core prevalence fields. Uncertain verdicts count in denominators, never
/// in numerators. Throws Error{empty_corpus} on empty input.
CorpusReport prevalence(const std::vector<SkillOutcome>& outcomes);

/// Full corpus aggregate: prevalence, tiers, co-occurrence, per-category
/// rates, structural odds ratios with Bonferroni flags, and optional
/// corrected/weighted estimates.
CorpusReport build_corpus_report(const std::vector<SkillOutcome>& outcomes,
                                 const CorpusReportOptions& options = {});

}  // namespace skillscan
