#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skillscan/findings.hpp"
#include "skillscan/semantic_scanners.hpp"
#include "skillscan/skill_model.hpp"

namespace skillscan {

/// One security dimension's assessment from the classification backend.
struct DimensionAssessment {
    double confidence = 0.0;
    // Explicit benign assertion strength; defaults to 1 - confidence.
    std::optional<double> benign_confidence;
    std::vector<PatternId> patterns;
    std::string evidence;

    double benign() const { return benign_confidence.value_or(1.0 - confidence); }
};

const char* dimension_key(VulnCategory cat);  // "prompt_injection", ...

struct ClassificationResult {
    std::array<DimensionAssessment, 4> dims;  // indexed by VulnCategory order PI,DE,PE,SC
    bool adjusted = false;  // a confidence was clamped or an id dropped during validation

    DimensionAssessment& dim(VulnCategory cat) { return dims[static_cast<int>(cat)]; }
    const DimensionAssessment& dim(VulnCategory cat) const { return dims[static_cast<int>(cat)]; }
};

/// Serializes in the wire schema (4 dimension objects with confidence /
/// patterns / evidence, plus benign_confidence when explicit).
std::string classification_to_json(const ClassificationResult& cls);

/// Parses and validates a backend response. Out-of-range confidences are
/// clamped (adjusted flag set); pattern ids outside their dimension's
/// category are dropped. Throws Error{schema_violation} when the document
/// is not the expected shape.
ClassificationResult classification_from_json(const std::string& text);

/// The classification request document: the fixed prompt template with
/// [SKILL_CONTENT] replaced by manifest fields, instruction body, and
/// bundled scripts. Content above `budget` chars is cut at a [TRUNCATED]
/// marker; the surrounding prompt structure stays intact.
std::string build_classification_request(const SkillPackage& pkg, std::size_t budget = 65536);

class ClassifierBackend {
public:
    virtual ~ClassifierBackend() = default;
    virtual const char* name() const = 0;
    /// May throw Error{backend_unavailable} or Error{schema_violation};
    /// callers route those packages to an uncertain verdict.
    virtual ClassificationResult run(const SkillPackage& pkg,
                                     const std::vector<Finding>& static_findings,
                                     const ChainOutput& chain) = 0;
};

/// Deterministic rule-table backend. Per dimension:
///   confidence = 0 with no evidence, else min(0.9, 0.5 + 0.2*min(sources, 2))
/// where sources counts distinct (rule, file) evidence pairs; a dimension
/// whose only pattern is Low-tier is capped at 0.7.
class ReferenceBackend final : public ClassifierBackend {
public:
    const char* name() const override { return "reference"; }
    ClassificationResult run(const SkillPackage& pkg, const std::vector<Finding>& static_findings,
                             const ChainOutput& chain) override;
};

/// Subprocess adapter: the request document on stdin, the response JSON on
/// stdout. Requests are content-addressed by package digest, so retries are
/// idempotent.
class ExternalBackend final : public ClassifierBackend {
public:
    explicit ExternalBackend(std::string command) : command_(std::move(command)) {}
    const char* name() const override { return "external"; }
    ClassificationResult run(const SkillPackage& pkg, const std::vector<Finding>& static_findings,
                             const ChainOutput& chain) override;

private:
    std::string command_;
};

/// Stage-3 entry point. Requires a candidate package (some stage-1 finding
/// or invalid stage-2 result); otherwise throws Error{precondition_violation}.
ClassificationResult classify(const SkillPackage& pkg,
                              const std::vector<Finding>& static_findings,
                              const ChainOutput& chain, ClassifierBackend& backend);

struct AggregationThresholds {
    double confirm = 0.6;
    double overturn = 0.8;
    double uncertain_low = 0.4;
};

enum class VerdictState { benign, flagged, uncertain };

const char* to_string(VerdictState state);

struct Verdict {
    VerdictState state = VerdictState::benign;
    double confidence = 0.0;
    Severity severity = Severity::None;
    std::vector<PatternId> patterns;  // sorted, unique; empty unless flagged
    std::vector<std::string> decision_trace;
};

/// Reconciles the three stages into a final verdict:
///  1. no stage-1/stage-2 finding -> benign;
///  2. dimension confirmed at confidence >= confirm -> its patterns flagged;
///  3. classifier contradicts a static finding (confidence < uncertain_low):
///     overturned only when the benign assertion reaches `overturn`,
///     otherwise the static finding stands;
///  4. only confidences inside [uncertain_low, confirm) -> uncertain,
///     excluded from prevalence counts.
/// Severity is the max tier over the final pattern set.
Verdict aggregate_verdict(const std::vector<Finding>& static_findings, const ChainOutput& chain,
                          const ClassificationResult& cls,
                          const AggregationThresholds& thresholds = {});

/// Max severity tier over the patterns; empty -> None.
Severity assign_severity(const std::vector<PatternId>& patterns);

/// Stage-2 hits materialized as findings (stage=semantic, file "<chain>")
/// using the scanner -> pattern mapping; context-only scanners yield none.
std::vector<Finding> semantic_findings(const ChainOutput& chain);

}  // namespace skillscan
