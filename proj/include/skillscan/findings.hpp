#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace skillscan {

// The 14 detection pattern ids: 4 prompt-injection, 4 data-exfiltration,
// 3 privilege-escalation, 3 supply-chain.
enum class PatternId {
    P1, P2, P3, P4,
    E1, E2, E3, E4,
    PE1, PE2, PE3,
    SC1, SC2, SC3,
};

constexpr std::array<PatternId, 14> kAllPatterns = {
    PatternId::P1,  PatternId::P2,  PatternId::P3,  PatternId::P4,
    PatternId::E1,  PatternId::E2,  PatternId::E3,  PatternId::E4,
    PatternId::PE1, PatternId::PE2, PatternId::PE3,
    PatternId::SC1, PatternId::SC2, PatternId::SC3,
};

enum class VulnCategory { PI, DE, PE, SC };

constexpr std::array<VulnCategory, 4> kAllCategories = {
    VulnCategory::PI, VulnCategory::DE, VulnCategory::PE, VulnCategory::SC};

enum class Severity { None = 0, Low = 1, Medium = 2, High = 3 };

enum class Stage { static_scan, semantic };

const char* to_string(PatternId id);
const char* to_string(VulnCategory cat);
const char* to_string(Severity sev);
const char* to_string(Stage stage);

std::optional<PatternId> parse_pattern_id(std::string_view text);

/// Canonical pattern -> category mapping (P* -> PI, E* -> DE, PE* -> PE, SC* -> SC).
VulnCategory category_of(PatternId id);

/// Fixed severity tiers:
///   High:   P1, P2, P3, E2, E4, PE3, SC2, SC3
///   Medium: P4, E1, E3, PE2
///   Low:    PE1, SC1
Severity severity_of(PatternId id);

/// One detected pattern occurrence.
struct Finding {
    PatternId pattern;
    VulnCategory category;  // canonical mapping for `pattern`
    Severity severity;      // canonical mapping for `pattern`
    Stage stage = Stage::static_scan;
    std::string rule;  // rule label that fired (distinct from pattern for folded rules)
    std::string file;
    int line = 1;          // 1-based; first line of the match
    std::string evidence;  // matched span plus context, capped at 200 chars

    bool operator==(const Finding& other) const {
        return pattern == other.pattern && stage == other.stage && rule == other.rule &&
               file == other.file && line == other.line && evidence == other.evidence;
    }
};

/// Builds a finding with the canonical category/severity for the pattern and
/// the evidence trimmed to the 200-char cap.
Finding make_finding(PatternId pattern, Stage stage, std::string rule, std::string file,
                     int line, std::string_view evidence);

}  // namespace skillscan
