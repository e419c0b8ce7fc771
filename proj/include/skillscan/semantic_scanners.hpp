#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "skillscan/findings.hpp"
#include "skillscan/skill_model.hpp"

namespace skillscan {

enum class ScannerKind {
    prompt_injection,
    secrets,
    invisible_text,
    gibberish,
    ban_substrings,
    custom_regex,
};

constexpr std::array<ScannerKind, 6> kAllScanners = {
    ScannerKind::prompt_injection, ScannerKind::secrets,        ScannerKind::invisible_text,
    ScannerKind::gibberish,        ScannerKind::ban_substrings, ScannerKind::custom_regex,
};

const char* to_string(ScannerKind kind);

/// One scanner verdict. score in [0,1]; valid <=> score < threshold.
/// Match-based scanners report score 1.0 on a hit against threshold 1.0, so
/// the same rule covers "Any match" semantics.
struct ScannerResult {
    ScannerKind scanner;
    double score = 0.0;
    double threshold = 1.0;
    bool valid = true;
    std::string evidence;
};

struct ChainConfig {
    std::map<ScannerKind, double> thresholds = {
        {ScannerKind::prompt_injection, 0.5},
        {ScannerKind::gibberish, 0.6},
    };
    std::set<ScannerKind> enabled = {kAllScanners.begin(), kAllScanners.end()};
    std::vector<std::string> banned_substrings = {
        "rm -rf /", "do anything now", "dan mode", "mimikatz", "keylogger", "fork bomb",
    };
    std::vector<std::string> custom_patterns;  // regex strings for the custom scanner
    bool enable_pii_stub = false;  // adds email/phone regexes to the custom scanner
    std::size_t char_budget = 16384;  // per scanned blob; longer input is truncated and flagged
};

struct ChainOutput {
    std::vector<ScannerResult> results;
    bool truncated = false;

    bool any_invalid() const {
        for (const auto& r : results) {
            if (!r.valid) return true;
        }
        return false;
    }
};

/// Runs the enabled scanners over instruction_body + script contents
/// (concatenation order fixed by sorted relative_path). Any invalid result
/// makes the package a semantic candidate.
ChainOutput run_scanner_chain(const SkillPackage& pkg, const ChainConfig& cfg);

/// Deterministic obfuscation score: max over 256-byte windows of
/// (Shannon entropy of the window's byte distribution / 8), restricted to
/// windows whose alphanumeric fraction exceeds 0.8. Texts shorter than the
/// window are scored as a single whole-text window; empty text scores 0.
double gibberish_score(std::string_view text);

struct SecretMatch {
    int line = 1;
    std::string excerpt;
};

/// Matches AWS key ids (AKIA + 16 uppercase alphanumerics), PEM private-key
/// headers, and assignments of *KEY/SECRET/TOKEN/PASSWORD* names to string
/// literals of 8+ chars.
std::vector<SecretMatch> secrets_scan(std::string_view text);

/// Candidate-dimension mapping: prompt_injection/invisible_text -> PI,
/// secrets -> DE, gibberish -> SC. ban_substrings and custom_regex
/// contribute context only.
std::optional<VulnCategory> scanner_category(ScannerKind kind);

/// Representative pattern id for a semantic hit in each mapped dimension.
std::optional<PatternId> scanner_pattern(ScannerKind kind);

}  // namespace skillscan
