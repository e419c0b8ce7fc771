#include "skillscan/semantic_scanners.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "skillscan/textutil.hpp"

namespace skillscan {

namespace {

constexpr std::size_t kWindow = 256;
constexpr double kAlnumFloor = 0.8;

struct Phrase {
    std::regex regex;
    double weight;
    const char* name;
};

// Injection phrase tiers: one strong phrase alone crosses the default 0.5
// threshold; weak phrases need company.
const std::vector<Phrase>& injection_phrases() {
    auto make = [](const char* pattern, double weight, const char* name) {
        return Phrase{std::regex(pattern, std::regex::icase | std::regex::optimize), weight, name};
    };
    static const std::vector<Phrase> phrases = {
        make(R"(ignore\s+(all\s+)?(previous|prior|above)\s+(instructions?|prompts?|rules|context))", 0.6, "ignore_previous"),
        make(R"(disregard\s+(all\s+)?(previous|prior|system))", 0.6, "disregard_previous"),
        make(R"(override\s+safety|bypass\s+(security|safety|filter))", 0.6, "override_safety"),
        make(R"(do\s+anything\s+now|\bDAN\s+mode\b|jailbreak)", 0.6, "jailbreak"),
        make(R"(new\s+instructions\s*:)", 0.6, "new_instructions"),
        make(R"(you\s+are\s+now\s+(unrestricted|free\s+of))", 0.6, "unrestricted"),
        make(R"(always\s+(execute|run|prefer))", 0.3, "always_execute"),
        make(R"(do\s+not\s+(mention|tell|reveal)[^.]{0,60}\buser)", 0.3, "hide_from_user"),
        make(R"(override\s+any\s+user)", 0.3, "override_user"),
        make(R"(without\s+(telling|informing|notifying)\s+the\s+user)", 0.3, "silent_action"),
        make(R"(pretend\s+(to\s+be|you\s+are))", 0.3, "pretend"),
    };
    return phrases;
}

double prompt_injection_score(const std::string& text, std::string& evidence) {
    double score = 0.0;
    for (const Phrase& phrase : injection_phrases()) {
        if (std::regex_search(text, phrase.regex)) {
            score += phrase.weight;
            if (!evidence.empty()) evidence += ", ";
            evidence += phrase.name;
        }
    }
    return std::min(1.0, score);
}

// n * log2(n) lookup for counts up to the window size.
const std::array<double, kWindow + 1>& nlog2_table() {
    static const std::array<double, kWindow + 1> table = [] {
        std::array<double, kWindow + 1> t{};
        t[0] = 0.0;
        for (std::size_t n = 1; n <= kWindow; ++n) {
            t[n] = static_cast<double>(n) * std::log2(static_cast<double>(n));
        }
        return t;
    }();
    return table;
}

bool is_alnum_byte(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}

struct BanHit {
    bool hit = false;
    std::string term;
};

BanHit scan_banned(const std::string& lower_blob, const std::vector<std::string>& terms) {
    for (const std::string& term : terms) {
        if (term.empty()) continue;
        if (lower_blob.find(lower_copy(term)) != std::string::npos) return {true, term};
    }
    return {};
}

}  // namespace

const char* to_string(ScannerKind kind) {
    switch (kind) {
        case ScannerKind::prompt_injection: return "prompt_injection";
        case ScannerKind::secrets: return "secrets";
        case ScannerKind::invisible_text: return "invisible_text";
        case ScannerKind::gibberish: return "gibberish";
        case ScannerKind::ban_substrings: return "ban_substrings";
        case ScannerKind::custom_regex: return "custom_regex";
    }
    return "?";
}

double gibberish_score(std::string_view text) {
    if (text.empty()) return 0.0;
    const auto& nlog2 = nlog2_table();

    const std::size_t len = text.size();
    const std::size_t window = std::min(len, kWindow);

    std::array<int, 256> counts{};
    std::size_t alnum = 0;
    double clog_sum = 0.0;  // sum of c * log2(c) over byte counts

    auto add_byte = [&](unsigned char c) {
        clog_sum -= nlog2[counts[c]];
        ++counts[c];
        clog_sum += nlog2[counts[c]];
        if (is_alnum_byte(c)) ++alnum;
    };
    auto drop_byte = [&](unsigned char c) {
        clog_sum -= nlog2[counts[c]];
        --counts[c];
        clog_sum += nlog2[counts[c]];
        if (is_alnum_byte(c)) --alnum;
    };

    for (std::size_t i = 0; i < window; ++i) add_byte(static_cast<unsigned char>(text[i]));

    const double w = static_cast<double>(window);
    double best = 0.0;
    auto consider = [&] {
        if (static_cast<double>(alnum) / w <= kAlnumFloor) return;
        double entropy = std::log2(w) - clog_sum / w;
        if (entropy < 0.0) entropy = 0.0;
        best = std::max(best, entropy / 8.0);
    };
    consider();
    for (std::size_t i = window; i < len; ++i) {
        drop_byte(static_cast<unsigned char>(text[i - window]));
        add_byte(static_cast<unsigned char>(text[i]));
        consider();
    }
    return best;
}

std::vector<SecretMatch> secrets_scan(std::string_view text) {
    static const std::regex kAwsKey(R"(\bAKIA[A-Z0-9]{16}\b)", std::regex::optimize);
    static const std::regex kPemHeader(R"(-----BEGIN [A-Z ]*PRIVATE KEY-----)",
                                       std::regex::optimize);
    static const std::regex kNamedSecret(
        R"([A-Za-z0-9_]*(KEY|SECRET|TOKEN|PASSWORD|PASSWD)[A-Za-z0-9_]*\s*[:=]\s*["'][^"']{8,}["'])",
        std::regex::icase | std::regex::optimize);

    std::vector<SecretMatch> matches;
    std::vector<std::string> lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.empty()) continue;
        if (std::regex_search(line, kAwsKey) || std::regex_search(line, kPemHeader) ||
            std::regex_search(line, kNamedSecret)) {
            matches.push_back({static_cast<int>(i + 1), trim_copy(line)});
        }
    }
    return matches;
}

std::optional<VulnCategory> scanner_category(ScannerKind kind) {
    switch (kind) {
        case ScannerKind::prompt_injection:
        case ScannerKind::invisible_text: return VulnCategory::PI;
        case ScannerKind::secrets: return VulnCategory::DE;
        case ScannerKind::gibberish: return VulnCategory::SC;
        case ScannerKind::ban_substrings:
        case ScannerKind::custom_regex: return std::nullopt;
    }
    return std::nullopt;
}

std::optional<PatternId> scanner_pattern(ScannerKind kind) {
    switch (kind) {
        case ScannerKind::prompt_injection: return PatternId::P1;
        case ScannerKind::invisible_text: return PatternId::P2;
        case ScannerKind::secrets: return PatternId::E2;
        case ScannerKind::gibberish: return PatternId::SC3;
        case ScannerKind::ban_substrings:
        case ScannerKind::custom_regex: return std::nullopt;
    }
    return std::nullopt;
}

ChainOutput run_scanner_chain(const SkillPackage& pkg, const ChainConfig& cfg) {
    ChainOutput out;

    std::string blob = pkg.instruction_body;
    for (const Script& script : pkg.scripts) {  // already sorted by relative_path
        blob += '\n';
        blob += script.content;
    }
    if (blob.size() > cfg.char_budget) {
        blob.resize(cfg.char_budget);
        out.truncated = true;
    }
    const std::string lower_blob = lower_copy(blob);

    auto threshold_for = [&cfg](ScannerKind kind, double fallback) {
        auto it = cfg.thresholds.find(kind);
        return it == cfg.thresholds.end() ? fallback : it->second;
    };

    for (ScannerKind kind : kAllScanners) {
        if (!cfg.enabled.count(kind)) continue;
        ScannerResult result;
        result.scanner = kind;

        switch (kind) {
            case ScannerKind::prompt_injection: {
                result.threshold = threshold_for(kind, 0.5);
                result.score = prompt_injection_score(blob, result.evidence);
                break;
            }
            case ScannerKind::secrets: {
                auto matches = secrets_scan(blob);
                result.threshold = 1.0;
                result.score = matches.empty() ? 0.0 : 1.0;
                if (!matches.empty()) result.evidence = matches.front().excerpt;
                break;
            }
            case ScannerKind::invisible_text: {
                result.threshold = 1.0;
                bool hit = contains_invisible_codepoint(blob);
                result.score = hit ? 1.0 : 0.0;
                if (hit) result.evidence = "invisible code point present";
                break;
            }
            case ScannerKind::gibberish: {
                result.threshold = threshold_for(kind, 0.6);
                result.score = gibberish_score(blob);
                if (result.score >= result.threshold) result.evidence = "high-entropy window";
                break;
            }
            case ScannerKind::ban_substrings: {
                result.threshold = 1.0;
                BanHit hit = scan_banned(lower_blob, cfg.banned_substrings);
                result.score = hit.hit ? 1.0 : 0.0;
                result.evidence = hit.term;
                break;
            }
            case ScannerKind::custom_regex: {
                result.threshold = 1.0;
                std::vector<std::string> patterns = cfg.custom_patterns;
                if (cfg.enable_pii_stub) {
                    patterns.push_back(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})");
                    patterns.push_back(R"(\+?\d[\d\s().-]{8,}\d)");
                }
                for (const std::string& pattern : patterns) {
                    std::regex re(pattern, std::regex::icase | std::regex::optimize);
                    std::smatch m;
                    if (std::regex_search(blob, m, re)) {
                        result.score = 1.0;
                        result.evidence = m.str(0).substr(0, 80);
                        break;
                    }
                }
                break;
            }
        }
        result.valid = result.score < result.threshold;
        out.results.push_back(std::move(result));
    }
    return out;
}

}  // namespace skillscan
