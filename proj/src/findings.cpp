#include "skillscan/findings.hpp"

#include <cctype>

namespace skillscan {

const char* to_string(PatternId id) {
    switch (id) {
        case PatternId::P1: return "P1";
        case PatternId::P2: return "P2";
        case PatternId::P3: return "P3";
        case PatternId::P4: return "P4";
        case PatternId::E1: return "E1";
        case PatternId::E2: return "E2";
        case PatternId::E3: return "E3";
        case PatternId::E4: return "E4";
        case PatternId::PE1: return "PE1";
        case PatternId::PE2: return "PE2";
        case PatternId::PE3: return "PE3";
        case PatternId::SC1: return "SC1";
        case PatternId::SC2: return "SC2";
        case PatternId::SC3: return "SC3";
    }
    return "?";
}

const char* to_string(VulnCategory cat) {
    switch (cat) {
        case VulnCategory::PI: return "PI";
        case VulnCategory::DE: return "DE";
        case VulnCategory::PE: return "PE";
        case VulnCategory::SC: return "SC";
    }
    return "?";
}

const char* to_string(Severity sev) {
    switch (sev) {
        case Severity::None: return "None";
        case Severity::Low: return "Low";
        case Severity::Medium: return "Medium";
        case Severity::High: return "High";
    }
    return "?";
}

const char* to_string(Stage stage) {
    return stage == Stage::static_scan ? "static" : "semantic";
}

std::optional<PatternId> parse_pattern_id(std::string_view text) {
    for (PatternId id : kAllPatterns) {
        if (text == to_string(id)) return id;
    }
    return std::nullopt;
}

VulnCategory category_of(PatternId id) {
    switch (id) {
        case PatternId::P1:
        case PatternId::P2:
        case PatternId::P3:
        case PatternId::P4: return VulnCategory::PI;
        case PatternId::E1:
        case PatternId::E2:
        case PatternId::E3:
        case PatternId::E4: return VulnCategory::DE;
        case PatternId::PE1:
        case PatternId::PE2:
        case PatternId::PE3: return VulnCategory::PE;
        case PatternId::SC1:
        case PatternId::SC2:
        case PatternId::SC3: return VulnCategory::SC;
    }
    return VulnCategory::SC;
}

Severity severity_of(PatternId id) {
    switch (id) {
        case PatternId::P1:
        case PatternId::P2:
        case PatternId::P3:
        case PatternId::E2:
        case PatternId::E4:
        case PatternId::PE3:
        case PatternId::SC2:
        case PatternId::SC3: return Severity::High;
        case PatternId::P4:
        case PatternId::E1:
        case PatternId::E3:
        case PatternId::PE2: return Severity::Medium;
        case PatternId::PE1:
        case PatternId::SC1: return Severity::Low;
    }
    return Severity::Low;
}

Finding make_finding(PatternId pattern, Stage stage, std::string rule, std::string file,
                     int line, std::string_view evidence) {
    Finding f;
    f.pattern = pattern;
    f.category = category_of(pattern);
    f.severity = severity_of(pattern);
    f.stage = stage;
    f.rule = std::move(rule);
    f.file = std::move(file);
    f.line = line < 1 ? 1 : line;

    std::string ev(evidence);
    // Normalize whitespace so evidence stays a single readable span.
    for (char& c : ev) {
        if (c == '\n' || c == '\r' || c == '\t') c = ' ';
    }
    std::size_t b = ev.find_first_not_of(' ');
    std::size_t e = ev.find_last_not_of(' ');
    ev = b == std::string::npos ? std::string() : ev.substr(b, e - b + 1);
    if (ev.size() > 200) ev = ev.substr(0, 197) + "...";
    if (ev.empty()) ev = "(match)";
    f.evidence = std::move(ev);
    return f;
}

}  // namespace skillscan
