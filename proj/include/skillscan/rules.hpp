#pragma once

#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "skillscan/findings.hpp"

namespace skillscan {

enum class RuleTarget { code, instr, deps, category };

/// One row of the rules table. Labels are `<pattern_id>[.qualifier]` for
/// detection rules, `SIG.<name>` for combination signals that never emit a
/// finding on their own, and `CAT.<Category>` for categorizer keywords.
struct Rule {
    std::string label;
    RuleTarget target = RuleTarget::code;
    std::string pattern_text;
    std::regex regex;
    std::string description;
    std::optional<PatternId> emits;  // empty for SIG./CAT. rows
    bool is_signal = false;
    std::string category_name;  // set for CAT. rows
};

/// Read-only after load; safe to share across scanning threads.
struct RuleSet {
    std::string version;  // first `# ...` comment line of the source text
    std::vector<Rule> code_rules;
    std::vector<Rule> instr_rules;
    std::vector<Rule> deps_rules;
    std::vector<Rule> category_rules;
};

/// The rules table shipped with the binary.
const std::string& default_rules_text();

/// Parses the tab-separated rules format:
///   label <TAB> target(code|instr|deps|cat) <TAB> regex <TAB> description
/// Lines starting with `#` are comments. Throws Error{bad_config} on a
/// malformed row or unknown label prefix.
RuleSet parse_rules(const std::string& text);

RuleSet load_rules_file(const std::string& path);

RuleSet default_rules();

}  // namespace skillscan
