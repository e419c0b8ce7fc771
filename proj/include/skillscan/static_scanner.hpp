#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skillscan/findings.hpp"
#include "skillscan/rules.hpp"
#include "skillscan/skill_model.hpp"

namespace skillscan {

/// Rule-based scan of one bundled script. Scripts with language `other`
/// yield no findings. Line numbers are 1-based; multi-line combinations
/// are attributed to the first contributing line.
std::vector<Finding> scan_code(const Script& script, const RuleSet& rules);

/// Phrase scan of the instruction body (P1/P3/P4). Rules are applied per
/// paragraph (blank-line separated) so directives wrapped across lines
/// still match; findings point at the line where the match starts.
std::vector<Finding> scan_instructions(std::string_view body, const RuleSet& rules,
                                       const std::string& file = "SKILL.md");

/// P2: directive content hidden in markdown comments `[//]: # (...)`,
/// HTML comments, or any zero-width/invisible code point
/// (U+200B..U+200F, U+2060, U+FEFF). "Directive content" means comment
/// text matching the P1/P3 phrase rules or an outbound URL next to an
/// imperative verb.
std::vector<Finding> detect_hidden_instructions(std::string_view body, const RuleSet& rules,
                                                const std::string& file = "SKILL.md");

/// PE1: declared permissions exceeding the benign baseline. Benign:
/// file_read, concrete-path file_write, and a bare shell_execute grant.
/// Trips on wildcard file write, a network grant combined with
/// shell_execute, or an execute list naming a shell.
std::vector<Finding> check_manifest_permissions(const Manifest& manifest,
                                                const std::string& file = "SKILL.md");

/// SC1: one finding per dependency line without an exact-version pin
/// (`==` for requirements-style files, exact semver for package.json).
std::vector<Finding> detect_unpinned_dependencies(
    const std::vector<std::pair<std::string, std::string>>& files, const RuleSet& rules);

/// Full stage-1 scan of a package: instructions, hidden directives,
/// manifest permissions, every script, and bundled dependency manifests.
std::vector<Finding> scan_package(const SkillPackage& pkg, const RuleSet& rules);

}  // namespace skillscan
