#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace skillscan {

enum class ScriptLanguage { python, shell, javascript, other };

const char* to_string(ScriptLanguage lang);

/// Total mapping from file extension to language; unknown extensions map to `other`.
ScriptLanguage language_from_extension(const std::string& extension);

/// Parsed SKILL.md frontmatter. `extra` keeps unrecognized or nested keys verbatim.
struct Manifest {
    std::string name;
    std::string description;
    std::vector<std::string> triggers;
    std::vector<std::string> permissions;
    std::map<std::string, std::string> extra;
    // 1-based SKILL.md line of the `permissions:` key, when present.
    int permissions_line = 0;

    bool operator==(const Manifest& other) const {
        return name == other.name && description == other.description &&
               triggers == other.triggers && permissions == other.permissions &&
               extra == other.extra;
    }
};

struct Script {
    std::string relative_path;  // '/'-separated, relative to the package root
    ScriptLanguage language = ScriptLanguage::other;
    std::string content;
    std::int64_t line_count = 0;

    bool operator==(const Script& other) const {
        return relative_path == other.relative_path && language == other.language &&
               content == other.content && line_count == other.line_count;
    }
};

/// Non-fatal conditions noticed while parsing a package.
struct ParseFlags {
    bool degraded_frontmatter = false;  // unterminated or missing fence
    bool lossy_decode = false;          // invalid UTF-8 replaced
    bool oversize_truncated = false;    // a script exceeded the size cap

    bool any() const { return degraded_frontmatter || lossy_decode || oversize_truncated; }
};

/// A dependency manifest bundled with the package (requirements.txt, package.json).
struct DepManifest {
    std::string relative_path;
    std::string content;

    bool operator==(const DepManifest& other) const {
        return relative_path == other.relative_path && content == other.content;
    }
};

/// The unit of scanning: one parsed on-disk skill directory.
///
/// Immutable after construction; safe to share across threads.
struct SkillPackage {
    std::string id;      // SHA-256 hex digest of the canonical serialization
    std::string source;  // origin label (marketplace / subdirectory)
    Manifest manifest;
    std::string instruction_body;  // markdown after the frontmatter
    std::vector<Script> scripts;   // sorted by relative_path
    std::vector<DepManifest> dep_manifests;
    std::int64_t instruction_line_count = 0;  // non-empty lines of instruction_body
    ParseFlags flags;

    bool has_scripts() const { return !scripts.empty(); }
};

/// Count of lines containing at least one non-whitespace character.
std::int64_t instruction_line_count(std::string_view body);

/// Number of newline-delimited lines ("a\nb" -> 2, "a\n" -> 1, "" -> 0).
std::int64_t newline_line_count(std::string_view content);

/// Canonical byte serialization used for hashing:
/// name '\n' description '\n' instruction_body, then each script (sorted by
/// relative_path) as path '\0' content '\0'.
std::string canonical_serialization(const SkillPackage& pkg);

/// Digest over the canonical serialization. Pure function of
/// (manifest name/description, instruction_body, ordered scripts).
std::string content_hash(const SkillPackage& pkg);

/// Parses a skill directory (must contain SKILL.md) into a SkillPackage.
/// Throws Error{missing_skill_md} when SKILL.md is absent. An unterminated
/// frontmatter fence is recoverable: the whole file becomes instruction_body
/// and the package is flagged degraded.
SkillPackage parse_skill_package(const std::filesystem::path& root);

/// Re-emits a package to disk in normalized form (SKILL.md + scripts +
/// dependency manifests). parse(write(parse(x))) == parse(x).
void write_skill_package(const SkillPackage& pkg, const std::filesystem::path& root);

/// Count of populated metadata fields: description, triggers, permissions,
/// plus downloads/ratings when present in the frontmatter extras.
int metadata_richness(const SkillPackage& pkg);

}  // namespace skillscan
