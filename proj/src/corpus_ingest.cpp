#include "skillscan/corpus_ingest.hpp"

#include <algorithm>
#include <map>

#include "skillscan/errors.hpp"

namespace fs = std::filesystem;

namespace skillscan {

namespace {

bool familiar_codepoint(char32_t cp) {
    if (cp < 128) return true;
    switch (cp) {
        case 0x2018:  // curly quotes
        case 0x2019:
        case 0x201C:
        case 0x201D:
        case 0x2013:  // dashes
        case 0x2014:
        case 0x2026:  // ellipsis
        case 0x00A0:  // nbsp
            return true;
        default: return false;
    }
}

// Minimal UTF-8 decode; malformed bytes count as one (unfamiliar) code point.
std::pair<char32_t, std::size_t> decode_utf8(std::string_view s, std::size_t i) {
    unsigned char c = s[i];
    if (c < 0x80) return {c, 1};
    std::size_t len = 0;
    char32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
        len = 2;
        cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
        len = 3;
        cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
        len = 4;
        cp = c & 0x07;
    } else {
        return {0xFFFD, 1};
    }
    if (i + len > s.size()) return {0xFFFD, 1};
    for (std::size_t k = 1; k < len; ++k) {
        unsigned char cont = s[i + k];
        if ((cont & 0xC0) != 0x80) return {0xFFFD, 1};
        cp = (cp << 6) | (cont & 0x3F);
    }
    return {cp, len};
}

std::string source_label(const fs::path& root, const fs::path& pkg_dir) {
    std::error_code ec;
    fs::path rel = fs::relative(pkg_dir, root, ec);
    if (ec || rel.empty() || rel == ".") return root.filename().string();
    auto it = rel.begin();
    fs::path first = *it;
    if (++it == rel.end()) return root.filename().string();
    return first.string();
}

// Directories containing SKILL.md; does not descend into a package looking
// for nested ones. Sorted for a stable discovery order.
void find_package_dirs(const fs::path& dir, std::vector<fs::path>& out,
                       std::vector<IngestIssue>& issues) {
    std::error_code ec;
    if (fs::exists(dir / "SKILL.md", ec) && !ec) {
        out.push_back(dir);
        return;
    }
    std::vector<fs::path> subdirs;
    fs::directory_iterator it(dir, fs::directory_options::skip_permission_denied, ec);
    if (ec) {
        issues.push_back({dir.string(), ec.message()});
        return;
    }
    for (const auto& entry : it) {
        std::error_code sec;
        if (entry.is_directory(sec) && !sec) subdirs.push_back(entry.path());
    }
    std::sort(subdirs.begin(), subdirs.end());
    for (const fs::path& sub : subdirs) find_package_dirs(sub, out, issues);
}

}  // namespace

const SkillPackage& resolve_duplicate(const SkillPackage& first, const SkillPackage& second,
                                      IngestPolicy::Dedup strategy) {
    if (strategy == IngestPolicy::Dedup::keep_first) return first;
    return metadata_richness(second) > metadata_richness(first) ? second : first;
}

bool non_english_heuristic(std::string_view body) {
    std::int64_t total = 0;
    std::int64_t unfamiliar = 0;
    std::size_t i = 0;
    while (i < body.size()) {
        auto [cp, len] = decode_utf8(body, i);
        ++total;
        if (!familiar_codepoint(cp)) ++unfamiliar;
        i += len;
    }
    if (total == 0) return false;
    return static_cast<double>(unfamiliar) / static_cast<double>(total) > 0.40;
}

IngestResult ingest_corpus(const fs::path& root, const IngestPolicy& policy) {
    IngestResult result;
    std::error_code ec;
    if (!fs::exists(root, ec) || ec) {
        throw Error(Errc::io_error, "corpus root does not exist: " + root.string());
    }

    std::vector<fs::path> dirs;
    find_package_dirs(root, dirs, result.issues);

    std::vector<SkillPackage> parsed(dirs.size());
    std::vector<bool> ok(dirs.size(), false);
    std::vector<IngestIssue> parse_issues(dirs.size());

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(dirs.size()); ++i) {
        try {
            SkillPackage pkg = parse_skill_package(dirs[i]);
            pkg.source = source_label(root, dirs[i]);
            parsed[i] = std::move(pkg);
            ok[i] = true;
        } catch (const std::exception& e) {
            parse_issues[i] = {dirs[i].string(), e.what()};
        }
    }

    // Deterministic sequential reduction over the sorted digest list.
    std::map<std::string, std::size_t> winner_by_digest;  // digest -> index into parsed
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        if (!ok[i]) {
            if (!parse_issues[i].path.empty()) result.issues.push_back(parse_issues[i]);
            continue;
        }
        ++result.stats.discovered;
        auto [it, inserted] = winner_by_digest.try_emplace(parsed[i].id, i);
        if (!inserted) {
            ++result.stats.duplicates_removed;
            const SkillPackage& chosen =
                resolve_duplicate(parsed[it->second], parsed[i], policy.dedup_strategy);
            if (&chosen == &parsed[i]) it->second = i;
        }
    }

    for (const auto& [digest, index] : winner_by_digest) {
        SkillPackage& pkg = parsed[index];
        if (pkg.instruction_line_count < policy.min_instruction_lines) {
            ++result.stats.filtered_short;
            continue;
        }
        if (policy.english_heuristic_enabled && non_english_heuristic(pkg.instruction_body)) {
            ++result.stats.filtered_language;
            continue;
        }
        result.packages.push_back(std::move(pkg));
    }
    result.stats.retained = static_cast<std::int64_t>(result.packages.size());
    return result;
}

}  // namespace skillscan
