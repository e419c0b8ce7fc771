#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "skillscan/skill_model.hpp"

namespace skillscan {

struct IngestPolicy {
    enum class Dedup { keep_first, keep_richer_metadata };

    std::int64_t min_instruction_lines = 10;
    bool english_heuristic_enabled = true;
    Dedup dedup_strategy = Dedup::keep_richer_metadata;
};

/// retained = discovered - duplicates_removed - filtered_short - filtered_language
struct IngestStats {
    std::int64_t discovered = 0;
    std::int64_t duplicates_removed = 0;
    std::int64_t filtered_short = 0;
    std::int64_t filtered_language = 0;
    std::int64_t retained = 0;
};

struct IngestIssue {
    std::string path;
    std::string message;
};

struct IngestResult {
    std::vector<SkillPackage> packages;  // one per unique digest, ordered by digest
    IngestStats stats;
    std::vector<IngestIssue> issues;  // per-directory errors, recorded and skipped
};

/// Duplicate resolution for two packages with equal digests; `first` was
/// discovered earlier. keep_richer_metadata picks the higher richness score,
/// ties (and keep_first) go to `first`.
const SkillPackage& resolve_duplicate(const SkillPackage& first, const SkillPackage& second,
                                      IngestPolicy::Dedup strategy);

/// True when more than 40% of the body's code points fall outside ASCII plus
/// common typographic punctuation.
bool non_english_heuristic(std::string_view body);

/// Walks `root` for directories containing SKILL.md, parses them (in
/// parallel when built with OpenMP), deduplicates by content hash, and
/// applies the quality filters. Traversal order never affects the output.
IngestResult ingest_corpus(const std::filesystem::path& root, const IngestPolicy& policy = {});

}  // namespace skillscan
