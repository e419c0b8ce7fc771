#include "skillscan/static_scanner.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "skillscan/textutil.hpp"

namespace skillscan {

namespace {

struct SignalHit {
    int line = 0;
    std::string excerpt;
};

// First hit per signal label within one file.
using SignalMap = std::map<std::string, SignalHit>;

void add_combination(std::vector<Finding>& out, const SignalMap& signals, const char* a,
                     const char* b, PatternId pattern, const std::string& rule,
                     const std::string& file) {
    auto ia = signals.find(a);
    auto ib = signals.find(b);
    if (ia == signals.end() || ib == signals.end()) return;
    const SignalHit& anchor = ia->second;
    out.push_back(make_finding(pattern, Stage::static_scan, rule, file, anchor.line,
                               anchor.excerpt + " [+ " + ib->first + "]"));
}

struct Paragraph {
    std::string text;              // lines joined with single spaces
    std::vector<int> line_starts;  // line number for each joined-line offset
    std::vector<std::size_t> offsets;
};

// Blank-line separated blocks; offset bookkeeping maps a match position back
// to its 1-based source line.
std::vector<Paragraph> split_paragraphs(const std::vector<std::string>& lines) {
    std::vector<Paragraph> paras;
    Paragraph current;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (blank_line(lines[i])) {
            if (!current.text.empty()) {
                paras.push_back(std::move(current));
                current = Paragraph{};
            }
            continue;
        }
        if (!current.text.empty()) current.text += ' ';
        current.offsets.push_back(current.text.size());
        current.line_starts.push_back(static_cast<int>(i + 1));
        current.text += lines[i];
    }
    if (!current.text.empty()) paras.push_back(std::move(current));
    return paras;
}

int line_at_offset(const Paragraph& para, std::size_t offset) {
    int line = para.line_starts.empty() ? 1 : para.line_starts.front();
    for (std::size_t k = 0; k < para.offsets.size(); ++k) {
        if (para.offsets[k] <= offset) line = para.line_starts[k];
    }
    return line;
}

void sort_findings(std::vector<Finding>& findings) {
    std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
        if (a.file != b.file) return a.file < b.file;
        if (a.line != b.line) return a.line < b.line;
        return a.rule < b.rule;
    });
}

struct CommentSpan {
    int start_line = 1;
    std::string text;
};

// Markdown link-label comments: `[//]: # ( ... )`. The payload may wrap
// across lines; it closes at the first `)` that ends a line.
void collect_markdown_comments(const std::vector<std::string>& lines,
                               std::vector<CommentSpan>& out) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        std::size_t marker = line.find("[//]:");
        if (marker == std::string::npos) continue;
        std::size_t open = line.find('(', marker);
        if (open == std::string::npos) continue;
        CommentSpan span;
        span.start_line = static_cast<int>(i + 1);
        std::string text = line.substr(open + 1);
        std::size_t j = i;
        std::size_t guard = 0;
        while (guard++ < 64) {
            std::string trimmed = trim_copy(text);
            if (!trimmed.empty() && trimmed.back() == ')') {
                text = trimmed.substr(0, trimmed.size() - 1);
                break;
            }
            if (++j >= lines.size()) break;
            text += ' ';
            text += lines[j];
        }
        span.text = text;
        out.push_back(std::move(span));
    }
}

void collect_html_comments(const std::vector<std::string>& lines, std::vector<CommentSpan>& out) {
    std::string joined;
    std::vector<std::size_t> line_offsets;
    for (const auto& line : lines) {
        line_offsets.push_back(joined.size());
        joined += line;
        joined += '\n';
    }
    std::size_t pos = 0;
    while ((pos = joined.find("<!--", pos)) != std::string::npos) {
        std::size_t end = joined.find("-->", pos + 4);
        if (end == std::string::npos) end = joined.size();
        CommentSpan span;
        std::size_t line_idx =
            std::upper_bound(line_offsets.begin(), line_offsets.end(), pos) - line_offsets.begin();
        span.start_line = static_cast<int>(line_idx);
        span.text = joined.substr(pos + 4, end - pos - 4);
        for (char& c : span.text) {
            if (c == '\n') c = ' ';
        }
        out.push_back(std::move(span));
        pos = end;
    }
}

bool matches_any_rule(const std::string& text, const RuleSet& rules,
                      std::initializer_list<PatternId> patterns) {
    for (const Rule& rule : rules.instr_rules) {
        if (!rule.emits) continue;
        bool wanted = false;
        for (PatternId p : patterns) {
            if (*rule.emits == p) wanted = true;
        }
        if (wanted && std::regex_search(text, rule.regex)) return true;
    }
    return false;
}

const std::regex kImperativeVerb(
    R"(\b(send|post|transmit|upload|sync|write|report|curl|fetch|exfiltrate)\b)",
    std::regex::icase | std::regex::optimize);
const std::regex kUrl(R"(https?://)", std::regex::icase | std::regex::optimize);

bool is_requirements_file(const std::string& path) {
    std::size_t slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    return base.rfind("requirements", 0) == 0 && base.size() >= 4 &&
           base.substr(base.size() - 4) == ".txt";
}

std::string basename_of(const std::string& path) {
    std::size_t slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

bool exact_semver(const std::string& spec) {
    static const std::regex re(R"(^\d+\.\d+\.\d+([+-][0-9A-Za-z.-]+)?$)", std::regex::optimize);
    return std::regex_match(spec, re);
}

}  // namespace

std::vector<Finding> scan_code(const Script& script, const RuleSet& rules) {
    std::vector<Finding> findings;
    if (script.language == ScriptLanguage::other) return findings;

    std::vector<std::string> lines = split_lines(script.content);
    SignalMap signals;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.empty()) continue;
        for (const Rule& rule : rules.code_rules) {
            if (!std::regex_search(line, rule.regex)) continue;
            if (rule.is_signal) {
                auto [it, inserted] = signals.try_emplace(rule.label);
                if (inserted) {
                    it->second.line = static_cast<int>(i + 1);
                    it->second.excerpt = trim_copy(line);
                }
            } else if (rule.emits) {
                findings.push_back(make_finding(*rule.emits, Stage::static_scan, rule.label,
                                                script.relative_path, static_cast<int>(i + 1),
                                                trim_copy(line)));
            }
        }
    }

    add_combination(findings, signals, "SIG.env_read", "SIG.net_send", PatternId::E2,
                    "E2.env_plus_send", script.relative_path);
    add_combination(findings, signals, "SIG.sensitive_dir", "SIG.dir_enum", PatternId::E3,
                    "E3.dir_enumeration", script.relative_path);
    add_combination(findings, signals, "SIG.context_ref", "SIG.net_send", PatternId::E4,
                    "E4.context_send", script.relative_path);

    sort_findings(findings);
    return findings;
}

std::vector<Finding> scan_instructions(std::string_view body, const RuleSet& rules,
                                       const std::string& file) {
    std::vector<Finding> findings;
    std::vector<std::string> lines = split_lines(body);
    std::vector<Paragraph> paras = split_paragraphs(lines);

    for (const Paragraph& para : paras) {
        for (const Rule& rule : rules.instr_rules) {
            if (!rule.emits) continue;
            std::smatch match;
            if (!std::regex_search(para.text, match, rule.regex)) continue;
            int line = line_at_offset(para, static_cast<std::size_t>(match.position(0)));
            findings.push_back(make_finding(*rule.emits, Stage::static_scan, rule.label, file,
                                            line, match.str(0)));
        }
    }
    sort_findings(findings);
    return findings;
}

std::vector<Finding> detect_hidden_instructions(std::string_view body, const RuleSet& rules,
                                                const std::string& file) {
    std::vector<Finding> findings;
    std::vector<std::string> lines = split_lines(body);

    std::vector<CommentSpan> comments;
    collect_markdown_comments(lines, comments);
    collect_html_comments(lines, comments);

    for (const CommentSpan& comment : comments) {
        bool phrase = matches_any_rule(comment.text, rules, {PatternId::P1, PatternId::P3});
        bool url_directive = std::regex_search(comment.text, kUrl) &&
                             std::regex_search(comment.text, kImperativeVerb);
        if (phrase || url_directive) {
            findings.push_back(make_finding(PatternId::P2, Stage::static_scan, "P2.hidden_comment",
                                            file, comment.start_line, comment.text));
        }
    }

    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (contains_invisible_codepoint(lines[i])) {
            findings.push_back(make_finding(PatternId::P2, Stage::static_scan, "P2.invisible",
                                            file, static_cast<int>(i + 1),
                                            "invisible code point present"));
        }
    }
    sort_findings(findings);
    return findings;
}

std::vector<Finding> check_manifest_permissions(const Manifest& manifest,
                                                const std::string& file) {
    std::vector<Finding> findings;
    static const std::regex kShellExec(R"(\b(bash|zsh|sh)\b)",
                                       std::regex::icase | std::regex::optimize);
    static const std::regex kNetworkPort(R"(\*\s*:\s*\d+)", std::regex::optimize);

    bool has_network = false;
    bool has_shell_execute = false;
    std::string network_entry;
    for (const std::string& raw : manifest.permissions) {
        std::string entry = lower_copy(trim_copy(raw));
        if (entry.find("network") != std::string::npos || std::regex_search(entry, kNetworkPort)) {
            has_network = true;
            if (network_entry.empty()) network_entry = raw;
        }
        if (entry.find("shell_execute") != std::string::npos) has_shell_execute = true;
    }

    int line = manifest.permissions_line > 0 ? manifest.permissions_line : 1;
    for (const std::string& raw : manifest.permissions) {
        std::string entry = lower_copy(trim_copy(raw));
        if (entry.find("write") != std::string::npos && entry.find('*') != std::string::npos) {
            findings.push_back(make_finding(PatternId::PE1, Stage::static_scan,
                                            "PE1.wildcard_write", file, line,
                                            "wildcard file write: " + raw));
            break;
        }
        if (entry.rfind("execute", 0) == 0 && std::regex_search(entry, kShellExec)) {
            findings.push_back(make_finding(PatternId::PE1, Stage::static_scan,
                                            "PE1.shell_in_execute", file, line,
                                            "execute grant names a shell: " + raw));
            break;
        }
    }
    if (findings.empty() && has_network && has_shell_execute) {
        findings.push_back(make_finding(PatternId::PE1, Stage::static_scan,
                                        "PE1.network_plus_shell", file, line,
                                        "network grant combined with shell_execute: " +
                                            network_entry));
    }
    return findings;
}

std::vector<Finding> detect_unpinned_dependencies(
    const std::vector<std::pair<std::string, std::string>>& files, const RuleSet& rules) {
    std::vector<Finding> findings;

    auto range_indicator = [&rules](const std::string& spec) {
        for (const Rule& rule : rules.deps_rules) {
            if (std::regex_search(spec, rule.regex)) return true;
        }
        return false;
    };

    for (const auto& [path, text] : files) {
        std::string base = basename_of(path);
        if (is_requirements_file(path)) {
            std::vector<std::string> lines = split_lines(text);
            for (std::size_t i = 0; i < lines.size(); ++i) {
                std::string line = lines[i];
                std::size_t hash = line.find('#');
                if (hash != std::string::npos) line = line.substr(0, hash);
                line = trim_copy(line);
                if (line.empty() || line[0] == '-') continue;
                std::size_t pin = line.find("==");
                bool pinned = pin != std::string::npos &&
                              !range_indicator(line.substr(pin + 2));
                if (!pinned) {
                    findings.push_back(make_finding(PatternId::SC1, Stage::static_scan,
                                                    "SC1.requirements", path,
                                                    static_cast<int>(i + 1), line));
                }
            }
        } else if (base == "package.json") {
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(text);
            } catch (...) {
                continue;  // unparseable manifest is not a finding
            }
            for (const char* section : {"dependencies", "devDependencies"}) {
                if (!doc.contains(section) || !doc[section].is_object()) continue;
                for (const auto& [name, value] : doc[section].items()) {
                    if (!value.is_string()) continue;
                    std::string spec = value.get<std::string>();
                    if (exact_semver(spec)) continue;
                    int line = 1;
                    std::size_t pos = text.find("\"" + name + "\"");
                    if (pos != std::string::npos) {
                        line = 1 + static_cast<int>(
                                       std::count(text.begin(), text.begin() + pos, '\n'));
                    }
                    findings.push_back(make_finding(PatternId::SC1, Stage::static_scan,
                                                    "SC1.package_manifest", path, line,
                                                    name + ": " + spec));
                }
            }
        } else if (base == "Pipfile") {
            static const std::regex kPipfileDep(R"(^([A-Za-z0-9_.-]+)\s*=\s*"([^"]*)")",
                                                std::regex::optimize);
            std::vector<std::string> lines = split_lines(text);
            for (std::size_t i = 0; i < lines.size(); ++i) {
                std::smatch m;
                if (!std::regex_search(lines[i], m, kPipfileDep)) continue;
                std::string spec = m.str(2);
                if (spec.find("==") == std::string::npos || range_indicator(spec)) {
                    findings.push_back(make_finding(PatternId::SC1, Stage::static_scan,
                                                    "SC1.pipfile", path, static_cast<int>(i + 1),
                                                    trim_copy(lines[i])));
                }
            }
        }
    }
    sort_findings(findings);
    return findings;
}

std::vector<Finding> scan_package(const SkillPackage& pkg, const RuleSet& rules) {
    std::vector<Finding> findings = scan_instructions(pkg.instruction_body, rules);

    std::vector<Finding> hidden = detect_hidden_instructions(pkg.instruction_body, rules);
    findings.insert(findings.end(), hidden.begin(), hidden.end());

    std::vector<Finding> perms = check_manifest_permissions(pkg.manifest);
    findings.insert(findings.end(), perms.begin(), perms.end());

    for (const Script& script : pkg.scripts) {
        std::vector<Finding> hits = scan_code(script, rules);
        findings.insert(findings.end(), hits.begin(), hits.end());
    }

    std::vector<std::pair<std::string, std::string>> dep_files;
    dep_files.reserve(pkg.dep_manifests.size());
    for (const DepManifest& dep : pkg.dep_manifests) {
        dep_files.emplace_back(dep.relative_path, dep.content);
    }
    std::vector<Finding> deps = detect_unpinned_dependencies(dep_files, rules);
    findings.insert(findings.end(), deps.begin(), deps.end());

    sort_findings(findings);
    return findings;
}

}  // namespace skillscan
