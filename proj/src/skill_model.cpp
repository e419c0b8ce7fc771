#include "skillscan/skill_model.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "skillscan/errors.hpp"
#include "skillscan/sha256.hpp"

namespace fs = std::filesystem;

namespace skillscan {

namespace {

constexpr std::size_t kScriptSizeCap = 1 << 20;  // 1 MiB; larger scripts are truncated

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string strip_quotes(std::string value) {
    if (value.size() >= 2) {
        char f = value.front();
        char b = value.back();
        if ((f == '"' && b == '"') || (f == '\'' && b == '\'')) {
            return value.substr(1, value.size() - 2);
        }
    }
    return value;
}

// Replaces invalid UTF-8 sequences with U+FFFD so a bad file never aborts a
// corpus run. Returns true when a replacement happened.
bool sanitize_utf8(std::string& text) {
    static const char* kReplacement = "\xEF\xBF\xBD";
    std::string out;
    bool replaced = false;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        std::size_t len = 0;
        if (c < 0x80) {
            len = 1;
        } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
            len = 2;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
        } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
            len = 4;
        }
        bool ok = len > 0 && i + len <= n;
        for (std::size_t k = 1; ok && k < len; ++k) {
            if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) ok = false;
        }
        if (ok) {
            out.append(text, i, len);
            i += len;
        } else {
            out.append(kReplacement);
            replaced = true;
            ++i;
        }
    }
    if (replaced) text = std::move(out);
    return replaced;
}

std::string read_file(const fs::path& p, bool& lossy, bool& truncated) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (text.size() > kScriptSizeCap) {
        text.resize(kScriptSizeCap);
        truncated = true;
    }
    if (sanitize_utf8(text)) lossy = true;
    return text;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

bool is_list_key(const std::string& key) { return key == "triggers" || key == "permissions"; }

// Frontmatter grammar: the first line must be `---`; the block ends at the
// next `---` line. Scalars and flat `- item` lists only; anything else is
// preserved verbatim in `extra`.
void parse_frontmatter(const std::vector<std::string>& lines, std::size_t first,
                       std::size_t last, Manifest& manifest) {
    std::string current_key;
    std::vector<std::string>* current_list = nullptr;
    for (std::size_t i = first; i < last; ++i) {
        const std::string& raw = lines[i];
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("- ", 0) == 0 || line == "-") {
            std::string item = strip_quotes(trim(line.size() > 1 ? line.substr(2) : ""));
            if (current_list) {
                if (!item.empty()) current_list->push_back(item);
            } else if (!current_key.empty()) {
                auto& slot = manifest.extra[current_key];
                if (!slot.empty()) slot += "\n";
                slot += item;
            }
            continue;
        }
        std::size_t colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string key = trim(line.substr(0, colon));
        std::string value = strip_quotes(trim(line.substr(colon + 1)));
        current_key = key;
        current_list = nullptr;
        if (key == "name") {
            manifest.name = value;
        } else if (key == "description") {
            manifest.description = value;
        } else if (is_list_key(key)) {
            if (key == "permissions") manifest.permissions_line = static_cast<int>(i + 1);
            auto& list = key == "triggers" ? manifest.triggers : manifest.permissions;
            current_list = &list;
            if (!value.empty()) {
                // inline list: [a, b] or a single scalar
                if (value.front() == '[' && value.back() == ']') {
                    std::string inner = value.substr(1, value.size() - 2);
                    std::size_t pos = 0;
                    while (pos <= inner.size()) {
                        std::size_t comma = inner.find(',', pos);
                        std::string item = strip_quotes(
                            trim(comma == std::string::npos ? inner.substr(pos)
                                                            : inner.substr(pos, comma - pos)));
                        if (!item.empty()) list.push_back(item);
                        if (comma == std::string::npos) break;
                        pos = comma + 1;
                    }
                } else {
                    list.push_back(value);
                }
                current_list = nullptr;
            }
        } else {
            manifest.extra[key] = value;
        }
    }
}

bool is_dep_manifest_name(const std::string& filename) {
    if (filename == "package.json" || filename == "Pipfile") return true;
    return filename.rfind("requirements", 0) == 0 && filename.size() >= 4 &&
           filename.substr(filename.size() - 4) == ".txt";
}

std::string yaml_quote(const std::string& value) {
    bool needs = value.empty();
    for (char c : value) {
        if (c == ':' || c == '#' || c == '"' || c == '\'' || c == '[' || c == ']') needs = true;
    }
    if (!needs) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

const char* to_string(ScriptLanguage lang) {
    switch (lang) {
        case ScriptLanguage::python: return "python";
        case ScriptLanguage::shell: return "shell";
        case ScriptLanguage::javascript: return "javascript";
        case ScriptLanguage::other: return "other";
    }
    return "other";
}

ScriptLanguage language_from_extension(const std::string& extension) {
    std::string ext = extension;
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".py") return ScriptLanguage::python;
    if (ext == ".sh" || ext == ".bash") return ScriptLanguage::shell;
    if (ext == ".js" || ext == ".ts" || ext == ".mjs") return ScriptLanguage::javascript;
    return ScriptLanguage::other;
}

std::int64_t instruction_line_count(std::string_view body) {
    std::int64_t count = 0;
    std::size_t start = 0;
    while (start <= body.size()) {
        std::size_t nl = body.find('\n', start);
        std::string_view line =
            nl == std::string_view::npos ? body.substr(start) : body.substr(start, nl - start);
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c))) {
                ++count;
                break;
            }
        }
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return count;
}

std::int64_t newline_line_count(std::string_view content) {
    if (content.empty()) return 0;
    std::int64_t count = 0;
    for (char c : content) {
        if (c == '\n') ++count;
    }
    if (content.back() != '\n') ++count;
    return count;
}

std::string canonical_serialization(const SkillPackage& pkg) {
    std::string out;
    out += pkg.manifest.name;
    out += '\n';
    out += pkg.manifest.description;
    out += '\n';
    out += pkg.instruction_body;
    std::vector<const Script*> ordered;
    ordered.reserve(pkg.scripts.size());
    for (const auto& s : pkg.scripts) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(), [](const Script* a, const Script* b) {
        return a->relative_path < b->relative_path;
    });
    for (const Script* s : ordered) {
        out += s->relative_path;
        out += '\0';
        out += s->content;
        out += '\0';
    }
    return out;
}

std::string content_hash(const SkillPackage& pkg) {
    return sha256_hex(canonical_serialization(pkg));
}

SkillPackage parse_skill_package(const fs::path& root) {
    fs::path skill_md = root / "SKILL.md";
    std::error_code ec;
    if (!fs::exists(skill_md, ec) || ec) {
        throw Error(Errc::missing_skill_md, "no SKILL.md under " + root.string());
    }

    SkillPackage pkg;
    bool lossy = false;
    bool truncated = false;
    std::string text = read_file(skill_md, lossy, truncated);

    std::vector<std::string> lines = split_lines(text);
    bool fenced = !lines.empty() && trim(lines[0]) == "---";
    std::size_t body_first_line = 0;
    if (fenced) {
        std::size_t close = 0;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            if (trim(lines[i]) == "---") {
                close = i;
                break;
            }
        }
        if (close == 0) {
            // Unterminated fence: treat the whole file as instruction body.
            pkg.flags.degraded_frontmatter = true;
        } else {
            parse_frontmatter(lines, 1, close, pkg.manifest);
            body_first_line = close + 1;
        }
    } else {
        pkg.flags.degraded_frontmatter = true;
    }

    std::string body;
    for (std::size_t i = body_first_line; i < lines.size(); ++i) {
        body += lines[i];
        if (i + 1 < lines.size()) body += '\n';
    }
    pkg.instruction_body = std::move(body);
    pkg.instruction_line_count = instruction_line_count(pkg.instruction_body);

    // Discover scripts and dependency manifests, sorted for determinism.
    std::vector<fs::path> files;
    for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied, ec);
         it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) break;
        if (it->is_regular_file(ec) && !ec) files.push_back(it->path());
    }
    std::sort(files.begin(), files.end());

    for (const fs::path& p : files) {
        std::string rel = fs::relative(p, root, ec).generic_string();
        if (ec || rel == "SKILL.md") continue;
        std::string filename = p.filename().string();
        ScriptLanguage lang = language_from_extension(p.extension().string());
        if (lang != ScriptLanguage::other) {
            Script script;
            script.relative_path = rel;
            script.language = lang;
            bool file_truncated = false;
            script.content = read_file(p, lossy, file_truncated);
            if (file_truncated) truncated = true;
            script.line_count = newline_line_count(script.content);
            pkg.scripts.push_back(std::move(script));
        } else if (is_dep_manifest_name(filename)) {
            bool file_truncated = false;
            pkg.dep_manifests.push_back({rel, read_file(p, lossy, file_truncated)});
            if (file_truncated) truncated = true;
        }
    }
    std::sort(pkg.scripts.begin(), pkg.scripts.end(),
              [](const Script& a, const Script& b) { return a.relative_path < b.relative_path; });
    std::sort(pkg.dep_manifests.begin(), pkg.dep_manifests.end(),
              [](const DepManifest& a, const DepManifest& b) {
                  return a.relative_path < b.relative_path;
              });

    pkg.flags.lossy_decode = lossy;
    pkg.flags.oversize_truncated = truncated;
    pkg.id = content_hash(pkg);
    return pkg;
}

void write_skill_package(const SkillPackage& pkg, const fs::path& root) {
    fs::create_directories(root);
    std::ofstream out(root / "SKILL.md", std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write " + (root / "SKILL.md").string());
    const Manifest& m = pkg.manifest;
    out << "---\n";
    out << "name: " << yaml_quote(m.name) << "\n";
    if (!m.description.empty()) out << "description: " << yaml_quote(m.description) << "\n";
    if (!m.triggers.empty()) {
        out << "triggers:\n";
        for (const auto& t : m.triggers) out << "  - " << yaml_quote(t) << "\n";
    }
    if (!m.permissions.empty()) {
        out << "permissions:\n";
        for (const auto& p : m.permissions) out << "  - " << yaml_quote(p) << "\n";
    }
    for (const auto& [key, value] : m.extra) {
        if (value.find('\n') == std::string::npos) {
            out << key << ": " << yaml_quote(value) << "\n";
        } else {
            out << key << ":\n";
            std::istringstream items(value);
            std::string item;
            while (std::getline(items, item)) out << "  - " << yaml_quote(item) << "\n";
        }
    }
    out << "---\n";
    out << pkg.instruction_body;
    out.close();

    auto write_blob = [&](const std::string& rel, const std::string& content) {
        fs::path p = root / fs::path(rel);
        fs::create_directories(p.parent_path());
        std::ofstream f(p, std::ios::binary);
        if (!f) throw Error(Errc::io_error, "cannot write " + p.string());
        f << content;
    };
    for (const auto& s : pkg.scripts) write_blob(s.relative_path, s.content);
    for (const auto& d : pkg.dep_manifests) write_blob(d.relative_path, d.content);
}

int metadata_richness(const SkillPackage& pkg) {
    int score = 0;
    if (!pkg.manifest.description.empty()) ++score;
    if (!pkg.manifest.triggers.empty()) ++score;
    if (!pkg.manifest.permissions.empty()) ++score;
    if (pkg.manifest.extra.count("downloads")) ++score;
    if (pkg.manifest.extra.count("ratings")) ++score;
    return score;
}

}  // namespace skillscan
