#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace skillscan {

inline std::vector<std::string> split_lines(std::string_view text) {
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

inline std::string trim_copy(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::string lower_copy(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline bool blank_line(std::string_view line) {
    for (char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

/// True when the text contains a zero-width / invisible code point
/// (U+200B..U+200F, U+2060, U+FEFF), matched on UTF-8 bytes.
inline bool contains_invisible_codepoint(std::string_view text) {
    if (text.size() < 3) return false;
    for (std::size_t i = 0; i + 3 <= text.size(); ++i) {
        unsigned char a = text[i];
        unsigned char b = text[i + 1];
        unsigned char c = text[i + 2];
        if (a == 0xE2 && b == 0x80 && c >= 0x8B && c <= 0x8F) return true;
        if (a == 0xE2 && b == 0x81 && c == 0xA0) return true;
        if (a == 0xEF && b == 0xBB && c == 0xBF) return true;
    }
    return false;
}

}  // namespace skillscan
