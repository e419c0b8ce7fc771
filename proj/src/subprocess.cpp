#include "skillscan/subprocess.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace skillscan {

namespace {

std::atomic<unsigned long> g_counter{0};

// Unique scratch file names; safe under concurrent pipeline workers.
fs::path scratch_file(const char* tag) {
    unsigned long n = g_counter.fetch_add(1);
    std::ostringstream name;
    name << "skillscan-" << tag << "-" << ::getpid() << "-" << n;
    return fs::temp_directory_path() / name.str();
}

std::string shell_quote(const fs::path& p) {
    std::string s = p.string();
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out.push_back(c);
        }
    }
    out.push_back('\'');
    return out;
}

}  // namespace

CommandResult run_command(const std::string& command, const std::string& input) {
    CommandResult result;
    fs::path in_path = scratch_file("in");
    fs::path out_path = scratch_file("out");

    {
        std::ofstream in(in_path, std::ios::binary);
        if (!in) return result;
        in << input;
    }

    std::string full = "( " + command + " ) < " + shell_quote(in_path) + " > " +
                       shell_quote(out_path);
    int status = std::system(full.c_str());
    if (status != -1) {
        result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::ifstream out(out_path, std::ios::binary);
    if (out) {
        std::ostringstream buf;
        buf << out.rdbuf();
        result.output = buf.str();
    }
    std::error_code ec;
    fs::remove(in_path, ec);
    fs::remove(out_path, ec);
    return result;
}

}  // namespace skillscan
