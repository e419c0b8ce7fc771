#pragma once

#include <stdexcept>
#include <string>

namespace skillscan {

enum class Errc {
    missing_skill_md,
    io_error,
    empty_corpus,
    degenerate_classifier,
    degenerate_table,
    length_mismatch,
    zero_sample_stratum,
    backend_unavailable,
    schema_violation,
    precondition_violation,
    bad_config,
};

/// Project-wide exception carrying a machine-readable error code.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace skillscan
