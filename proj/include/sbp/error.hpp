#pragma once

#include <stdexcept>
#include <string>

namespace sbp {

enum class ErrorCode {
    NodeCountTooSmall,
    NonpositiveSpacing,
    InvalidArgument,
    PivotBreakdown,
    RankDeficient,
    DsInsoluble,
    NonpositiveMu,
    ShapeMismatch,
    Infeasible,
    DegenerateFit,
    Instability,
    Io,
};

const char* to_string(ErrorCode code);

/// Exception carrying a machine-readable failure kind.
class SbpError : public std::runtime_error {
public:
    SbpError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace sbp
