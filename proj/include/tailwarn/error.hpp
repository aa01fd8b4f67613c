#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tailwarn {

enum class Errc {
    InvalidArgument,
    // dynamics
    NoSignChange,
    NoConvergence,
    NoInterval,
    Diverged,
    // simulate
    NonFinite,
    TooShort,
    // density
    DegenerateRange,
    EmptyTail,
    EmptyWindow,
    // estimator
    DegenerateFit,
    CollinearBasis,
    PositiveLog,
    NonNegativeA2,
    EmptyInterval,
    TooFewPoints,
    // cli
    UnknownKey,
    TypeMismatch,
    RangeViolation,
    Io,
};

constexpr std::string_view errc_name(Errc c) noexcept {
    switch (c) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NoSignChange: return "NoSignChange";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NoInterval: return "NoInterval";
    case Errc::Diverged: return "Diverged";
    case Errc::NonFinite: return "NonFinite";
    case Errc::TooShort: return "TooShort";
    case Errc::DegenerateRange: return "DegenerateRange";
    case Errc::EmptyTail: return "EmptyTail";
    case Errc::EmptyWindow: return "EmptyWindow";
    case Errc::DegenerateFit: return "DegenerateFit";
    case Errc::CollinearBasis: return "CollinearBasis";
    case Errc::PositiveLog: return "PositiveLog";
    case Errc::NonNegativeA2: return "NonNegativeA2";
    case Errc::EmptyInterval: return "EmptyInterval";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::TypeMismatch: return "TypeMismatch";
    case Errc::RangeViolation: return "RangeViolation";
    case Errc::Io: return "Io";
    }
    return "Unknown";
}

/// Exception carrying a module name and a machine-readable code.
/// `qualified()` yields e.g. "estimator.DegenerateFit".
class Error : public std::runtime_error {
public:
    Error(std::string_view module, Errc code, const std::string& what)
        : std::runtime_error(what), module_(module), code_(code) {}

    Errc code() const noexcept { return code_; }
    const std::string& module() const noexcept { return module_; }
    std::string qualified() const { return module_ + "." + std::string(errc_name(code_)); }

private:
    std::string module_;
    Errc code_;
};

namespace detail {
[[noreturn]] inline void fail(std::string_view module, Errc code, const std::string& what) {
    throw Error(module, code, what);
}
}  // namespace detail

}  // namespace tailwarn
