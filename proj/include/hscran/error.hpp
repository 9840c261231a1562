#ifndef HSCRAN_ERROR_HPP
#define HSCRAN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace hscran {

enum class ErrorCode {
    InvalidConfig,
    InvalidRequest,
    CapacityExceeded,
    Overflow,
    FieldRange,
    CrcMismatch,
    TooManyDcis,
    NotFound,
    Truncated,
    ZeroChannel,
    InvalidGain,
    FrameCorrupt,
    BadDimensions,
    LengthMismatch,
    TooSmall,
    PluginTimeout,
    ProtocolViolation,
    PluginCrash,
    Io,
};

constexpr std::string_view to_string(ErrorCode c) noexcept {
    switch (c) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::FieldRange: return "FieldRange";
    case ErrorCode::CrcMismatch: return "CrcMismatch";
    case ErrorCode::TooManyDcis: return "TooManyDcis";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::ZeroChannel: return "ZeroChannel";
    case ErrorCode::InvalidGain: return "InvalidGain";
    case ErrorCode::FrameCorrupt: return "FrameCorrupt";
    case ErrorCode::BadDimensions: return "BadDimensions";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::PluginTimeout: return "PluginTimeout";
    case ErrorCode::ProtocolViolation: return "ProtocolViolation";
    case ErrorCode::PluginCrash: return "PluginCrash";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so callers
/// (and the link report) can dispatch on the kind without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace hscran

#endif // HSCRAN_ERROR_HPP
