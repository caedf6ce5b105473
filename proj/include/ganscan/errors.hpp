#pragma once

#include <stdexcept>
#include <string>

namespace ganscan {

enum class ErrorCode {
    FileNotFound,
    UnsupportedFormat,
    CorruptImage,
    EmptyImage,
    BinCountTooSmall,
    DepthMismatch,
    InvalidConfig,
    SingleClassData,
    DimensionMismatch,
    NonFiniteFeature,
    NoImagesFound,
    IoError,
    ParseError,
};

const char* error_code_name(ErrorCode code);

/// Toolkit-wide error type. `path()` carries the offending file when one exists.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    Error(ErrorCode code, std::string message, std::string path)
        : std::runtime_error(message + ": " + path), code_(code), path_(std::move(path)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& path() const noexcept { return path_; }

private:
    ErrorCode code_;
    std::string path_;
};

} // namespace ganscan
