#include "ganscan/errors.hpp"

namespace ganscan {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
        case ErrorCode::CorruptImage: return "CorruptImage";
        case ErrorCode::EmptyImage: return "EmptyImage";
        case ErrorCode::BinCountTooSmall: return "BinCountTooSmall";
        case ErrorCode::DepthMismatch: return "DepthMismatch";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::SingleClassData: return "SingleClassData";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
        case ErrorCode::NoImagesFound: return "NoImagesFound";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "UnknownError";
}

} // namespace ganscan
