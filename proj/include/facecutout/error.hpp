#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace facecutout {

enum class Errc {
    FewerThanThreePoints,
    AllCollinear,
    DegenerateZeroArea,
    DegenerateLine,
    EmptyAfterClamp,
    InvalidArgument,
    EmptyImage,
    DimMismatch,
    BadWindow,
    EmptyDiffMask,
    LandmarkImageMismatch,
    EmptyInput,
    DanglingSource,
    RankDeficient,
    TooFewClusters,
    UnassignedVideo,
    NoFrames,
    SingleClass,
    NoPositives,
    MissingLandmarks,
    MissingMask,
    Io,
    Parse,
};

inline std::string_view errc_name(Errc code) {
    switch (code) {
    case Errc::FewerThanThreePoints: return "FewerThanThreePoints";
    case Errc::AllCollinear: return "AllCollinear";
    case Errc::DegenerateZeroArea: return "DegenerateZeroArea";
    case Errc::DegenerateLine: return "DegenerateLine";
    case Errc::EmptyAfterClamp: return "EmptyAfterClamp";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::EmptyImage: return "EmptyImage";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::BadWindow: return "BadWindow";
    case Errc::EmptyDiffMask: return "EmptyDiffMask";
    case Errc::LandmarkImageMismatch: return "LandmarkImageMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::DanglingSource: return "DanglingSource";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::TooFewClusters: return "TooFewClusters";
    case Errc::UnassignedVideo: return "UnassignedVideo";
    case Errc::NoFrames: return "NoFrames";
    case Errc::SingleClass: return "SingleClass";
    case Errc::NoPositives: return "NoPositives";
    case Errc::MissingLandmarks: return "MissingLandmarks";
    case Errc::MissingMask: return "MissingMask";
    case Errc::Io: return "Io";
    case Errc::Parse: return "Parse";
    }
    return "Unknown";
}

// All library failures surface as this exception; `code()` identifies the condition.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace facecutout
