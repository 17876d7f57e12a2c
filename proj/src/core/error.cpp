#include "fds/core/error.hpp"

namespace fds {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::BadMagic: return "BadMagic";
    case Errc::VersionUnsupported: return "VersionUnsupported";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::NonFiniteSample: return "NonFiniteSample";
    case Errc::SampleOutOfRange: return "SampleOutOfRange";
    case Errc::InvalidDims: return "InvalidDims";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::WindowTooLarge: return "WindowTooLarge";
    case Errc::DimsTooSmall: return "DimsTooSmall";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NoForwardState: return "NoForwardState";
    case Errc::LabelOutOfRange: return "LabelOutOfRange";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::CheckpointMismatch: return "CheckpointMismatch";
    case Errc::ClassTooSmall: return "ClassTooSmall";
    case Errc::NoNegatives: return "NoNegatives";
    case Errc::NoPositives: return "NoPositives";
    case Errc::EmptyMatrix: return "EmptyMatrix";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::IoError: return "IoError";
    case Errc::DatasetMissing: return "DatasetMissing";
    case Errc::CheckpointMissing: return "CheckpointMissing";
    case Errc::MetricsMissing: return "MetricsMissing";
    case Errc::DivergedNaN: return "DivergedNaN";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace fds
