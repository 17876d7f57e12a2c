#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fds {

/// Failure categories raised across the pipeline. One enumerator per
/// distinct error condition a caller may want to branch on.
enum class Errc {
  BadMagic,
  VersionUnsupported,
  SizeMismatch,
  NonFiniteSample,
  SampleOutOfRange,
  InvalidDims,
  IndexOutOfRange,
  InvalidArgument,
  WindowTooLarge,
  DimsTooSmall,
  ShapeMismatch,
  NoForwardState,
  LabelOutOfRange,
  ConfigInvalid,
  EmptyDataset,
  CheckpointMismatch,
  ClassTooSmall,
  NoNegatives,
  NoPositives,
  EmptyMatrix,
  EmptyInput,
  IoError,
  DatasetMissing,
  CheckpointMissing,
  MetricsMissing,
  DivergedNaN,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& what);

}  // namespace fds
