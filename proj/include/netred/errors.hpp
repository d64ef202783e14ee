#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netred {

enum class ErrorCode {
  InvalidArgument,
  PoleAtS,
  ZeroNumerator,
  NotPassiveOnGrid,
  CouplingVanishes,
  NotSymmetric,
  KTooLarge,
  DegenerateEmbedding,
  NotOrthonormal,
  EmptyBlock,
  RankDeficient,
  SingularS,
  DisconnectedGraph,
  ReductionFailed,
  NearSingular,
  ImproperTF,
  IllPosed,
  Diverged,
  GridMismatch,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace netred
