#include "netred/errors.hpp"

namespace netred {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PoleAtS: return "PoleAtS";
    case ErrorCode::ZeroNumerator: return "ZeroNumerator";
    case ErrorCode::NotPassiveOnGrid: return "NotPassiveOnGrid";
    case ErrorCode::CouplingVanishes: return "CouplingVanishes";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::DegenerateEmbedding: return "DegenerateEmbedding";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::EmptyBlock: return "EmptyBlock";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::SingularS: return "SingularS";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::ReductionFailed: return "ReductionFailed";
    case ErrorCode::NearSingular: return "NearSingular";
    case ErrorCode::ImproperTF: return "ImproperTF";
    case ErrorCode::IllPosed: return "IllPosed";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace netred
