#include "horncode/error.hpp"

namespace horncode {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRangeExponent: return "OutOfRangeExponent";
    case ErrorKind::NoRationalNearby: return "NoRationalNearby";
    case ErrorKind::InvalidCode: return "InvalidCode";
    case ErrorKind::EmptyIncidence: return "EmptyIncidence";
    case ErrorKind::InvalidProfile: return "InvalidProfile";
    case ErrorKind::EmptyChain: return "EmptyChain";
    case ErrorKind::EmptyCycle: return "EmptyCycle";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnboundedCheckFailed: return "UnboundedCheckFailed";
    case ErrorKind::EmptyAnnulus: return "EmptyAnnulus";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::LevelSetEmpty: return "LevelSetEmpty";
    case ErrorKind::NonManifold: return "NonManifold";
    case ErrorKind::TooFewFarSamples: return "TooFewFarSamples";
    case ErrorKind::PunctureTooClose: return "PunctureTooClose";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace horncode
