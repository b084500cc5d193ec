#include "oscsync/common.hpp"

namespace oscsync {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EmptySide: return "EmptySide";
    case ErrorCode::BadShape: return "BadShape";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotPotentialForm: return "NotPotentialForm";
    case ErrorCode::EventOverflow: return "EventOverflow";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::BadN: return "BadN";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

PhaseVector wrap_phases(PhaseVector phases) {
  for (auto& p : phases) p = wrap_phase(p);
  return phases;
}

}  // namespace oscsync
