#include "radcal/error.hpp"

namespace radcal {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_target_set: return "invalid target set";
    case ErrorCode::out_of_range: return "out of range";
    case ErrorCode::unmappable_frequency: return "unmappable frequency";
    case ErrorCode::invalid_reference: return "invalid reference";
    case ErrorCode::length_mismatch: return "length mismatch";
    case ErrorCode::degenerate_calibration: return "degenerate calibration";
    case ErrorCode::reference_channel_degenerate: return "reference channel degenerate";
    case ErrorCode::shape_error: return "shape error";
    case ErrorCode::invalid_config: return "invalid config";
    case ErrorCode::degenerate_spectrum: return "degenerate spectrum";
    case ErrorCode::insufficient_geometry: return "insufficient geometry";
    case ErrorCode::insufficient_data: return "insufficient data";
    case ErrorCode::parse_error: return "parse error";
    case ErrorCode::io_error: return "io error";
    case ErrorCode::experiment_failed: return "experiment failed";
  }
  return "unknown error";
}

}  // namespace radcal
