#pragma once

#include <stdexcept>
#include <string>

namespace radcal {

enum class ErrorCode {
  invalid_target_set,
  out_of_range,
  unmappable_frequency,
  invalid_reference,
  length_mismatch,
  degenerate_calibration,
  reference_channel_degenerate,
  shape_error,
  invalid_config,
  degenerate_spectrum,
  insufficient_geometry,
  insufficient_data,
  parse_error,
  io_error,
  experiment_failed,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace radcal
