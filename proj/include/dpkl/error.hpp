#pragma once

#include <stdexcept>
#include <string>

namespace dpkl {

// Error categories surfaced by the library. Each maps to one documented
// failure mode of an operation; the CLI maps them to exit code 1.
enum class errc {
  empty_input,
  negative_entry,
  not_normalized,
  zero_sum,
  bad_mass,
  empty_histogram,
  dimension_mismatch,
  empty_holdout,
  incompatible_loss,
  condition_violated,
  divide_by_zero,
  parse_error,
  id_out_of_range,
  empty_file,
  io_error,
};

inline const char* errc_name(errc code) {
  switch (code) {
    case errc::empty_input: return "empty_input";
    case errc::negative_entry: return "negative_entry";
    case errc::not_normalized: return "not_normalized";
    case errc::zero_sum: return "zero_sum";
    case errc::bad_mass: return "bad_mass";
    case errc::empty_histogram: return "empty_histogram";
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::empty_holdout: return "empty_holdout";
    case errc::incompatible_loss: return "incompatible_loss";
    case errc::condition_violated: return "condition_violated";
    case errc::divide_by_zero: return "divide_by_zero";
    case errc::parse_error: return "parse_error";
    case errc::id_out_of_range: return "id_out_of_range";
    case errc::empty_file: return "empty_file";
    case errc::io_error: return "io_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

}  // namespace dpkl
