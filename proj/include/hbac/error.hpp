#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hbac {

enum class Errc {
  invalid_parameter,
  capacity,
  index_out_of_range,
  invalid_state,
  temperature_undefined,
  unit_mismatch,
  unresolved_wait,
  unsupported_schedule,
  unknown_parameter_path,
  config_schema,
  non_finite_objective,
  io,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Non-fatal notes collected by operations that degrade gracefully
// (self-swaps, clamped probabilities, T2 budget overruns).
using Warnings = std::vector<std::string>;

}  // namespace hbac
