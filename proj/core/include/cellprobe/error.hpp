#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cellprobe {

enum class Errc {
  value_too_wide,
  no_open_frame,
  width_too_small,
  width_unsupported,
  index_out_of_bounds,
  duplicate_probe,
  query_out_of_range,
  invalid_instance,
  node_out_of_bounds,
  invalid_edge,
  invalid_params,
  rejected,
  instance_parse_error,
  verification_failure,
};

std::string_view to_string(Errc code) noexcept;

// Every precondition violation in the library surfaces as this type; the
// code distinguishes the cases. Verifier rejection is normally a value
// (see Verdict), Errc::rejected only appears when a rejection has to
// cross an API that returns a plain answer.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cellprobe
