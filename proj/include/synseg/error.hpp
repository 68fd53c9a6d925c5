#pragma once
#include <stdexcept>
#include <string>
#include <string_view>

namespace synseg {

enum class Reason {
  inadmissible_coupling,
  bracket_failure,
  non_decay,
  grid_too_coarse,
  out_of_domain,
  no_root,
  boundary_extremum,
  iteration_stall,
  linear_solve_failure,
  diverged,
  config_error,
  io_error,
};

std::string_view reason_name(Reason r);

class Error : public std::runtime_error {
 public:
  Error(Reason r, const std::string& what) : std::runtime_error(what), reason_(r) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

}  // namespace synseg
