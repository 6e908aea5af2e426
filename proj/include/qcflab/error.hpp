#pragma once

#include <stdexcept>
#include <string>

namespace qcflab {

// Failure categories surfaced by the library. The CLI maps these onto
// process exit codes (parameter problems -> 3, non-convergence -> 4).
enum class Errc {
  reject,
  dimension_mismatch,
  not_spd,
  not_symmetric,
  zero_pivot,
  singular,
  b_not_spd,
  no_convergence,
  no_sign_change,
  no_root,
  unstable_params,
  singular_preconditioner,
  insufficient_data,
  invalid_kind,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline const char* to_string(Errc c) {
  switch (c) {
    case Errc::reject: return "REJECT";
    case Errc::dimension_mismatch: return "DIMENSION_MISMATCH";
    case Errc::not_spd: return "NOT_SPD";
    case Errc::not_symmetric: return "NOT_SYMMETRIC";
    case Errc::zero_pivot: return "ZERO_PIVOT";
    case Errc::singular: return "SINGULAR";
    case Errc::b_not_spd: return "B_NOT_SPD";
    case Errc::no_convergence: return "NO_CONVERGENCE";
    case Errc::no_sign_change: return "NO_SIGN_CHANGE";
    case Errc::no_root: return "NO_ROOT";
    case Errc::unstable_params: return "UNSTABLE_PARAMS";
    case Errc::singular_preconditioner: return "SINGULAR_PRECONDITIONER";
    case Errc::insufficient_data: return "INSUFFICIENT_DATA";
    case Errc::invalid_kind: return "INVALID_KIND";
  }
  return "UNKNOWN";
}

}  // namespace qcflab
