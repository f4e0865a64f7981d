#include "asymkit/types.hpp"

namespace asymkit {

void Tolerance::validate() const {
  const double v[] = {tol_herm, tol_norm, tol_psd, tol_kernel, tol_residual};
  for (double t : v) {
    if (!(t > 0.0) || !std::isfinite(t)) fail_validation("tolerances must be finite and > 0");
  }
}

void fail_validation(const std::string& msg) { throw Error(ErrorKind::Validation, msg); }
void fail_precondition(const std::string& msg) { throw Error(ErrorKind::Precondition, msg); }
void fail_cap(const std::string& msg) { throw Error(ErrorKind::Cap, msg); }

}  // namespace asymkit
