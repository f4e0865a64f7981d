#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace asymkit {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tolerance {
  double tol_herm = 1e-10;
  double tol_norm = 1e-10;
  double tol_psd = 1e-9;
  double tol_kernel = 1e-9;
  double tol_residual = 1e-8;

  void validate() const;
};

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind { Validation = 2, Precondition = 3, Cap = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail_validation(const std::string& msg);
[[noreturn]] void fail_precondition(const std::string& msg);
[[noreturn]] void fail_cap(const std::string& msg);

}  // namespace asymkit
