#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace radi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Index = Eigen::Index;

enum class ErrorCode {
  Dimension,
  ShiftDomain,
  SingularShift,
  SmwBreakdown,
  RealShiftGiven,
  SingularE,
  NoShifts,
  NoStableShift,
  OracleFailure,
  InternalInconsistency,
  InvalidOptions,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class NormKind { Two, Frobenius };

}  // namespace radi
