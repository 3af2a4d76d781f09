#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <vector>

#include "radi/common.hpp"

namespace radi {

/// Coefficients of  A^T X E + E^T X A + C^T C - E^T X B B^T X E = 0  (E = I when absent).
///
/// Immutable after construction. When E is given it is factored once here, which
/// doubles as the invertibility check.
class RiccatiProblem {
 public:
  RiccatiProblem(SparseMatrix a, Matrix b, Matrix c, std::optional<SparseMatrix> e = std::nullopt);

  static RiccatiProblem from_dense(const Matrix& a, const Matrix& b, const Matrix& c,
                                   const std::optional<Matrix>& e = std::nullopt);

  Index n() const { return a_.rows(); }
  Index m() const { return b_.cols(); }
  Index p() const { return c_.rows(); }

  const SparseMatrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const Matrix& c() const { return c_; }
  const std::optional<SparseMatrix>& e() const { return e_; }
  bool has_e() const { return e_.has_value(); }

  /// ||A||_1, used to scale shift guards.
  double a_norm1() const { return a_norm1_; }
  bool has_zero_b() const { return b_.size() == 0 || b_.cwiseAbs().maxCoeff() == 0.0; }
  bool has_zero_c() const { return c_.cwiseAbs().maxCoeff() == 0.0; }

  /// E^T x, or x when E is absent.
  CMatrix apply_e_transpose(const CMatrix& x) const;
  /// E^{-1} x and E^{-T} x through the cached factorization (identity when E is absent).
  Matrix solve_e(const Matrix& x) const;
  Matrix solve_e_transpose(const Matrix& x) const;

  Matrix dense_a() const { return Matrix(a_); }
  Matrix dense_e() const;
  Matrix q() const { return c_.transpose() * c_; }
  Matrix g() const { return b_ * b_.transpose(); }

 private:
  struct EFactor;

  SparseMatrix a_;
  Matrix b_;
  Matrix c_;
  std::optional<SparseMatrix> e_;
  std::shared_ptr<const EFactor> e_factor_;
  double a_norm1_ = 0.0;
};

enum class ShiftKind { Real, ComplexPairLead };

/// An ADI shift in the open left half-plane.
struct Shift {
  Complex value;
  ShiftKind kind = ShiftKind::Real;

  /// Validates Re(value) < 0 and tags the kind from the imaginary part.
  static Shift make(Complex value);

  bool is_real() const { return kind == ShiftKind::Real; }
};

struct IterationRecord {
  int step = 0;
  Complex shift;
  double relative_residual = 0.0;
  Index width = 0;
  double wall_time_s = 0.0;
};

/// Running low-rank factors of X_k = Z Y^{-1} Z^H with R(X_k) = R R^H and K = X_k B
/// (generalized case: K = E^T X_k B).
///
/// Storage is complex throughout. Real-arithmetic steps write values whose imaginary
/// parts are exactly zero, so is_real() is an exact test.
struct LowRankState {
  CMatrix z;
  std::vector<CMatrix> y_blocks;
  CMatrix r;
  CMatrix k;
  int steps = 0;
  std::vector<IterationRecord> history;

  NormKind norm = NormKind::Two;
  double initial_residual = 0.0;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  /// X_0 = 0: R_0 = C^T, K_0 = 0, Z empty.
  static LowRankState initial(const RiccatiProblem& problem, NormKind norm = NormKind::Two);

  Index width() const { return z.cols(); }
  Index y_size() const;
  bool is_real() const;
  double elapsed_seconds() const;
};

/// ||R^H R|| of the small p x p Gram matrix; equals ||R R^H||.
double residual_norm(const CMatrix& r, NormKind norm = NormKind::Two);

inline constexpr Index kDenseCap = 2000;

/// Z Y^{-1} Z^H, symmetrized. Block solves only; Y is never inverted.
CMatrix assemble_dense(const LowRankState& state, Index cap = kDenseCap);

/// residual_norm(R_k) / residual_norm(C^T).
double relative_residual(const LowRankState& state, const RiccatiProblem& problem);

}  // namespace radi
