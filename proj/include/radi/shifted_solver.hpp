#pragma once

#include <functional>
#include <memory>

#include "radi/model.hpp"

namespace radi {

enum class SolverBackend { Auto, Dense, Sparse };

/// User-provided replacement for the built-in factorization: returns V with
/// (A^T + sigma E^T) V = rhs.
using ShiftedSolveCallback = std::function<CMatrix(Complex sigma, const CMatrix& rhs)>;

struct SolverConfig {
  SolverBackend backend = SolverBackend::Auto;
  /// Auto picks the dense LU up to this order and sparse LU above it.
  Index dense_threshold = 400;
  /// Dense backend only: factor A^T - K B^T + sigma E^T directly instead of using SMW.
  bool dense_direct = false;
  double rcond_threshold = 1e-14;
  ShiftedSolveCallback callback;
};

/// Factorization of A^T + sigma E^T, reusable for any number of right-hand sides.
/// Real shifts are factored in real arithmetic; a real right-hand side then gives a
/// solution with exactly zero imaginary part.
class ShiftedFactorization {
 public:
  ShiftedFactorization(const RiccatiProblem& problem, const Shift& shift, const SolverConfig& config = {});

  CMatrix solve(const CMatrix& rhs) const;

  const Shift& shift() const { return shift_; }
  bool is_dense() const;
  /// Reciprocal 1-norm condition estimate; 1 for callback-backed solves.
  double rcond() const;

 private:
  struct Impl;
  Shift shift_;
  std::shared_ptr<const Impl> impl_;
};

/// V with (A^T + sigma E^T) V = rhs.
CMatrix shifted_solve(const RiccatiProblem& problem, const Shift& shift, const CMatrix& rhs,
                      const SolverConfig& config = {});

/// V with (A^T - K B^T + sigma E^T) V = rhs, by Sherman-Morrison-Woodbury on top of
/// two block solves with A^T + sigma E^T.
CMatrix smw_shifted_solve(const RiccatiProblem& problem, const Shift& shift, const CMatrix& k,
                          const CMatrix& rhs, const SolverConfig& config = {});

/// Same, reusing an existing factorization of A^T + sigma E^T.
CMatrix smw_shifted_solve(const ShiftedFactorization& factor, const RiccatiProblem& problem,
                          const CMatrix& k, const CMatrix& rhs, double rcond_threshold = 1e-14);

}  // namespace radi
