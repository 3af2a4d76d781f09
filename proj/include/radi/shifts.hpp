#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "radi/model.hpp"
#include "radi/radi.hpp"

namespace radi {

// ---------------------------------------------------------------------------
// Strategy interface

/// Produces the next shift for the solver. Instances carry per-solve state
/// (cycling position, cached bases) and must not be shared between solves.
class ShiftStrategy {
 public:
  virtual ~ShiftStrategy() = default;

  /// In RealMerged mode a non-real shift stands for the pair (sigma, conj(sigma)).
  virtual Shift next(const LowRankState& state, const RiccatiProblem& problem, Arithmetic arithmetic) = 0;

  /// Replacement shift after a solver breakdown. Defaults to cycling Penzl shifts of A.
  virtual Shift fallback(const LowRankState& state, const RiccatiProblem& problem, Arithmetic arithmetic);

  virtual std::string name() const = 0;

 private:
  std::unique_ptr<ShiftStrategy> fallback_;
};

/// Cycles through a fixed list; conjugate pairs must be adjacent.
class ShiftListStrategy : public ShiftStrategy {
 public:
  ShiftListStrategy(std::vector<Complex> shifts, bool cycle = true, std::string name = "list");

  Shift next(const LowRankState& state, const RiccatiProblem& problem, Arithmetic arithmetic) override;
  std::string name() const override { return name_; }
  const std::vector<Complex>& shifts() const { return shifts_; }

 private:
  std::vector<Complex> shifts_;
  bool cycle_;
  std::string name_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Penzl shifts

enum class PenzlSource { MatrixA, Hamiltonian };

struct PenzlConfig {
  PenzlSource source = PenzlSource::MatrixA;
  int kplus = 40;
  int kminus = 40;
  int count = 20;
  bool cycle = true;

  void validate() const;
};

/// Ritz values of M from an Arnoldi process of dimension kplus, and reciprocals of
/// the Ritz values of M^{-1} from one of dimension kminus. M is E^{-1}A or the
/// Hamiltonian of the (E-reverted) equation.
std::vector<Complex> penzl_ritz_values(const RiccatiProblem& problem, const PenzlConfig& config);

/// max over candidates of prod_j |lambda - sigma_j| / |lambda + conj(sigma_j)|.
double penzl_objective(const std::vector<Complex>& candidates, const std::vector<Complex>& shifts);

/// Greedy min-max selection of at most `count` shifts from stable candidates,
/// conjugates adjacent. A pair that would exceed `count` is skipped in favour of
/// the best remaining real candidate.
std::vector<Complex> penzl_select(const std::vector<Complex>& candidates, int count);

/// Full heuristic: Ritz values, unstable ones mirrored, greedy selection.
std::vector<Complex> penzl_shifts(const RiccatiProblem& problem, const PenzlConfig& config = {});

class PenzlStrategy : public ShiftStrategy {
 public:
  explicit PenzlStrategy(PenzlConfig config = {});

  Shift next(const LowRankState& state, const RiccatiProblem& problem, Arithmetic arithmetic) override;
  Shift fallback(const LowRankState& state, const RiccatiProblem& problem, Arithmetic arithmetic) override;
  std::string name() const override { return "penzl"; }

 private:
  PenzlConfig config_;
  std::unique_ptr<ShiftListStrategy> list_;
};

// ---------------------------------------------------------------------------
// Projected residual Hamiltonian

/// Orthonormal basis for the columns of `columns` (two Gram-Schmidt passes);
/// numerically dependent columns are dropped.
CMatrix orthonormal_basis(const CMatrix& columns);

/// Basis of all of Z kept up to date by appending new columns only.
class IncrementalBasis {
 public:
  const CMatrix& update(const CMatrix& z);
  const CMatrix& basis() const { return basis_; }

 private:
  CMatrix basis_;
  Index covered_ = 0;
};

/// Residual equation projected onto span(U), in the coordinates of the E-reverted
/// problem: a_h = U^H (A^T E^{-T} - K B^T E^{-T}) U, b = U^H E^{-1} B, r = U^H R.
struct ProjectedHamiltonian {
  CMatrix hamiltonian;
  CMatrix basis;
  CMatrix a_h;
  CMatrix b;
  CMatrix r;
  bool real = false;
};

/// Window of Z columns used for projection; nullopt stands for all of Z.
using Window = std::optional<Index>;

ProjectedHamiltonian projected_hamiltonian(const LowRankState& state, const RiccatiProblem& problem,
                                           Window window);

ProjectedHamiltonian project_onto(const CMatrix& basis, const LowRankState& state, const RiccatiProblem& problem);

/// Stable eigenvalue of the projected Hamiltonian whose eigenvector (unit length)
/// has the largest lower half; ties go to smaller |Im|, then smaller modulus.
Shift residual_hamiltonian_shift(const ProjectedHamiltonian& projected);

Shift residual_hamiltonian_shift(const LowRankState& state, const RiccatiProblem& problem, Window window);

// ---------------------------------------------------------------------------
// Residual minimizing shifts

/// Projected data for f(sigma); `r` is U^H R_k reduced to its dominant right
/// singular direction.
struct ProjectedResidualProblem {
  CMatrix a_h;
  CMatrix b;
  CVector r;
  bool real = false;
};

ProjectedResidualProblem reduce_projected(const ProjectedHamiltonian& projected);

/// f(sigma) = ||R_{k+1}(sigma)||^2 on the projected problem.
double residual_min_objective(const ProjectedResidualProblem& problem, Complex sigma);

/// (df/d Re sigma, df/d Im sigma), closed form.
Eigen::Vector2d residual_min_gradient(const ProjectedResidualProblem& problem, Complex sigma);

struct ShiftOptimization {
  Complex sigma;
  double f = 0.0;
  double f_start = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Quasi-Newton (BFGS) with backtracking on f, Re sigma clamped to <= -min_distance.
ShiftOptimization minimize_residual_objective(const ProjectedResidualProblem& problem, Complex start,
                                              double min_distance, int max_iterations = 50);

Shift residual_minimizing_shift(const LowRankState& state, const RiccatiProblem& problem, Window window);

// ---------------------------------------------------------------------------
// Dynamic strategies

struct DynamicConfig {
  Window window = Index{2};
  bool optimize = false;
};

/// Residual Hamiltonian shifts, optionally post-optimized. Falls back to Penzl
/// shifts when the projected Hamiltonian has no stable eigenvalue.
class DynamicStrategy : public ShiftStrategy {
 public:
  explicit DynamicStrategy(DynamicConfig config);

  Shift next(const LowRankState& state, const RiccatiProblem& problem, Arithmetic arithmetic) override;
  std::string name() const override { return config_.optimize ? "ham-opt" : "ham"; }

 private:
  DynamicConfig config_;
  IncrementalBasis full_basis_;
};

/// One shift per line as "re im"; a non-real shift must be followed by its conjugate.
std::vector<Complex> read_shift_file(const std::filesystem::path& path);

}  // namespace radi
