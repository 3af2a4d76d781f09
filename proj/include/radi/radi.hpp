#pragma once

#include <string>

#include "radi/model.hpp"
#include "radi/shifted_solver.hpp"

namespace radi {

class ShiftStrategy;

enum class Arithmetic { Complex, RealMerged };

struct SolveOptions {
  double tol = 1e-11;
  int maxiter = 300;
  Arithmetic arithmetic = Arithmetic::RealMerged;
  NormKind norm = NormKind::Two;
  SolverConfig solver;
  /// Stagnation: relative residual improved by less than `stagnation_factor`
  /// (relatively) over the last `stagnation_window` records.
  int stagnation_window = 20;
  double stagnation_factor = 1e-3;

  void validate() const;
};

enum class SolveStatus { Converged, MaxIterReached, Stagnated, Breakdown };

std::string_view to_string(SolveStatus status);

struct SolveOutcome {
  LowRankState state;
  SolveStatus status = SolveStatus::MaxIterReached;
  std::string diagnostic;

  const std::vector<IterationRecord>& history() const { return state.history; }
};

/// One RADI step in complex arithmetic. Appends V to Z, the p x p block
/// I - (V^H B)(V^H B)^H / (2 Re sigma) to Y, and updates R and K. Handles E when present.
void radi_step_complex(LowRankState& state, const RiccatiProblem& problem, const Shift& shift,
                       const SolverConfig& config = {});

/// The double step for the pair (sigma, conj(sigma)) using one complex solve; the
/// state stays real.
void radi_step_real_pair(LowRankState& state, const RiccatiProblem& problem, const Shift& shift,
                         const SolverConfig& config = {});

/// Complex step for a problem that carries E.
void radi_step_generalized(LowRankState& state, const RiccatiProblem& problem, const Shift& shift,
                           const SolverConfig& config = {});

/// Low-rank Lyapunov ADI step; requires B = 0.
void lyapunov_adi_step(LowRankState& state, const RiccatiProblem& problem, const Shift& shift,
                       const SolverConfig& config = {});

/// Runs RADI until the relative residual drops below tol, the step cap is hit, or
/// progress stalls. Numerical breakdowns are reported through the status, not thrown.
SolveOutcome solve(const RiccatiProblem& problem, ShiftStrategy& strategy, const SolveOptions& options = {});

}  // namespace radi
