#include "radi/radi.hpp"

#include <cmath>

#include "radi/shifts.hpp"

namespace radi {

void SolveOptions::validate() const {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidOptions, "tol must be positive");
  if (maxiter < 1) throw Error(ErrorCode::InvalidOptions, "maxiter must be at least 1");
  if (stagnation_window < 1) throw Error(ErrorCode::InvalidOptions, "stagnation window must be at least 1");
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIterReached: return "MaxIterReached";
    case SolveStatus::Stagnated: return "Stagnated";
    case SolveStatus::Breakdown: return "Breakdown";
  }
  return "Unknown";
}

namespace {

// V = sqrt(-2 Re sigma) (A^T - K B^T + sigma E^T)^{-1} R; the first pass has K = 0.
CMatrix next_block(const LowRankState& state, const RiccatiProblem& problem, const Shift& shift,
                   const SolverConfig& config) {
  const double scale = std::sqrt(-2.0 * shift.value.real());
  if (state.steps == 0) return scale * shifted_solve(problem, shift, state.r, config);
  return scale * smw_shifted_solve(problem, shift, state.k, state.r, config);
}

void append_columns(CMatrix& z, const CMatrix& cols) {
  const Index w = z.cols();
  z.conservativeResize(z.rows(), w + cols.cols());
  z.rightCols(cols.cols()) = cols;
}

void record(LowRankState& state, Complex shift) {
  IterationRecord rec;
  rec.step = state.steps;
  rec.shift = shift;
  rec.relative_residual = residual_norm(state.r, state.norm) / state.initial_residual;
  rec.width = state.width();
  rec.wall_time_s = state.elapsed_seconds();
  state.history.push_back(rec);
}

void drop_imaginary(CMatrix& m) { m.imag().setZero(); }

}  // namespace

void radi_step_complex(LowRankState& state, const RiccatiProblem& problem, const Shift& shift,
                       const SolverConfig& config) {
  if (!(shift.value.real() < 0.0)) throw Error(ErrorCode::ShiftDomain, "shift must have negative real part");
  const bool stays_real = shift.value.imag() == 0.0 && state.is_real();

  const CMatrix v = next_block(state, problem, shift, config);
  const double re = shift.value.real();
  const CMatrix vb = v.adjoint() * problem.b().cast<Complex>();
  CMatrix y = CMatrix::Identity(v.cols(), v.cols()) - (1.0 / (2.0 * re)) * (vb * vb.adjoint());
  y = (y + y.adjoint()).eval() / 2.0;
  Eigen::LLT<CMatrix> llt(y);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::InternalInconsistency, "Y block lost definiteness");
  // V Y^{-1}, then E^T V Y^{-1} for the generalized residual and feedback.
  const CMatrix w = problem.apply_e_transpose(llt.solve(v.adjoint()).adjoint());

  append_columns(state.z, v);
  state.y_blocks.push_back(std::move(y));
  state.r += std::sqrt(-2.0 * re) * w;
  state.k += w * vb;
  if (stays_real) {
    drop_imaginary(state.z);
    drop_imaginary(state.r);
    drop_imaginary(state.k);
    drop_imaginary(state.y_blocks.back());
  }
  state.steps += 1;
  record(state, shift.value);
}

void radi_step_real_pair(LowRankState& state, const RiccatiProblem& problem, const Shift& shift,
                         const SolverConfig& config) {
  if (shift.value.imag() == 0.0) throw Error(ErrorCode::RealShiftGiven, "pair step needs a non-real shift");
  if (!(shift.value.real() < 0.0)) throw Error(ErrorCode::ShiftDomain, "shift must have negative real part");
  if (!state.is_real()) throw Error(ErrorCode::InternalInconsistency, "pair step requires a real state");

  const CMatrix v = next_block(state, problem, shift, config);
  const Index p = v.cols();
  const Matrix& b = problem.b();
  const double re = shift.value.real();
  const double im = shift.value.imag();
  const double abs2 = std::norm(shift.value);

  Matrix zpair(v.rows(), 2 * p);
  zpair.leftCols(p) = v.real();
  zpair.rightCols(p) = v.imag();
  const Matrix vr = zpair.leftCols(p).transpose() * b;
  const Matrix vi = zpair.rightCols(p).transpose() * b;

  Matrix f1(2 * p, b.cols()), f2(2 * p, b.cols()), f3(2 * p, p);
  f1.topRows(p) = -re * vr - im * vi;
  f1.bottomRows(p) = im * vr - re * vi;
  f2.topRows(p) = vr;
  f2.bottomRows(p) = vi;
  f3.topRows(p) = im * Matrix::Identity(p, p);
  f3.bottomRows(p) = re * Matrix::Identity(p, p);

  Matrix y = Matrix::Zero(2 * p, 2 * p);
  y.topLeftCorner(p, p).setIdentity();
  y.bottomRightCorner(p, p) = 0.5 * Matrix::Identity(p, p);
  y -= (1.0 / (4.0 * abs2 * re)) * (f1 * f1.transpose());
  y -= (1.0 / (4.0 * re)) * (f2 * f2.transpose());
  y -= (1.0 / (2.0 * abs2)) * (f3 * f3.transpose());
  y = (y + y.transpose()).eval() / 2.0;
  Eigen::LLT<Matrix> llt(y);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::InternalInconsistency, "merged Y block lost definiteness");

  Matrix w = llt.solve(zpair.transpose()).transpose();
  if (problem.has_e()) w = problem.e()->transpose() * w;

  append_columns(state.z, zpair.cast<Complex>());
  state.y_blocks.push_back(y.cast<Complex>());
  state.r += (std::sqrt(-2.0 * re) * w.leftCols(p)).cast<Complex>();
  state.k += (w * f2).cast<Complex>();
  state.steps += 2;
  record(state, shift.value);
}

void radi_step_generalized(LowRankState& state, const RiccatiProblem& problem, const Shift& shift,
                           const SolverConfig& config) {
  if (!problem.has_e()) throw Error(ErrorCode::Dimension, "generalized step needs a problem with E");
  radi_step_complex(state, problem, shift, config);
}

void lyapunov_adi_step(LowRankState& state, const RiccatiProblem& problem, const Shift& shift,
                       const SolverConfig& config) {
  if (!problem.has_zero_b()) throw Error(ErrorCode::Dimension, "Lyapunov ADI step requires B = 0");
  if (!(shift.value.real() < 0.0)) throw Error(ErrorCode::ShiftDomain, "shift must have negative real part");
  const double scale = std::sqrt(-2.0 * shift.value.real());
  const CMatrix v = scale * shifted_solve(problem, shift, state.r, config);
  append_columns(state.z, v);
  state.y_blocks.push_back(CMatrix::Identity(v.cols(), v.cols()));
  state.r += scale * problem.apply_e_transpose(v);
  state.steps += 1;
  record(state, shift.value);
}

namespace {

void take_step(LowRankState& state, const RiccatiProblem& problem, const Shift& shift, const SolveOptions& options) {
  if (options.arithmetic == Arithmetic::RealMerged && !shift.is_real())
    radi_step_real_pair(state, problem, shift, options.solver);
  else
    radi_step_complex(state, problem, shift, options.solver);
}

bool is_solver_breakdown(const Error& e) {
  return e.code() == ErrorCode::SingularShift || e.code() == ErrorCode::SmwBreakdown;
}

}  // namespace

SolveOutcome solve(const RiccatiProblem& problem, ShiftStrategy& strategy, const SolveOptions& options) {
  options.validate();
  if (problem.has_zero_c()) throw Error(ErrorCode::Dimension, "C is zero; X = 0 solves the equation trivially");

  SolveOutcome out;
  out.state = LowRankState::initial(problem, options.norm);
  LowRankState& state = out.state;
  double rel = 1.0;

  auto fail = [&](SolveStatus status, std::string why) {
    out.status = status;
    out.diagnostic = std::move(why);
    return std::move(out);
  };

  while (rel >= options.tol) {
    // A merged pair may overshoot the cap by one step.
    if (state.steps >= options.maxiter) return fail(SolveStatus::MaxIterReached, "step cap reached");

    Shift shift;
    try {
      shift = strategy.next(state, problem, options.arithmetic);
    } catch (const Error& e) {
      return fail(SolveStatus::Breakdown, std::string("shift selection failed: ") + e.what());
    }

    try {
      take_step(state, problem, shift, options);
    } catch (const Error& e) {
      if (!is_solver_breakdown(e)) return fail(SolveStatus::Breakdown, e.what());
      try {
        shift = strategy.fallback(state, problem, options.arithmetic);
        take_step(state, problem, shift, options);
      } catch (const Error& retry) {
        return fail(SolveStatus::Breakdown, std::string(e.what()) + "; fallback shift failed: " + retry.what());
      }
    }

    rel = state.history.back().relative_residual;
    if (!std::isfinite(rel)) return fail(SolveStatus::Breakdown, "relative residual is not finite");

    const auto& h = state.history;
    const auto window = static_cast<std::size_t>(options.stagnation_window);
    if (rel >= options.tol && h.size() > window) {
      const double earlier = h[h.size() - 1 - window].relative_residual;
      if (rel > (1.0 - options.stagnation_factor) * earlier)
        return fail(SolveStatus::Stagnated, "relative residual stopped improving");
    }
  }
  out.status = SolveStatus::Converged;
  return out;
}

}  // namespace radi
