#include "radi/shifts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace radi {

// ---------------------------------------------------------------------------
// Strategy plumbing

Shift ShiftStrategy::fallback(const LowRankState& state, const RiccatiProblem& problem, Arithmetic arithmetic) {
  if (!fallback_) fallback_ = std::make_unique<PenzlStrategy>();
  return fallback_->next(state, problem, arithmetic);
}

ShiftListStrategy::ShiftListStrategy(std::vector<Complex> shifts, bool cycle, std::string name)
    : shifts_(std::move(shifts)), cycle_(cycle), name_(std::move(name)) {
  if (shifts_.empty()) throw Error(ErrorCode::NoShifts, "empty shift list");
  for (Complex s : shifts_) Shift::make(s);
}

Shift ShiftListStrategy::next(const LowRankState&, const RiccatiProblem&, Arithmetic arithmetic) {
  if (pos_ >= shifts_.size()) {
    if (!cycle_) throw Error(ErrorCode::NoShifts, "shift list exhausted");
    pos_ = 0;
  }
  const Complex value = shifts_[pos_++];
  if (arithmetic == Arithmetic::RealMerged && value.imag() != 0.0 && pos_ < shifts_.size() &&
      shifts_[pos_] == std::conj(value))
    ++pos_;
  return Shift::make(value);
}

std::vector<Complex> read_shift_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open shift file " + path.string());
  std::vector<Complex> shifts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double re = 0.0, im = 0.0;
    std::string extra;
    if (!(ls >> re >> im) || (ls >> extra))
      throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(lineno) + ": expected \"re im\"");
    if (!(re < 0.0))
      throw Error(ErrorCode::ShiftDomain, path.string() + ":" + std::to_string(lineno) + ": shift not in open left half-plane");
    shifts.emplace_back(re, im);
  }
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    if (shifts[i].imag() == 0.0) continue;
    if (i + 1 >= shifts.size() || std::abs(shifts[i + 1] - std::conj(shifts[i])) > 1e-12 * std::abs(shifts[i]))
      throw Error(ErrorCode::Parse, path.string() + ": complex shift must be followed by its conjugate");
    shifts[i + 1] = std::conj(shifts[i]);
    ++i;
  }
  if (shifts.empty()) throw Error(ErrorCode::NoShifts, path.string() + " contains no shifts");
  return shifts;
}

// ---------------------------------------------------------------------------
// Projection

namespace {

constexpr double kDependentColumn = 1e-10;

// Appends the part of `col` orthogonal to span(basis); false when it is numerically dependent.
bool append_orthogonal(CMatrix& basis, CVector col) {
  const double norm0 = col.norm();
  if (norm0 == 0.0) return false;
  for (int pass = 0; pass < 2; ++pass) {
    if (basis.cols() > 0) col -= basis * (basis.adjoint() * col);
  }
  const double norm = col.norm();
  if (norm <= kDependentColumn * norm0) return false;
  basis.conservativeResize(basis.rows(), basis.cols() + 1);
  basis.col(basis.cols() - 1) = col / norm;
  return true;
}

// x -> E^{-T} x for complex x, via the real factorization.
CMatrix solve_e_transpose(const RiccatiProblem& problem, const CMatrix& x) {
  if (!problem.has_e()) return x;
  CMatrix out(x.rows(), x.cols());
  out.real() = problem.solve_e_transpose(x.real());
  out.imag() = problem.solve_e_transpose(x.imag());
  return out;
}

}  // namespace

CMatrix orthonormal_basis(const CMatrix& columns) {
  CMatrix basis(columns.rows(), 0);
  for (Index j = 0; j < columns.cols(); ++j) append_orthogonal(basis, columns.col(j));
  return basis;
}

const CMatrix& IncrementalBasis::update(const CMatrix& z) {
  if (z.cols() < covered_ || basis_.rows() != z.rows()) {
    basis_ = CMatrix(z.rows(), 0);
    covered_ = 0;
  }
  for (Index j = covered_; j < z.cols(); ++j) append_orthogonal(basis_, z.col(j));
  covered_ = z.cols();
  return basis_;
}

ProjectedHamiltonian project_onto(const CMatrix& basis, const LowRankState& state, const RiccatiProblem& problem) {
  ProjectedHamiltonian out;
  out.basis = basis;
  out.real = state.is_real() && (basis.size() == 0 || basis.imag().cwiseAbs().maxCoeff() == 0.0);
  const Index l = basis.cols();
  const CMatrix w = solve_e_transpose(problem, basis);
  const CMatrix at_w = problem.a().transpose().cast<Complex>() * w;
  const CMatrix bt_w = problem.b().transpose().cast<Complex>() * w;
  out.a_h = basis.adjoint() * at_w - (basis.adjoint() * state.k) * bt_w;
  out.b = bt_w.adjoint();
  out.r = basis.adjoint() * state.r;

  const CMatrix a = out.a_h.adjoint();
  out.hamiltonian.resize(2 * l, 2 * l);
  out.hamiltonian.topLeftCorner(l, l) = a;
  out.hamiltonian.topRightCorner(l, l) = out.b * out.b.adjoint();
  out.hamiltonian.bottomLeftCorner(l, l) = out.r * out.r.adjoint();
  out.hamiltonian.bottomRightCorner(l, l) = -out.a_h;
  return out;
}

ProjectedHamiltonian projected_hamiltonian(const LowRankState& state, const RiccatiProblem& problem, Window window) {
  CMatrix columns;
  if (state.width() == 0) {
    columns = state.r;
  } else {
    const Index take = window ? std::min(*window, state.width()) : state.width();
    if (take < 1) throw Error(ErrorCode::InvalidOptions, "projection window must be at least one column");
    columns = problem.apply_e_transpose(state.z.rightCols(take));
  }
  return project_onto(orthonormal_basis(columns), state, problem);
}

Shift residual_hamiltonian_shift(const ProjectedHamiltonian& projected) {
  const Index l = projected.basis.cols();
  if (l == 0) throw Error(ErrorCode::NoStableShift, "projection basis is empty");

  CVector values;
  CMatrix vectors;
  if (projected.real) {
    Eigen::EigenSolver<Matrix> eig(projected.hamiltonian.real());
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::NoStableShift, "eigensolver failed");
    values = eig.eigenvalues();
    vectors = eig.eigenvectors();
  } else {
    Eigen::ComplexEigenSolver<CMatrix> eig(projected.hamiltonian);
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::NoStableShift, "eigensolver failed");
    values = eig.eigenvalues();
    vectors = eig.eigenvectors();
  }

  Index best = -1;
  double best_q = -1.0;
  for (Index i = 0; i < values.size(); ++i) {
    const Complex lambda = values(i);
    if (!(lambda.real() < 0.0)) continue;
    const double total = vectors.col(i).norm();
    if (total == 0.0) continue;
    const double q = vectors.col(i).tail(l).norm() / total;
    bool better = false;
    if (best < 0) {
      better = true;
    } else if (std::abs(q - best_q) <= 1e-12 * std::max(q, best_q)) {
      const Complex cur = values(best);
      if (std::abs(lambda.imag()) != std::abs(cur.imag()))
        better = std::abs(lambda.imag()) < std::abs(cur.imag());
      else
        better = std::abs(lambda) < std::abs(cur);
    } else {
      better = q > best_q;
    }
    if (better) {
      best = i;
      best_q = q;
    }
  }
  if (best < 0) throw Error(ErrorCode::NoStableShift, "projected Hamiltonian has no stable eigenvalue");
  Complex sigma = values(best);
  if (projected.real) sigma.imag(std::abs(sigma.imag()));
  return Shift::make(sigma);
}

Shift residual_hamiltonian_shift(const LowRankState& state, const RiccatiProblem& problem, Window window) {
  return residual_hamiltonian_shift(projected_hamiltonian(state, problem, window));
}

// ---------------------------------------------------------------------------
// Residual minimizing shifts

ProjectedResidualProblem reduce_projected(const ProjectedHamiltonian& projected) {
  ProjectedResidualProblem out;
  out.a_h = projected.a_h;
  out.b = projected.b;
  out.real = projected.real;
  const CMatrix& r = projected.r;
  if (r.cols() == 1) {
    out.r = r.col(0);
  } else if (projected.real) {
    Eigen::JacobiSVD<Matrix> svd(r.real(), Eigen::ComputeThinV);
    out.r = (r.real() * svd.matrixV().col(0)).cast<Complex>();
  } else {
    Eigen::JacobiSVD<CMatrix> svd(r, Eigen::ComputeThinV);
    out.r = r * svd.matrixV().col(0);
  }
  return out;
}

namespace {

struct Evaluation {
  Eigen::PartialPivLU<CMatrix> lu;  // of a_h + sigma I
  CVector v;
  double y = 1.0;
  CVector r1;
  double f = 0.0;
};

Evaluation evaluate(const ProjectedResidualProblem& pr, Complex sigma) {
  if (!(sigma.real() < 0.0)) throw Error(ErrorCode::ShiftDomain, "objective needs Re sigma < 0");
  const Index l = pr.a_h.rows();
  Evaluation ev;
  ev.lu.compute(pr.a_h + sigma * CMatrix::Identity(l, l));
  const double s = std::sqrt(-2.0 * sigma.real());
  ev.v = s * ev.lu.solve(pr.r);
  const double vb = (ev.v.adjoint() * pr.b).squaredNorm();
  ev.y = 1.0 - vb / (2.0 * sigma.real());
  ev.r1 = pr.r + (s / ev.y) * ev.v;
  ev.f = ev.r1.squaredNorm();
  return ev;
}

}  // namespace

double residual_min_objective(const ProjectedResidualProblem& problem, Complex sigma) {
  return evaluate(problem, sigma).f;
}

Eigen::Vector2d residual_min_gradient(const ProjectedResidualProblem& problem, Complex sigma) {
  const Evaluation ev = evaluate(problem, sigma);
  const double sr = sigma.real();
  const CVector delta = ev.r1 - problem.r;
  const CMatrix& b = problem.b;

  // With At = a_h + sigma I:  u = At^{-1} delta,  t = At^{-H} G delta.
  const CVector u = ev.lu.solve(delta);
  const CVector g_delta = b * (b.adjoint() * delta);
  const CVector t = ev.lu.adjoint().solve(g_delta);
  const CVector g_u = b * (b.adjoint() * u);
  // X_{k+1} w = v (v^H w) / y
  auto x1 = [&](const CVector& w) -> CVector { return ev.v * (ev.v.adjoint() * w) / ev.y; };
  const CVector x1_g_u = x1(g_u);
  const CVector x1_t = x1(t);

  const CVector d1 = delta / sr - u - (x1_g_u + x1_t) / (2.0 * sr);
  const CVector d2 = -u - (x1_g_u - x1_t) / (2.0 * sr);
  const Complex p1 = ev.r1.adjoint() * d1;
  const Complex p2 = ev.r1.adjoint() * d2;
  return {2.0 * p1.real(), -2.0 * p2.imag()};
}

ShiftOptimization minimize_residual_objective(const ProjectedResidualProblem& problem, Complex start,
                                              double min_distance, int max_iterations) {
  const bool one_dimensional = problem.real && start.imag() == 0.0;
  auto clamp = [&](Eigen::Vector2d x) {
    x(0) = std::min(x(0), -min_distance);
    if (one_dimensional) x(1) = 0.0;
    return x;
  };
  auto to_complex = [](const Eigen::Vector2d& x) { return Complex(x(0), x(1)); };
  auto gradient = [&](const Eigen::Vector2d& x) {
    Eigen::Vector2d g = residual_min_gradient(problem, to_complex(x));
    if (one_dimensional) g(1) = 0.0;
    return g;
  };
  auto done = [](double f, const Eigen::Vector2d& g) { return g.norm() <= 1e-6 * f + 1e-12; };

  Eigen::Vector2d x = clamp({start.real(), start.imag()});
  ShiftOptimization out;
  out.f_start = residual_min_objective(problem, to_complex(x));
  double f = out.f_start;
  Eigen::Vector2d g = gradient(x);
  const double scale = 0.1 * std::abs(to_complex(x)) / std::max(g.norm(), 1e-300);
  Eigen::Matrix2d h_inv = scale * Eigen::Matrix2d::Identity();

  int it = 0;
  bool converged = done(f, g);
  while (!converged && it < max_iterations) {
    ++it;
    Eigen::Vector2d d = -h_inv * g;
    if (g.dot(d) >= 0.0) {
      h_inv = scale * Eigen::Matrix2d::Identity();
      d = -h_inv * g;
    }
    double t = 1.0;
    Eigen::Vector2d xn;
    double fn = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      xn = clamp(x + t * d);
      if ((xn - x).norm() == 0.0) break;
      fn = residual_min_objective(problem, to_complex(xn));
      if (std::isfinite(fn) && fn <= f + 1e-4 * g.dot(xn - x)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    const Eigen::Vector2d gn = gradient(xn);
    const Eigen::Vector2d s = xn - x;
    const Eigen::Vector2d y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::Matrix2d i2 = Eigen::Matrix2d::Identity();
      h_inv = (i2 - rho * s * y.transpose()) * h_inv * (i2 - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    x = xn;
    f = fn;
    g = gn;
    converged = done(f, g);
  }
  out.sigma = to_complex(x);
  out.f = f;
  out.gradient_norm = g.norm();
  out.iterations = it;
  out.converged = converged;
  return out;
}

namespace {

Shift optimize_from(const ProjectedHamiltonian& projected, const Shift& start, const RiccatiProblem& problem) {
  const double guard = 1e-8 * problem.a_norm1();
  try {
    const ProjectedResidualProblem reduced = reduce_projected(projected);
    const ShiftOptimization opt = minimize_residual_objective(reduced, start.value, guard);
    Complex sigma = opt.sigma;
    if (!(opt.f <= opt.f_start) || !std::isfinite(opt.f)) return start;
    if (std::abs(sigma) < guard) return start;
    if (projected.real) {
      if (std::abs(sigma.imag()) <= 1e-8 * std::abs(sigma)) sigma.imag(0.0);
      sigma.imag(std::abs(sigma.imag()));
    }
    return Shift::make(sigma);
  } catch (const Error&) {
    return start;
  }
}

}  // namespace

Shift residual_minimizing_shift(const LowRankState& state, const RiccatiProblem& problem, Window window) {
  const ProjectedHamiltonian projected = projected_hamiltonian(state, problem, window);
  return optimize_from(projected, residual_hamiltonian_shift(projected), problem);
}

// ---------------------------------------------------------------------------
// Dynamic strategy

DynamicStrategy::DynamicStrategy(DynamicConfig config) : config_(config) {
  if (config_.window && *config_.window < 1)
    throw Error(ErrorCode::InvalidOptions, "projection window must be at least one column");
}

Shift DynamicStrategy::next(const LowRankState& state, const RiccatiProblem& problem, Arithmetic arithmetic) {
  ProjectedHamiltonian projected;
  if (!config_.window && state.width() > 0)
    projected = project_onto(full_basis_.update(problem.apply_e_transpose(state.z)), state, problem);
  else
    projected = projected_hamiltonian(state, problem, config_.window);

  Shift shift;
  try {
    shift = residual_hamiltonian_shift(projected);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoStableShift) throw;
    return fallback(state, problem, arithmetic);
  }
  if (config_.optimize) shift = optimize_from(projected, shift, problem);
  return shift;
}

}  // namespace radi
