#include <algorithm>
#include <cmath>
#include <functional>

#include "radi/shifts.hpp"

namespace radi {

void PenzlConfig::validate() const {
  if (kplus < 1 || kminus < 1) throw Error(ErrorCode::InvalidOptions, "Krylov dimensions must be at least 1");
  if (count < 1) throw Error(ErrorCode::InvalidOptions, "shift count must be at least 1");
}

namespace {

using Operator = std::function<Vector(const Vector&)>;
using RealSparseLU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

// Ritz values of op from an Arnoldi process started at the normalized ones vector.
std::vector<Complex> arnoldi_ritz_values(const Operator& op, Index dim, int steps) {
  const Index k = std::min<Index>(steps, dim);
  Matrix basis = Matrix::Zero(dim, k + 1);
  Matrix hess = Matrix::Zero(k + 1, k);
  basis.col(0) = Vector::Ones(dim).normalized();
  Index size = k;
  for (Index j = 0; j < k; ++j) {
    Vector w = op(basis.col(j));
    if (!w.allFinite()) {
      size = j;
      break;
    }
    const double wnorm = w.norm();
    for (int pass = 0; pass < 2; ++pass) {
      const Vector h = basis.leftCols(j + 1).transpose() * w;
      hess.col(j).head(j + 1) += h;
      w -= basis.leftCols(j + 1) * h;
    }
    const double beta = w.norm();
    hess(j + 1, j) = beta;
    if (beta <= 1e-12 * std::max(wnorm, hess.col(j).head(j + 1).norm())) {
      size = j + 1;
      break;
    }
    basis.col(j + 1) = w / beta;
  }
  std::vector<Complex> out;
  if (size == 0) return out;
  Eigen::EigenSolver<Matrix> eig(hess.topLeftCorner(size, size), false);
  if (eig.info() != Eigen::Success) return out;
  for (Index i = 0; i < size; ++i) out.push_back(eig.eigenvalues()(i));
  return out;
}

struct Operators {
  Operator forward;
  Operator inverse;  // empty when A is singular
  Index dim = 0;
};

Operators make_operators(const RiccatiProblem& problem, PenzlSource source) {
  const Index n = problem.n();
  auto a_lu = std::make_shared<RealSparseLU>();
  a_lu->compute(problem.a());
  const bool invertible = a_lu->info() == Eigen::Success && a_lu->absDeterminant() != 0.0;
  const SparseMatrix& a = problem.a();
  const SparseMatrix e = problem.e() ? *problem.e() : SparseMatrix();

  // Ahat = E^{-1} A and its transpose / inverses, all applied matrix-free.
  auto ahat = [&problem, &a](const Vector& x) -> Vector { return problem.solve_e(a * x); };
  auto ahat_t = [&problem, &a](const Vector& y) -> Vector {
    return a.transpose() * problem.solve_e_transpose(y);
  };
  auto ahat_inv = [a_lu, &problem, e](const Vector& x) -> Vector {
    return a_lu->solve(problem.has_e() ? Vector(e * x) : x);
  };
  auto ahat_t_inv = [a_lu, &problem, e](const Vector& y) -> Vector {
    const Vector t = a_lu->transpose().solve(y);
    return problem.has_e() ? Vector(e.transpose() * t) : t;
  };

  Operators ops;
  if (source == PenzlSource::MatrixA) {
    ops.dim = n;
    ops.forward = ahat;
    if (invertible) ops.inverse = ahat_inv;
    return ops;
  }

  // Hamiltonian of the reverted equation: [[Ahat, Bh Bh^T], [C^T C, -Ahat^T]], Bh = E^{-1} B.
  const Matrix bh = problem.solve_e(problem.b());
  const Matrix& c = problem.c();
  ops.dim = 2 * n;
  ops.forward = [=](const Vector& z) -> Vector {
    Vector out(2 * n);
    const Vector x = z.head(n);
    const Vector y = z.tail(n);
    out.head(n) = ahat(x) + bh * (bh.transpose() * y);
    out.tail(n) = c.transpose() * (c * x) - ahat_t(y);
    return out;
  };
  if (!invertible) return ops;

  // H = D + L R^T with D = diag(Ahat, -Ahat^T); inverse by Sherman-Morrison-Woodbury.
  const Index m = bh.cols();
  const Index p = c.rows();
  auto d_inv = [=](const Vector& z) -> Vector {
    Vector out(2 * n);
    out.head(n) = ahat_inv(z.head(n));
    out.tail(n) = -ahat_t_inv(z.tail(n));
    return out;
  };
  auto rt = [=](const Vector& z) -> Vector {
    Vector out(m + p);
    out.head(m) = bh.transpose() * z.tail(n);
    out.tail(p) = c * z.head(n);
    return out;
  };
  Matrix dinv_l = Matrix::Zero(2 * n, m + p);
  for (Index j = 0; j < m + p; ++j) {
    Vector col = Vector::Zero(2 * n);
    if (j < m)
      col.head(n) = bh.col(j);
    else
      col.tail(n) = c.row(j - m).transpose();
    dinv_l.col(j) = d_inv(col);
  }
  Matrix capacitance = Matrix::Identity(m + p, m + p);
  for (Index j = 0; j < m + p; ++j) capacitance.col(j) += rt(dinv_l.col(j));
  auto cap_lu = std::make_shared<Eigen::PartialPivLU<Matrix>>(capacitance);
  ops.inverse = [=](const Vector& z) -> Vector {
    const Vector dz = d_inv(z);
    return dz - dinv_l * cap_lu->solve(rt(dz));
  };
  return ops;
}

double reduction(Complex lambda, const std::vector<Complex>& shifts) {
  double prod = 1.0;
  for (Complex s : shifts) prod *= std::abs(lambda - s) / std::abs(lambda + std::conj(s));
  return prod;
}

}  // namespace

std::vector<Complex> penzl_ritz_values(const RiccatiProblem& problem, const PenzlConfig& config) {
  config.validate();
  const Operators ops = make_operators(problem, config.source);
  std::vector<Complex> out = arnoldi_ritz_values(ops.forward, ops.dim, config.kplus);
  if (ops.inverse) {
    for (Complex theta : arnoldi_ritz_values(ops.inverse, ops.dim, config.kminus))
      if (std::abs(theta) > 0.0) out.push_back(1.0 / theta);
  }
  return out;
}

double penzl_objective(const std::vector<Complex>& candidates, const std::vector<Complex>& shifts) {
  double worst = 0.0;
  for (Complex c : candidates) worst = std::max(worst, reduction(c, shifts));
  return worst;
}

std::vector<Complex> penzl_select(const std::vector<Complex>& candidates, int count) {
  if (count < 1) throw Error(ErrorCode::InvalidOptions, "shift count must be at least 1");
  std::vector<Complex> pool;
  for (Complex c : candidates)
    if (c.real() < 0.0 && std::isfinite(c.real()) && std::isfinite(c.imag())) pool.push_back(c);
  if (pool.empty()) throw Error(ErrorCode::NoShifts, "no stable shift candidates");

  auto with_conjugate = [](Complex c) {
    // Leading element of a pair has positive imaginary part.
    if (c.imag() == 0.0) return std::vector<Complex>{c};
    const Complex lead(c.real(), std::abs(c.imag()));
    return std::vector<Complex>{lead, std::conj(lead)};
  };

  std::vector<Complex> chosen;
  {
    std::size_t best = 0;
    double best_value = INFINITY;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const auto group = with_conjugate(pool[i]);
      if (static_cast<int>(group.size()) > count) continue;
      const double value = penzl_objective(pool, group);
      if (value < best_value) {
        best_value = value;
        best = i;
      }
    }
    if (!std::isfinite(best_value)) {
      // Only complex candidates and a single slot: nothing fits.
      throw Error(ErrorCode::NoShifts, "no candidate fits the requested shift count");
    }
    chosen = with_conjugate(pool[best]);
  }

  while (static_cast<int>(chosen.size()) < count) {
    const int room = count - static_cast<int>(chosen.size());
    std::size_t best = pool.size();
    double best_value = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (room < 2 && pool[i].imag() != 0.0) continue;
      const double value = reduction(pool[i], chosen);
      if (value > best_value) {
        best_value = value;
        best = i;
      }
    }
    if (best == pool.size()) break;
    for (Complex c : with_conjugate(pool[best])) chosen.push_back(c);
  }
  return chosen;
}

std::vector<Complex> penzl_shifts(const RiccatiProblem& problem, const PenzlConfig& config) {
  std::vector<Complex> candidates;
  for (Complex r : penzl_ritz_values(problem, config)) {
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) continue;
    if (r.real() > 0.0) r = -r;
    if (r.real() < 0.0) candidates.push_back(r);
  }
  if (candidates.empty()) throw Error(ErrorCode::NoShifts, "no stable Ritz values");
  return penzl_select(candidates, config.count);
}

PenzlStrategy::PenzlStrategy(PenzlConfig config) : config_(config) { config_.validate(); }

Shift PenzlStrategy::next(const LowRankState& state, const RiccatiProblem& problem, Arithmetic arithmetic) {
  if (!list_) list_ = std::make_unique<ShiftListStrategy>(penzl_shifts(problem, config_), config_.cycle, "penzl");
  return list_->next(state, problem, arithmetic);
}

Shift PenzlStrategy::fallback(const LowRankState& state, const RiccatiProblem& problem, Arithmetic arithmetic) {
  return next(state, problem, arithmetic);
}

}  // namespace radi
