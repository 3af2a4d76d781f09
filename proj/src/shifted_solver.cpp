#include "radi/shifted_solver.hpp"

#include <sstream>
#include <variant>

namespace radi {

namespace {

using RealSparseLU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;
using ComplexSparse = Eigen::SparseMatrix<Complex>;
using ComplexSparseLU = Eigen::SparseLU<ComplexSparse, Eigen::COLAMDOrdering<int>>;

std::string describe(Complex sigma) {
  std::ostringstream os;
  os.precision(17);
  os << "sigma = " << sigma.real() << (sigma.imag() < 0 ? " - " : " + ") << std::abs(sigma.imag()) << "i";
  return os.str();
}

template <typename Scalar>
double sparse_norm1(const Eigen::SparseMatrix<Scalar>& a) {
  double best = 0.0;
  for (Index j = 0; j < a.outerSize(); ++j) {
    double sum = 0.0;
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(a, j); it; ++it) sum += std::abs(it.value());
    best = std::max(best, sum);
  }
  return best;
}

// A^T + sigma E^T as a sparse matrix of the requested scalar type.
template <typename Scalar>
Eigen::SparseMatrix<Scalar> shifted_sparse(const RiccatiProblem& problem, Scalar sigma) {
  Eigen::SparseMatrix<Scalar> at = problem.a().transpose().template cast<Scalar>();
  Eigen::SparseMatrix<Scalar> et;
  if (problem.e()) {
    et = problem.e()->transpose().template cast<Scalar>();
  } else {
    et.resize(problem.n(), problem.n());
    et.setIdentity();
  }
  Eigen::SparseMatrix<Scalar> m = at + sigma * et;
  m.makeCompressed();
  return m;
}

// Hager-Higham estimate of 1 / (||M||_1 ||M^{-1}||_1) from solves with M and M^H.
template <typename LU>
double sparse_rcond(double norm1, LU& lu, Index n) {
  using Scalar = typename LU::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (norm1 == 0.0) return 0.0;
  Vec x = Vec::Constant(n, Scalar(1.0 / static_cast<double>(n)));
  double estimate = 0.0;
  Index last = -1;
  for (int it = 0; it < 5; ++it) {
    const Vec y = lu.solve(x);
    if (!y.allFinite()) return 0.0;
    const double ynorm = y.template lpNorm<1>();
    if (it > 0 && ynorm <= estimate) break;
    estimate = ynorm;
    Vec sign(n);
    for (Index i = 0; i < n; ++i) {
      const double a = std::abs(y(i));
      sign(i) = a == 0.0 ? Scalar(1.0) : y(i) / a;
    }
    const Vec z = lu.adjoint().solve(sign);
    Index j = 0;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= std::real(z.dot(x)) || j == last) break;
    last = j;
    x.setZero();
    x(j) = Scalar(1.0);
  }
  // Alternating-sign test vector guards against underestimates.
  Vec alt(n);
  for (Index i = 0; i < n; ++i)
    alt(i) = Scalar((i % 2 == 0 ? 1.0 : -1.0) * (1.0 + static_cast<double>(i) / std::max<Index>(n - 1, 1)));
  const Vec w = lu.solve(alt);
  if (!w.allFinite()) return 0.0;
  estimate = std::max(estimate, 2.0 * w.template lpNorm<1>() / (3.0 * static_cast<double>(n)));
  return 1.0 / (norm1 * estimate);
}

}  // namespace

struct ShiftedFactorization::Impl {
  std::variant<std::monostate, Eigen::PartialPivLU<Matrix>, Eigen::PartialPivLU<CMatrix>,
               std::unique_ptr<RealSparseLU>, std::unique_ptr<ComplexSparseLU>>
      lu;
  ShiftedSolveCallback callback;
  double rcond = 1.0;
  bool dense = false;
};

namespace {

// Eigen's estimate is meaningless once a pivot is exactly zero.
template <typename LU>
double dense_rcond(const LU& lu) {
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs().eval();
  if (!(pivots.minCoeff() > 0.0) || !pivots.allFinite()) return 0.0;
  const double r = lu.rcond();
  return std::isfinite(r) ? r : 0.0;
}

}  // namespace

ShiftedFactorization::ShiftedFactorization(const RiccatiProblem& problem, const Shift& shift,
                                           const SolverConfig& config)
    : shift_(shift) {
  if (!(shift.value.real() < 0.0))
    throw Error(ErrorCode::ShiftDomain, describe(shift.value) + " is not in the open left half-plane");
  auto impl = std::make_shared<Impl>();
  const bool real_shift = shift.value.imag() == 0.0;
  const Index n = problem.n();

  if (config.callback) {
    impl->callback = config.callback;
    impl_ = std::move(impl);
    return;
  }

  const bool dense = config.backend == SolverBackend::Dense ||
                     (config.backend == SolverBackend::Auto && n <= config.dense_threshold);
  impl->dense = dense;
  if (dense) {
    if (real_shift) {
      Matrix m = problem.dense_a().transpose() + shift.value.real() * problem.dense_e().transpose();
      impl->rcond = dense_rcond(impl->lu.emplace<Eigen::PartialPivLU<Matrix>>(m));
    } else {
      CMatrix m = problem.dense_a().transpose().cast<Complex>() +
                  shift.value * problem.dense_e().transpose().cast<Complex>();
      impl->rcond = dense_rcond(impl->lu.emplace<Eigen::PartialPivLU<CMatrix>>(m));
    }
  } else if (real_shift) {
    SparseMatrix m = shifted_sparse<double>(problem, shift.value.real());
    auto lu = std::make_unique<RealSparseLU>();
    lu->compute(m);
    if (lu->info() != Eigen::Success)
      throw Error(ErrorCode::SingularShift, "sparse LU failed for " + describe(shift.value));
    impl->rcond = sparse_rcond(sparse_norm1(m), *lu, n);
    impl->lu = std::move(lu);
  } else {
    ComplexSparse m = shifted_sparse<Complex>(problem, shift.value);
    auto lu = std::make_unique<ComplexSparseLU>();
    lu->compute(m);
    if (lu->info() != Eigen::Success)
      throw Error(ErrorCode::SingularShift, "sparse LU failed for " + describe(shift.value));
    impl->rcond = sparse_rcond(sparse_norm1(m), *lu, n);
    impl->lu = std::move(lu);
  }
  if (!(impl->rcond >= config.rcond_threshold)) {
    std::ostringstream os;
    os << "A^T + sigma E^T is numerically singular (rcond " << impl->rcond << ") for " << describe(shift.value);
    throw Error(ErrorCode::SingularShift, os.str());
  }
  impl_ = std::move(impl);
}

bool ShiftedFactorization::is_dense() const { return impl_->dense; }

double ShiftedFactorization::rcond() const { return impl_->rcond; }

CMatrix ShiftedFactorization::solve(const CMatrix& rhs) const {
  if (impl_->callback) return impl_->callback(shift_.value, rhs);

  return std::visit(
      [&](const auto& lu) -> CMatrix {
        using T = std::decay_t<decltype(lu)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          throw Error(ErrorCode::InternalInconsistency, "empty factorization");
        } else if constexpr (std::is_same_v<T, Eigen::PartialPivLU<Matrix>> ||
                             std::is_same_v<T, std::unique_ptr<RealSparseLU>>) {
          auto real_solve = [&](const Matrix& b) -> Matrix {
            if constexpr (std::is_same_v<T, Eigen::PartialPivLU<Matrix>>)
              return lu.solve(b);
            else
              return lu->solve(b);
          };
          CMatrix out(rhs.rows(), rhs.cols());
          out.real() = real_solve(rhs.real());
          const Matrix im = rhs.imag();
          if (im.size() > 0 && im.cwiseAbs().maxCoeff() != 0.0)
            out.imag() = real_solve(im);
          else
            out.imag().setZero();
          return out;
        } else if constexpr (std::is_same_v<T, Eigen::PartialPivLU<CMatrix>>) {
          return lu.solve(rhs);
        } else {
          return lu->solve(rhs);
        }
      },
      impl_->lu);
}

CMatrix shifted_solve(const RiccatiProblem& problem, const Shift& shift, const CMatrix& rhs,
                      const SolverConfig& config) {
  if (rhs.rows() != problem.n()) throw Error(ErrorCode::Dimension, "right-hand side must have n rows");
  return ShiftedFactorization(problem, shift, config).solve(rhs);
}

CMatrix smw_shifted_solve(const ShiftedFactorization& factor, const RiccatiProblem& problem, const CMatrix& k,
                          const CMatrix& rhs, double rcond_threshold) {
  const Index m = problem.m();
  if (k.rows() != problem.n() || k.cols() != m) throw Error(ErrorCode::Dimension, "K must be n x m");
  if (rhs.rows() != problem.n()) throw Error(ErrorCode::Dimension, "right-hand side must have n rows");

  const CMatrix v0 = factor.solve(rhs);
  if (m == 0) return v0;
  const CMatrix sk = factor.solve(k);
  const CMatrix bt = problem.b().transpose().cast<Complex>();
  const CMatrix capacitance = CMatrix::Identity(m, m) - bt * sk;
  Eigen::PartialPivLU<CMatrix> cap_lu(capacitance);
  if (!(cap_lu.rcond() >= rcond_threshold))
    throw Error(ErrorCode::SmwBreakdown,
                "capacitance matrix is singular; shift is too close to a closed-loop eigenvalue");
  return v0 + sk * cap_lu.solve(bt * v0);
}

CMatrix smw_shifted_solve(const RiccatiProblem& problem, const Shift& shift, const CMatrix& k,
                          const CMatrix& rhs, const SolverConfig& config) {
  const bool dense = config.backend == SolverBackend::Dense ||
                     (config.backend == SolverBackend::Auto && problem.n() <= config.dense_threshold);
  if (config.dense_direct && dense && !config.callback) {
    if (!(shift.value.real() < 0.0)) throw Error(ErrorCode::ShiftDomain, "shift must have negative real part");
    const CMatrix m = problem.dense_a().transpose().cast<Complex>() - k * problem.b().transpose().cast<Complex>() +
                      shift.value * problem.dense_e().transpose().cast<Complex>();
    Eigen::PartialPivLU<CMatrix> lu(m);
    if (!(lu.rcond() >= config.rcond_threshold))
      throw Error(ErrorCode::SmwBreakdown, "corrected shifted matrix is numerically singular");
    return lu.solve(rhs);
  }
  return smw_shifted_solve(ShiftedFactorization(problem, shift, config), problem, k, rhs, config.rcond_threshold);
}

}  // namespace radi
