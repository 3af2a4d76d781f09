#include "radi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace radi {

namespace {

// Dense data of the reverted problem Ahat = E^{-1}A, Ghat = E^{-1} B B^T E^{-T}.
struct DenseData {
  Matrix a;
  Matrix g;
  Matrix q;
  std::optional<Eigen::PartialPivLU<Matrix>> e_lu;
  Matrix e;
};

DenseData dense_data(const RiccatiProblem& problem) {
  if (problem.n() > kDenseCap)
    throw Error(ErrorCode::Dimension, "dense oracle limited to n <= " + std::to_string(kDenseCap));
  DenseData d;
  d.q = problem.q();
  if (!problem.has_e()) {
    d.a = problem.dense_a();
    d.g = problem.g();
    return d;
  }
  d.e = problem.dense_e();
  d.e_lu.emplace(d.e);
  d.a = d.e_lu->solve(problem.dense_a());
  const Matrix bh = d.e_lu->solve(problem.b());
  d.g = bh * bh.transpose();
  return d;
}

CMatrix hermitian_part(const CMatrix& x) { return (x + x.adjoint()) / 2.0; }

// X -> E^T X E
CMatrix to_reverted(const DenseData& d, const CMatrix& x) {
  if (!d.e_lu) return x;
  const CMatrix e = d.e.cast<Complex>();
  return e.transpose() * x * e;
}

// B M^{-1} via M^T Y^T = B^T.
CMatrix right_solve(const Eigen::PartialPivLU<CMatrix>& lu, const CMatrix& b) {
  const CMatrix bt = b.transpose();
  const CMatrix yt = lu.transpose().solve(bt);
  return yt.transpose();
}

// Xhat -> E^{-T} Xhat E^{-1}
CMatrix from_reverted(const DenseData& d, const CMatrix& xh) {
  if (!d.e_lu) return xh;
  const Eigen::PartialPivLU<CMatrix> lu(d.e.cast<Complex>());
  const CMatrix left = lu.transpose().solve(xh);  // E^{-T} Xhat
  return right_solve(lu, left);
}

Matrix hamiltonian_of(const DenseData& d) {
  const Index n = d.a.rows();
  Matrix h(2 * n, 2 * n);
  h << d.a, d.g, d.q, -d.a.transpose();
  return h;
}

constexpr double kOracleRcond = 1e-14;

// Zero when a pivot vanishes; Eigen's estimate is not reliable there.
double lu_rcond(const Eigen::PartialPivLU<CMatrix>& lu) {
  const Vector pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (pivots.size() == 0) return 1.0;
  if (!(pivots.minCoeff() > 0.0) || !pivots.allFinite()) return 0.0;
  const double r = lu.rcond();
  return std::isfinite(r) ? r : 0.0;
}

Eigen::PartialPivLU<CMatrix> checked_lu(const CMatrix& m, const std::string& what) {
  Eigen::PartialPivLU<CMatrix> lu(m);
  const double rc = lu_rcond(lu);
  if (!(rc > kOracleRcond)) {
    std::ostringstream os;
    os << what << " is singular (rcond " << rc << ")";
    throw Error(ErrorCode::OracleFailure, os.str());
  }
  return lu;
}

// Givens pair (c, s) with [c s; -conj(s) c] [f; g] = [r; 0].
void givens(Complex f, Complex g, double& c, Complex& s) {
  const double af = std::abs(f);
  const double ag = std::abs(g);
  if (ag == 0.0) {
    c = 1.0;
    s = 0.0;
  } else if (af == 0.0) {
    c = 0.0;
    s = std::conj(g) / ag;
  } else {
    const double norm = std::hypot(af, ag);
    c = af / norm;
    s = (f / af) * std::conj(g) / norm;
  }
}

// x <- c x + s y,  y <- c y - conj(s) x
template <typename X, typename Y>
void rotate(X&& x, Y&& y, double c, Complex s) {
  for (Index i = 0; i < x.size(); ++i) {
    const Complex xi = x(i);
    const Complex yi = y(i);
    x(i) = c * xi + s * yi;
    y(i) = c * yi - std::conj(s) * xi;
  }
}

// Exchanges diagonal entries k and k+1 of the upper triangular t, updating u.
void swap_adjacent(CMatrix& t, CMatrix& u, Index k) {
  const Index n = t.rows();
  const Complex t11 = t(k, k);
  const Complex t22 = t(k + 1, k + 1);
  double c;
  Complex s;
  givens(t(k, k + 1), t22 - t11, c, s);
  if (k + 2 < n) rotate(t.row(k).tail(n - k - 2), t.row(k + 1).tail(n - k - 2), c, s);
  if (k > 0) rotate(t.col(k).head(k), t.col(k + 1).head(k), c, std::conj(s));
  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
  rotate(u.col(k), u.col(k + 1), c, std::conj(s));
}

}  // namespace

Matrix hamiltonian(const RiccatiProblem& problem) { return hamiltonian_of(dense_data(problem)); }

CMatrix dense_care_solve(const RiccatiProblem& problem) {
  const DenseData d = dense_data(problem);
  const Index n = d.a.rows();
  Eigen::ComplexSchur<CMatrix> schur(hamiltonian_of(d).cast<Complex>());
  if (schur.info() != Eigen::Success) throw Error(ErrorCode::OracleFailure, "Schur decomposition failed");
  CMatrix t = schur.matrixT();
  CMatrix u = schur.matrixU();

  // Move stable eigenvalues to the leading block, preserving their relative order.
  Index placed = 0;
  for (Index j = 0; j < 2 * n; ++j) {
    if (!(t(j, j).real() < 0.0)) continue;
    for (Index k = j; k > placed; --k) swap_adjacent(t, u, k - 1);
    ++placed;
  }
  if (placed != n)
    throw Error(ErrorCode::OracleFailure,
                "Hamiltonian has " + std::to_string(placed) + " stable eigenvalues, expected " + std::to_string(n));

  const CMatrix p = u.topLeftCorner(n, n);
  const CMatrix q = u.bottomLeftCorner(n, n);
  const auto lu = checked_lu(p, "stable subspace basis P");
  // X = -Q P^{-1}  <=>  P^T X^T = -Q^T
  const CMatrix xh = -right_solve(lu, q);
  return hermitian_part(from_reverted(d, hermitian_part(xh)));
}

std::vector<Complex> stable_hamiltonian_eigenvalues(const RiccatiProblem& problem) {
  Eigen::ComplexEigenSolver<CMatrix> eig(hamiltonian(problem).cast<Complex>(), false);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::OracleFailure, "Hamiltonian eigensolver failed");
  std::vector<Complex> out;
  for (Index i = 0; i < eig.eigenvalues().size(); ++i)
    if (eig.eigenvalues()(i).real() < 0.0) out.push_back(eig.eigenvalues()(i));
  std::stable_sort(out.begin(), out.end(), [](Complex x, Complex y) {
    if (std::abs(x.real()) != std::abs(y.real())) return std::abs(x.real()) < std::abs(y.real());
    return std::abs(x.imag()) < std::abs(y.imag());
  });
  return out;
}

CMatrix invariant_subspace_approx(const RiccatiProblem& problem, Index k,
                                  const std::optional<std::vector<Complex>>& selection) {
  const DenseData d = dense_data(problem);
  const Index n = d.a.rows();
  if (k < 0 || k > n) throw Error(ErrorCode::Dimension, "k must lie in [0, n]");
  if (selection && static_cast<Index>(selection->size()) < k)
    throw Error(ErrorCode::Dimension, "selection has fewer than k eigenvalues");
  if (k == 0) return CMatrix::Zero(n, n);

  Eigen::ComplexEigenSolver<CMatrix> eig(hamiltonian_of(d).cast<Complex>());
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::OracleFailure, "Hamiltonian eigensolver failed");
  const CVector& values = eig.eigenvalues();

  std::vector<Index> chosen;
  if (selection) {
    for (Index j = 0; j < k; ++j) {
      Index best = -1;
      for (Index i = 0; i < values.size(); ++i) {
        if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
        if (best < 0 || std::abs(values(i) - (*selection)[j]) < std::abs(values(best) - (*selection)[j])) best = i;
      }
      if (!(values(best).real() < 0.0)) throw Error(ErrorCode::OracleFailure, "selected eigenvalue is not stable");
      chosen.push_back(best);
    }
  } else {
    std::vector<Index> stable;
    for (Index i = 0; i < values.size(); ++i)
      if (values(i).real() < 0.0) stable.push_back(i);
    std::stable_sort(stable.begin(), stable.end(), [&](Index x, Index y) {
      const Complex a = values(x), b = values(y);
      if (std::abs(a.real()) != std::abs(b.real())) return std::abs(a.real()) < std::abs(b.real());
      return std::abs(a.imag()) < std::abs(b.imag());
    });
    if (static_cast<Index>(stable.size()) < k) throw Error(ErrorCode::OracleFailure, "too few stable eigenvalues");
    chosen.assign(stable.begin(), stable.begin() + k);
  }

  CMatrix p(n, k), q(n, k);
  for (Index j = 0; j < k; ++j) {
    const CVector v = eig.eigenvectors().col(chosen[j]);
    p.col(j) = v.head(n);
    q.col(j) = v.tail(n);
  }
  // X only depends on span([P; Q]); an orthonormal basis removes eigenvector scaling. Q_k^H P_k
  // then becomes ill-conditioned only along directions where Q_k is small, and those directions
  // contribute at most the truncation level to X, so a rank-revealing solve is used and the
  // system is required to stay consistent.
  CMatrix pq(2 * n, k);
  pq << p, q;
  const CMatrix basis = Eigen::HouseholderQR<CMatrix>(pq).householderQ() * CMatrix::Identity(2 * n, k);
  const CMatrix pb = basis.topRows(n);
  const CMatrix qb = basis.bottomRows(n);
  const CMatrix s = qb.adjoint() * pb;
  Eigen::JacobiSVD<CMatrix> svd(s, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-14);
  const CMatrix y = svd.solve(qb.adjoint());
  if (!((s * y - qb.adjoint()).norm() <= 1e-8 * std::max(qb.norm(), 1e-300)))
    throw Error(ErrorCode::OracleFailure, "Q_k^H P_k is singular");
  const CMatrix xh = -qb * y;
  return hermitian_part(from_reverted(d, hermitian_part(xh)));
}

CMatrix qadi_dense_step(const CMatrix& x, const RiccatiProblem& problem, Complex sigma) {
  const DenseData d = dense_data(problem);
  const Index n = d.a.rows();
  const CMatrix xh = to_reverted(d, x);
  const CMatrix a = d.a.cast<Complex>();
  const CMatrix g = d.g.cast<Complex>();
  const CMatrix q = d.q.cast<Complex>();
  const CMatrix id = CMatrix::Identity(n, n);
  const Complex sb = std::conj(sigma);

  // X_half (A + conj(s) I - G X) = -Q - (A^T - conj(s) I) X
  const auto lu1 = checked_lu(a + sb * id - g * xh, "first half-step matrix");
  const CMatrix rhs1 = -q - (a.transpose() - sb * id) * xh;
  const CMatrix half = right_solve(lu1, rhs1);

  // (A^T + s I - X_half G) X_next = -Q - X_half (A - s I)
  const auto lu2 = checked_lu(a.transpose() + sigma * id - half * g, "second half-step matrix");
  const CMatrix next = lu2.solve(-q - half * (a - sigma * id));
  return hermitian_part(from_reverted(d, hermitian_part(next)));
}

CMatrix lyapunov_adi_dense_step(const CMatrix& x, const RiccatiProblem& problem, Complex sigma) {
  const DenseData d = dense_data(problem);
  const Index n = d.a.rows();
  const CMatrix xh = to_reverted(d, x);
  const CMatrix a = d.a.cast<Complex>();
  const CMatrix q = d.q.cast<Complex>();
  const CMatrix id = CMatrix::Identity(n, n);
  const Complex sb = std::conj(sigma);

  const auto lu1 = checked_lu(a + sb * id, "first half-step matrix");
  const CMatrix rhs1 = -q - (a.transpose() - sb * id) * xh;
  const CMatrix half = right_solve(lu1, rhs1);
  const auto lu2 = checked_lu(a.transpose() + sigma * id, "second half-step matrix");
  const CMatrix next = lu2.solve(-q - half * (a - sigma * id));
  return hermitian_part(from_reverted(d, hermitian_part(next)));
}

CMatrix cayley_subspace_step(const CMatrix& x, const RiccatiProblem& problem, Complex sigma) {
  const DenseData d = dense_data(problem);
  const Index n = d.a.rows();
  const CMatrix h = hamiltonian_of(d).cast<Complex>();
  const CMatrix id = CMatrix::Identity(2 * n, 2 * n);
  CMatrix basis(2 * n, n);
  basis << CMatrix::Identity(n, n), -to_reverted(d, x);

  const CMatrix shifted = h - sigma * id;
  const CMatrix rhs = (h + std::conj(sigma) * id) * basis;
  const Eigen::PartialPivLU<CMatrix> lu(shifted);
  CMatrix mn;
  if (lu_rcond(lu) > kOracleRcond) {
    mn = lu.solve(rhs);
  } else {
    // sigma is a Hamiltonian eigenvalue: take the limit subspace {S : (H - sigma I) S = rhs T},
    // the null space of [H - sigma I, -rhs], which has dimension n when the iteration is well posed.
    CMatrix k(2 * n, 3 * n);
    k << shifted, -rhs;
    Eigen::JacobiSVD<CMatrix> svd(k, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv(2 * n - 1) > 1e-12 * sv(0)))
      throw Error(ErrorCode::OracleFailure, "Cayley step is not well posed for this shift");
    mn = svd.matrixV().topRightCorner(2 * n, n);
  }
  const auto m_lu = checked_lu(mn.topRows(n), "M_k");
  const CMatrix xh = -right_solve(m_lu, mn.bottomRows(n));
  return hermitian_part(from_reverted(d, hermitian_part(xh)));
}

DenseResidual dense_residual(const CMatrix& x, const RiccatiProblem& problem, NormKind norm) {
  const Index n = problem.n();
  if (x.rows() != n || x.cols() != n) throw Error(ErrorCode::Dimension, "X must be n x n");
  if (n > kDenseCap) throw Error(ErrorCode::Dimension, "dense residual limited to n <= " + std::to_string(kDenseCap));
  const CMatrix a = problem.dense_a().cast<Complex>();
  const CMatrix g = problem.g().cast<Complex>();
  const CMatrix q = problem.q().cast<Complex>();
  CMatrix xe = x;
  if (problem.has_e()) xe = x * problem.dense_e().cast<Complex>();  // X E
  const CMatrix atxe = a.transpose() * xe;
  DenseResidual out;
  out.matrix = atxe + atxe.adjoint() + q - xe.adjoint() * g * xe;
  out.norm = norm == NormKind::Two ? hermitian_norm(out.matrix) : out.matrix.norm();
  return out;
}

double min_hermitian_eigenvalue(const CMatrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(x), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double hermitian_norm(const CMatrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(x), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

LoewnerReport loewner_and_stability_checks(const CMatrix& x_prev, const CMatrix& x_next,
                                           const RiccatiProblem& problem) {
  const DenseData d = dense_data(problem);
  LoewnerReport report;
  report.min_eig_difference = min_hermitian_eigenvalue(x_next - x_prev);
  report.min_eig_next = min_hermitian_eigenvalue(x_next);
  const CMatrix closed = d.a.cast<Complex>() - d.g.cast<Complex>() * to_reverted(d, x_next);
  Eigen::ComplexEigenSolver<CMatrix> eig(closed, false);
  report.closed_loop_abscissa = eig.eigenvalues().real().maxCoeff();
  return report;
}

}  // namespace radi
