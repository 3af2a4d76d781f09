#include "radi/model.hpp"

#include <cmath>

namespace radi {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Dimension: return "DimensionError";
    case ErrorCode::ShiftDomain: return "ShiftDomain";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::SmwBreakdown: return "SmwBreakdown";
    case ErrorCode::RealShiftGiven: return "RealShiftGiven";
    case ErrorCode::SingularE: return "SingularE";
    case ErrorCode::NoShifts: return "NoShifts";
    case ErrorCode::NoStableShift: return "NoStableShift";
    case ErrorCode::OracleFailure: return "OracleFailure";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    case ErrorCode::InvalidOptions: return "InvalidOptions";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Io: return "IoError";
  }
  return "Error";
}

struct RiccatiProblem::EFactor {
  mutable Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;  // transpose() is non-const
};

namespace {

double sparse_norm1(const SparseMatrix& a) {
  double best = 0.0;
  for (Index j = 0; j < a.outerSize(); ++j) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(a, j); it; ++it) sum += std::abs(it.value());
    best = std::max(best, sum);
  }
  return best;
}

}  // namespace

RiccatiProblem::RiccatiProblem(SparseMatrix a, Matrix b, Matrix c, std::optional<SparseMatrix> e)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), e_(std::move(e)) {
  const Index n = a_.rows();
  if (n == 0 || a_.cols() != n) throw Error(ErrorCode::Dimension, "A must be square and non-empty");
  if (b_.rows() != n) throw Error(ErrorCode::Dimension, "B must have n rows");
  if (c_.cols() != n || c_.rows() == 0) throw Error(ErrorCode::Dimension, "C must be p x n with p >= 1");
  if (c_.rows() > n || b_.cols() > n) throw Error(ErrorCode::Dimension, "require p <= n and m <= n");
  if (!a_.isCompressed()) a_.makeCompressed();
  a_norm1_ = sparse_norm1(a_);

  if (e_) {
    if (e_->rows() != n || e_->cols() != n) throw Error(ErrorCode::Dimension, "E must be n x n");
    e_->makeCompressed();
    auto factor = std::make_shared<EFactor>();
    factor->lu.compute(*e_);
    if (factor->lu.info() != Eigen::Success || factor->lu.absDeterminant() == 0.0)
      throw Error(ErrorCode::SingularE, "factorization of E failed");
    e_factor_ = std::move(factor);
  }
}

RiccatiProblem RiccatiProblem::from_dense(const Matrix& a, const Matrix& b, const Matrix& c,
                                          const std::optional<Matrix>& e) {
  std::optional<SparseMatrix> es;
  if (e) es = e->sparseView();
  return RiccatiProblem(a.sparseView(), b, c, std::move(es));
}

CMatrix RiccatiProblem::apply_e_transpose(const CMatrix& x) const {
  if (!e_) return x;
  const SparseMatrix et = e_->transpose();
  return CMatrix(et.cast<Complex>() * x);
}

Matrix RiccatiProblem::solve_e(const Matrix& x) const {
  if (!e_factor_) return x;
  return e_factor_->lu.solve(x);
}

Matrix RiccatiProblem::solve_e_transpose(const Matrix& x) const {
  if (!e_factor_) return x;
  return e_factor_->lu.transpose().solve(x);
}

Matrix RiccatiProblem::dense_e() const {
  if (!e_) return Matrix::Identity(n(), n());
  return Matrix(*e_);
}

Shift Shift::make(Complex value) {
  if (!(value.real() < 0.0) || !std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw Error(ErrorCode::ShiftDomain, "shift must lie in the open left half-plane");
  return Shift{value, value.imag() == 0.0 ? ShiftKind::Real : ShiftKind::ComplexPairLead};
}

LowRankState LowRankState::initial(const RiccatiProblem& problem, NormKind norm) {
  LowRankState s;
  s.z = CMatrix(problem.n(), 0);
  s.r = problem.c().transpose().cast<Complex>();
  s.k = CMatrix::Zero(problem.n(), problem.m());
  s.norm = norm;
  s.initial_residual = residual_norm(s.r, norm);
  return s;
}

Index LowRankState::y_size() const {
  Index total = 0;
  for (const auto& y : y_blocks) total += y.rows();
  return total;
}

bool LowRankState::is_real() const {
  auto zero_imag = [](const CMatrix& m) { return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0; };
  if (!zero_imag(z) || !zero_imag(r) || !zero_imag(k)) return false;
  for (const auto& y : y_blocks)
    if (!zero_imag(y)) return false;
  return true;
}

double LowRankState::elapsed_seconds() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
}

double residual_norm(const CMatrix& r, NormKind norm) {
  if (r.size() == 0) throw Error(ErrorCode::Dimension, "residual factor has no columns");
  const CMatrix gram = r.adjoint() * r;
  if (norm == NormKind::Frobenius) return gram.norm();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  return std::max(0.0, eig.eigenvalues().maxCoeff());
}

CMatrix assemble_dense(const LowRankState& state, Index cap) {
  const Index n = state.z.rows();
  if (n > cap) throw Error(ErrorCode::Dimension, "n exceeds the dense materialization cap");
  if (state.y_size() != state.width())
    throw Error(ErrorCode::InternalInconsistency, "Y blocks do not match the width of Z");
  CMatrix x = CMatrix::Zero(n, n);
  Index col = 0;
  for (const auto& y : state.y_blocks) {
    const Index w = y.rows();
    Eigen::LLT<CMatrix> llt(y);
    if (llt.info() != Eigen::Success)
      throw Error(ErrorCode::InternalInconsistency, "Y block is not positive definite");
    const auto zb = state.z.middleCols(col, w);
    x.noalias() += zb * llt.solve(zb.adjoint());
    col += w;
  }
  return (x + x.adjoint()) / 2.0;
}

double relative_residual(const LowRankState& state, const RiccatiProblem& problem) {
  const double base = residual_norm(problem.c().transpose().cast<Complex>(), state.norm);
  if (base == 0.0) throw Error(ErrorCode::Dimension, "C is zero; relative residual undefined");
  return residual_norm(state.r, state.norm) / base;
}

}  // namespace radi
