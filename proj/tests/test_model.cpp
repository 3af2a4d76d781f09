#include "doctest.h"

#include <cmath>

#include "radi/harness.hpp"
#include "radi/model.hpp"
#include "radi/oracle.hpp"
#include "radi/radi.hpp"

using namespace radi;

namespace {

RiccatiProblem scalar(double a, double b, double c) {
  return RiccatiProblem::from_dense(Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b), Matrix::Constant(1, 1, c));
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InternalInconsistency;
}

}  // namespace

TEST_CASE("problem construction checks dimensions") {
  const Matrix a = -Matrix::Identity(3, 3);
  CHECK(code_of([&] { RiccatiProblem::from_dense(a, Matrix::Ones(2, 1), Matrix::Ones(1, 3)); }) == ErrorCode::Dimension);
  CHECK(code_of([&] { RiccatiProblem::from_dense(a, Matrix::Ones(3, 1), Matrix::Ones(1, 2)); }) == ErrorCode::Dimension);
  CHECK(code_of([&] { RiccatiProblem::from_dense(a, Matrix::Ones(3, 1), Matrix::Ones(4, 3)); }) == ErrorCode::Dimension);
  CHECK(code_of([&] { RiccatiProblem::from_dense(a, Matrix::Ones(3, 4), Matrix::Ones(1, 3)); }) == ErrorCode::Dimension);
  CHECK(code_of([&] { RiccatiProblem::from_dense(Matrix::Ones(2, 3), Matrix::Ones(2, 1), Matrix::Ones(1, 3)); }) ==
        ErrorCode::Dimension);
  const RiccatiProblem ok = RiccatiProblem::from_dense(a, Matrix::Ones(3, 2), Matrix::Ones(1, 3));
  CHECK(ok.n() == 3);
  CHECK(ok.m() == 2);
  CHECK(ok.p() == 1);
}

TEST_CASE("singular E is rejected at construction") {
  Matrix e = Matrix::Identity(2, 2);
  e(1, 1) = 0.0;
  CHECK(code_of([&] {
          RiccatiProblem::from_dense(-Matrix::Identity(2, 2), Matrix::Ones(2, 1), Matrix::Ones(1, 2), e);
        }) == ErrorCode::SingularE);
}

TEST_CASE("E solves invert E") {
  const RiccatiProblem problem = random_generalized_problem(6, 1, 1, 3);
  const Matrix e = problem.dense_e();
  const Matrix x = Matrix::Random(6, 2);
  CHECK((e * problem.solve_e(x) - x).norm() < 1e-12);
  CHECK((e.transpose() * problem.solve_e_transpose(x) - x).norm() < 1e-12);
}

TEST_CASE("shift domain") {
  CHECK(code_of([] { Shift::make({0.0, 1.0}); }) == ErrorCode::ShiftDomain);
  CHECK(code_of([] { Shift::make({1.0, 0.0}); }) == ErrorCode::ShiftDomain);
  CHECK(code_of([] { Shift::make({-NAN, 0.0}); }) == ErrorCode::ShiftDomain);
  CHECK(Shift::make({-1.0, 0.0}).is_real());
  CHECK(Shift::make({-1.0, 2.0}).kind == ShiftKind::ComplexPairLead);
}

TEST_CASE("residual_norm") {
  CMatrix r = CMatrix::Zero(3, 2);
  r(0, 0) = 1.0;
  r(1, 1) = 1.0;
  CHECK(residual_norm(r) == doctest::Approx(1.0));
  CHECK(residual_norm(CMatrix::Zero(4, 2)) == 0.0);
  CHECK(residual_norm(CMatrix::Ones(2, 1)) == doctest::Approx(2.0));
  CHECK(code_of([] { residual_norm(CMatrix(3, 0)); }) == ErrorCode::Dimension);

  // Both norms of R^H R agree with the norms of the n x n product R R^H.
  const CMatrix big = CMatrix::Random(7, 3);
  const CMatrix outer = big * big.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(outer, Eigen::EigenvaluesOnly);
  CHECK(residual_norm(big) == doctest::Approx(eig.eigenvalues().cwiseAbs().maxCoeff()).epsilon(1e-12));
  CHECK(residual_norm(big, NormKind::Frobenius) == doctest::Approx(outer.norm()).epsilon(1e-12));
}

TEST_CASE("assemble_dense") {
  const RiccatiProblem problem = scalar(-1.0, 1.0, 1.0);
  LowRankState state = LowRankState::initial(problem);
  CHECK(assemble_dense(state).norm() == 0.0);

  state.z = CMatrix::Constant(1, 1, 1.0);
  state.y_blocks = {CMatrix::Constant(1, 1, 2.0)};
  CHECK(assemble_dense(state)(0, 0).real() == doctest::Approx(0.5));

  state.y_blocks = {CMatrix::Constant(1, 1, -2.0)};
  CHECK(code_of([&] { assemble_dense(state); }) == ErrorCode::InternalInconsistency);
  state.y_blocks = {};
  CHECK(code_of([&] { assemble_dense(state); }) == ErrorCode::InternalInconsistency);
  state.y_blocks = {CMatrix::Constant(1, 1, 2.0)};
  CHECK(code_of([&] { assemble_dense(state, 0); }) == ErrorCode::Dimension);
}

TEST_CASE("one exact step on the scalar problem") {
  const RiccatiProblem problem = scalar(-1.0, 1.0, 1.0);
  LowRankState state = LowRankState::initial(problem);
  CHECK(relative_residual(state, problem) == 1.0);
  radi_step_complex(state, problem, Shift::make(-std::sqrt(2.0)));
  CHECK(assemble_dense(state)(0, 0).real() == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
  CHECK(relative_residual(state, problem) <= 1e-14);
}

TEST_CASE("relative residual scales quadratically and rejects zero C") {
  const RiccatiProblem problem = random_stable_problem(5, 1, 2, 9);
  LowRankState state = LowRankState::initial(problem);
  state.r = 2.0 * state.r;
  CHECK(relative_residual(state, problem) == doctest::Approx(4.0));

  const RiccatiProblem zero_c = RiccatiProblem::from_dense(-Matrix::Identity(2, 2), Matrix::Ones(2, 1),
                                                           Matrix::Zero(1, 2));
  const LowRankState z = LowRankState::initial(zero_c);
  CHECK(code_of([&] { relative_residual(z, zero_c); }) == ErrorCode::Dimension);
}

TEST_CASE("reachable states stay PSD with SPD Y blocks and residual_norm matches the dense residual") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Index n = 10 + static_cast<Index>(seed) * 6;
    const RiccatiProblem problem = random_stable_problem(n, 2, 2, seed);
    Rng rng(seed);
    LowRankState state = LowRankState::initial(problem);
    run_shift_sequence(state, problem, random_shift_sequence(rng, 6), Arithmetic::RealMerged,
                       [&](const LowRankState& s, std::size_t) {
                         for (const auto& y : s.y_blocks) CHECK(Eigen::LLT<CMatrix>(y).info() == Eigen::Success);
                         const CMatrix x = assemble_dense(s);
                         CHECK(min_hermitian_eigenvalue(x) >= -1e-10 * hermitian_norm(x));
                         const double dense = dense_residual(x, problem).norm;
                         CHECK(std::abs(residual_norm(s.r) - dense) <= 1e-8 * dense);
                         CHECK(s.y_size() == s.width());
                       });
  }
}
