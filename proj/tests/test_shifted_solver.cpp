#include "doctest.h"

#include <cmath>

#include "radi/harness.hpp"
#include "radi/shifted_solver.hpp"

using namespace radi;

namespace {

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

double rel(const CMatrix& x, const CMatrix& ref) { return (x - ref).norm() / ref.norm(); }

SolverConfig with_backend(SolverBackend backend) {
  SolverConfig c;
  c.backend = backend;
  return c;
}

}  // namespace

TEST_CASE("shift must lie in the left half-plane") {
  const RiccatiProblem problem = RiccatiProblem::from_dense(Matrix::Identity(2, 2), Matrix::Ones(2, 1), Matrix::Ones(1, 2));
  CHECK(code_of([&] { ShiftedFactorization(problem, Shift{{0.5, 0.0}, ShiftKind::Real}); }) == ErrorCode::ShiftDomain);
}

TEST_CASE("diagonal solves on both backends") {
  for (SolverBackend backend : {SolverBackend::Dense, SolverBackend::Sparse}) {
    const RiccatiProblem problem =
        RiccatiProblem::from_dense(-Matrix::Identity(2, 2), Matrix::Ones(2, 1), Matrix::Ones(1, 2));
    const CMatrix v = shifted_solve(problem, Shift::make(-1.0), CMatrix::Identity(2, 1), with_backend(backend));
    CHECK(v(0, 0).real() == doctest::Approx(-0.5));
    CHECK(std::abs(v(1, 0)) == 0.0);

    Matrix a = Matrix::Zero(2, 2);
    a.diagonal() << -1.0, -2.0;
    Matrix e = Matrix::Zero(2, 2);
    e.diagonal() << 2.0, 1.0;
    const RiccatiProblem gen = RiccatiProblem::from_dense(a, Matrix::Ones(2, 1), Matrix::Ones(1, 2), e);
    const CMatrix w = shifted_solve(gen, Shift::make(-1.0), CMatrix::Ones(2, 1), with_backend(backend));
    CHECK(w(0, 0).real() == doctest::Approx(-1.0 / 3.0));
    CHECK(w(1, 0).real() == doctest::Approx(-1.0 / 3.0));
  }
}

TEST_CASE("real shifts keep real right-hand sides exactly real") {
  const RiccatiProblem problem = random_stable_problem(30, 2, 2, 4);
  for (SolverBackend backend : {SolverBackend::Dense, SolverBackend::Sparse}) {
    const CMatrix v = shifted_solve(problem, Shift::make(-0.7), Matrix::Random(30, 2).cast<Complex>(), with_backend(backend));
    CHECK(v.imag().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("backends agree with a dense reference for complex shifts") {
  const RiccatiProblem problem = random_generalized_problem(25, 2, 2, 8);
  const Complex sigma(-0.4, 1.3);
  const CMatrix rhs = CMatrix::Random(25, 3);
  const CMatrix m = problem.dense_a().transpose().cast<Complex>() + sigma * problem.dense_e().transpose().cast<Complex>();
  const CMatrix ref = m.partialPivLu().solve(rhs);
  for (SolverBackend backend : {SolverBackend::Dense, SolverBackend::Sparse})
    CHECK(rel(shifted_solve(problem, Shift::make(sigma), rhs, with_backend(backend)), ref) < 1e-12);
}

TEST_CASE("singular shifted matrix raises SingularShift") {
  Matrix a = Matrix::Zero(2, 2);
  a.diagonal() << -1.0, -3.0;
  const RiccatiProblem problem = RiccatiProblem::from_dense(a, Matrix::Ones(2, 1), Matrix::Ones(1, 2));
  for (SolverBackend backend : {SolverBackend::Dense, SolverBackend::Sparse}) {
    // diag(1, 3) - 3 I is singular.
    const RiccatiProblem flipped = RiccatiProblem::from_dense(-a, Matrix::Ones(2, 1), Matrix::Ones(1, 2));
    CHECK(code_of([&] { ShiftedFactorization(flipped, Shift::make(-3.0), with_backend(backend)); }) ==
          ErrorCode::SingularShift);
    try {
      ShiftedFactorization(flipped, Shift::make(-3.0), with_backend(backend));
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("sigma = -3") != std::string::npos);
    }
  }
  CHECK(ShiftedFactorization(problem, Shift::make(-3.0)).rcond() > 0.1);
}

TEST_CASE("sparse rcond estimate is within a modest factor of the true value") {
  const RiccatiProblem problem = random_stable_problem(40, 1, 1, 2);
  const ShiftedFactorization sparse(problem, Shift::make({-0.3, 0.2}), with_backend(SolverBackend::Sparse));
  const ShiftedFactorization dense(problem, Shift::make({-0.3, 0.2}), with_backend(SolverBackend::Dense));
  CHECK(!sparse.is_dense());
  CHECK(dense.is_dense());
  CHECK(sparse.rcond() / dense.rcond() < 10.0);
  CHECK(sparse.rcond() / dense.rcond() > 0.1);
}

TEST_CASE("factorization reuse gives identical results") {
  const RiccatiProblem problem = random_stable_problem(20, 1, 1, 6);
  const ShiftedFactorization f(problem, Shift::make({-1.0, 0.5}));
  const CMatrix rhs = CMatrix::Random(20, 2);
  CHECK(f.solve(rhs) == f.solve(rhs));
}

TEST_CASE("SMW solve") {
  SUBCASE("zero correction equals the plain solve") {
    const RiccatiProblem problem = random_stable_problem(12, 2, 1, 5);
    const CMatrix rhs = CMatrix::Random(12, 1);
    const Shift s = Shift::make({-0.8, 0.4});
    CHECK(rel(smw_shifted_solve(problem, s, CMatrix::Zero(12, 2), rhs), shifted_solve(problem, s, rhs)) < 1e-15);
  }
  SUBCASE("scalar converged feedback") {
    const RiccatiProblem problem =
        RiccatiProblem::from_dense(Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0));
    const CMatrix k = CMatrix::Constant(1, 1, std::sqrt(2.0) - 1.0);
    const CMatrix v = smw_shifted_solve(problem, Shift::make(-1.0), k, CMatrix::Constant(1, 1, 1.0));
    CHECK(v(0, 0).real() == doctest::Approx(-1.0 / (1.0 + std::sqrt(2.0))).epsilon(1e-15));
  }
  SUBCASE("matches the dense corrected matrix") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Index n = 8 + static_cast<Index>(seed) * 9;
      const RiccatiProblem problem = seed % 2 ? random_stable_problem(n, 2, 2, seed) : random_generalized_problem(n, 2, 2, seed);
      Rng rng(seed);
      const CMatrix k = rng.normal_matrix(n, 2).cast<Complex>() * 0.3;
      const CMatrix rhs = rng.normal_matrix(n, 2).cast<Complex>();
      const Complex sigma(-rng.uniform(0.2, 2.0), rng.uniform(-1.0, 1.0));
      const CMatrix m = problem.dense_a().transpose().cast<Complex>() - k * problem.b().transpose().cast<Complex>() +
                        sigma * problem.dense_e().transpose().cast<Complex>();
      Eigen::PartialPivLU<CMatrix> lu(m);
      if (1.0 / lu.rcond() > 1e8) continue;
      const CMatrix ref = lu.solve(rhs);
      for (SolverBackend backend : {SolverBackend::Dense, SolverBackend::Sparse})
        CHECK(rel(smw_shifted_solve(problem, Shift::make(sigma), k, rhs, with_backend(backend)), ref) < 1e-9);
      SolverConfig direct;
      direct.dense_direct = true;
      CHECK(rel(smw_shifted_solve(problem, Shift::make(sigma), k, rhs, direct), ref) < 1e-12);
    }
  }
  SUBCASE("singular capacitance raises SmwBreakdown") {
    // a - k b + sigma = 3 - 1 - 2 = 0 while a + sigma = 1 is regular.
    const RiccatiProblem problem =
        RiccatiProblem::from_dense(Matrix::Constant(1, 1, 3.0), Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0));
    CHECK(code_of([&] {
            smw_shifted_solve(problem, Shift::make(-2.0), CMatrix::Constant(1, 1, 1.0), CMatrix::Constant(1, 1, 1.0));
          }) == ErrorCode::SmwBreakdown);
  }
}

TEST_CASE("user callback replaces the built-in solver") {
  const RiccatiProblem problem = random_stable_problem(10, 1, 1, 3);
  int calls = 0;
  SolverConfig config;
  config.callback = [&](Complex sigma, const CMatrix& rhs) -> CMatrix {
    ++calls;
    const CMatrix m = problem.dense_a().transpose().cast<Complex>() + sigma * CMatrix::Identity(10, 10);
    return m.partialPivLu().solve(rhs);
  };
  const CMatrix rhs = CMatrix::Random(10, 1);
  const Shift s = Shift::make({-0.5, 0.1});
  CHECK(rel(shifted_solve(problem, s, rhs, config), shifted_solve(problem, s, rhs)) < 1e-12);
  CHECK(calls == 1);
}
