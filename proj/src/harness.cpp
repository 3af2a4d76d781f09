#include "radi/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "radi/matrix_market.hpp"
#include "radi/oracle.hpp"

namespace radi {

// ---------------------------------------------------------------------------
// Random data

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

Matrix Rng::uniform_matrix(Index rows, Index cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = uniform(lo, hi);
  return m;
}

Matrix Rng::normal_matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal();
  return m;
}

namespace {

struct DenseTriple {
  Matrix a, b, c;
};

DenseTriple random_triple(Index n, Index m, Index p, Rng& rng) {
  DenseTriple t;
  t.a = rng.normal_matrix(n, n) / std::sqrt(static_cast<double>(n));
  Eigen::EigenSolver<Matrix> eig(t.a, false);
  const double abscissa = eig.eigenvalues().real().maxCoeff();
  t.a -= (abscissa + 0.5) * Matrix::Identity(n, n);
  t.b = rng.normal_matrix(n, m);
  t.c = rng.normal_matrix(p, n);
  return t;
}

}  // namespace

RiccatiProblem random_stable_problem(Index n, Index m, Index p, std::uint64_t seed) {
  Rng rng(seed);
  const DenseTriple t = random_triple(n, m, p, rng);
  return RiccatiProblem::from_dense(t.a, t.b, t.c);
}

Matrix random_spd(Index n, Rng& rng) {
  const Matrix m = rng.normal_matrix(n, n);
  return m.transpose() * m / static_cast<double>(n) + Matrix::Identity(n, n);
}

RiccatiProblem random_generalized_problem(Index n, Index m, Index p, std::uint64_t seed) {
  Rng rng(seed);
  const DenseTriple t = random_triple(n, m, p, rng);
  return RiccatiProblem::from_dense(t.a, t.b, t.c, random_spd(n, rng));
}

std::vector<Complex> random_shift_sequence(Rng& rng, int count) {
  std::vector<Complex> out;
  while (static_cast<int>(out.size()) < count) {
    const double re = -rng.uniform(0.2, 3.0);
    const bool pair = static_cast<int>(out.size()) + 2 <= count && rng.uniform() < 0.5;
    if (pair) {
      const Complex lead(re, rng.uniform(0.1, 2.0));
      out.push_back(lead);
      out.push_back(std::conj(lead));
    } else {
      out.emplace_back(re, 0.0);
    }
  }
  return out;
}

RiccatiProblem generate_cube(int g, Index p, Index m, std::uint64_t seed) {
  if (g < 2) throw Error(ErrorCode::InvalidOptions, "grid must have at least 2 nodes per direction");
  if (g > 200) throw Error(ErrorCode::Dimension, "grid exceeds the memory cap of 200^3 unknowns");
  const Index n = static_cast<Index>(g) * g * g;
  const double h = 1.0 / (g + 1);
  const double diff = 1.0 / (h * h);
  const double half = 1.0 / (2.0 * h);

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(7 * n));
  auto index = [g](int i, int j, int k) { return static_cast<Index>(i) + g * (static_cast<Index>(j) + g * k); };
  for (int k = 0; k < g; ++k) {
    for (int j = 0; j < g; ++j) {
      for (int i = 0; i < g; ++i) {
        const Index row = index(i, j, k);
        const double x = (i + 1) * h;
        const double y = (j + 1) * h;
        // Velocity (10x, 1000y, 10) enters as -v . grad u.
        const double vx = 10.0 * x, vy = 1000.0 * y, vz = 10.0;
        entries.emplace_back(row, row, -6.0 * diff);
        if (i > 0) entries.emplace_back(row, index(i - 1, j, k), diff + vx * half);
        if (i + 1 < g) entries.emplace_back(row, index(i + 1, j, k), diff - vx * half);
        if (j > 0) entries.emplace_back(row, index(i, j - 1, k), diff + vy * half);
        if (j + 1 < g) entries.emplace_back(row, index(i, j + 1, k), diff - vy * half);
        if (k > 0) entries.emplace_back(row, index(i, j, k - 1), diff + vz * half);
        if (k + 1 < g) entries.emplace_back(row, index(i, j, k + 1), diff - vz * half);
      }
    }
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();

  Rng rng(seed);
  Matrix b = rng.uniform_matrix(n, m, -1.0, 1.0);
  Matrix c = rng.uniform_matrix(p, n, -1.0, 1.0);
  return RiccatiProblem(std::move(a), std::move(b), std::move(c));
}

void write_problem(const RiccatiProblem& problem, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  write_matrix_market(dir / "A.mtx", problem.a());
  write_matrix_market(dir / "B.mtx", problem.b());
  write_matrix_market(dir / "C.mtx", problem.c());
  if (problem.e()) write_matrix_market(dir / "E.mtx", *problem.e());
}

// ---------------------------------------------------------------------------
// Property kernels

namespace {

double rel_dev(const CMatrix& x, const CMatrix& ref) {
  const double scale = ref.norm();
  return (x - ref).norm() / (scale > 0.0 ? scale : 1.0);
}

}  // namespace

double EquivalenceResult::max() const {
  return std::max({radi_vs_qadi, radi_vs_cayley, qadi_vs_cayley, merged_vs_complex});
}

EquivalenceResult equivalence_run(const RiccatiProblem& problem, const std::vector<Complex>& shifts) {
  EquivalenceResult out;
  const Index n = problem.n();

  // Complex RADI, one iterate per shift.
  std::vector<CMatrix> radi_iterates;
  LowRankState complex_state = LowRankState::initial(problem);
  run_shift_sequence(complex_state, problem, shifts, Arithmetic::Complex,
                     [&](const LowRankState& s, std::size_t) { radi_iterates.push_back(assemble_dense(s)); });

  // Dense oracles driven by the same shifts.
  CMatrix xq = CMatrix::Zero(n, n);
  CMatrix xc = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < shifts.size(); ++k) {
    xq = qadi_dense_step(xq, problem, shifts[k]);
    xc = cayley_subspace_step(xc, problem, shifts[k]);
    out.radi_vs_qadi = std::max(out.radi_vs_qadi, rel_dev(radi_iterates[k], xq));
    out.radi_vs_cayley = std::max(out.radi_vs_cayley, rel_dev(radi_iterates[k], xc));
    out.qadi_vs_cayley = std::max(out.qadi_vs_cayley, rel_dev(xq, xc));
  }

  // Real merged RADI, compared where it completes a shift group.
  LowRankState merged = LowRankState::initial(problem);
  run_shift_sequence(merged, problem, shifts, Arithmetic::RealMerged, [&](const LowRankState& s, std::size_t used) {
    out.merged_vs_complex = std::max(out.merged_vs_complex, rel_dev(assemble_dense(s), radi_iterates[used - 1]));
  });
  return out;
}

ResidualIdentityResult residual_identity_run(const RiccatiProblem& problem, const std::vector<Complex>& shifts) {
  ResidualIdentityResult out;
  const Index n = problem.n();
  const CMatrix at = problem.dense_a().transpose().cast<Complex>();
  const CMatrix g = problem.g().cast<Complex>();
  const CMatrix id = CMatrix::Identity(n, n);
  const Index p = problem.p();

  std::vector<LowRankState> states;
  LowRankState state = LowRankState::initial(problem);
  states.push_back(state);
  run_shift_sequence(state, problem, shifts, Arithmetic::Complex,
                     [&](const LowRankState& s, std::size_t) { states.push_back(s); });

  for (std::size_t k = 1; k < states.size(); ++k) {
    const LowRankState& s = states[k];
    const CMatrix x = assemble_dense(s);
    const DenseResidual res = dense_residual(x, problem);
    const CMatrix rr = s.r * s.r.adjoint();
    out.identity = std::max(out.identity, hermitian_norm(rr - res.matrix) / res.norm);

    const double rnorm = s.r.norm();
    const CMatrix shifted = at - x * g;
    // R_k^(1) from V_k and sigma_k.
    const Complex sk = shifts[k - 1];
    const CMatrix vk = s.z.rightCols(p);
    const CMatrix r1 = (shifted - std::conj(sk) * id) * vk / std::sqrt(-2.0 * sk.real());
    out.via_current_block = std::max(out.via_current_block, (r1 - s.r).norm() / rnorm);
    // R_k^(2) from V_{k+1} and sigma_{k+1}.
    if (k + 1 < states.size()) {
      const Complex sn = shifts[k];
      const CMatrix vn = states[k + 1].z.rightCols(p);
      const CMatrix r2 = (shifted + sn * id) * vn / std::sqrt(-2.0 * sn.real());
      out.via_next_block = std::max(out.via_next_block, (r2 - s.r).norm() / rnorm);
    }
  }
  return out;
}

MonotonicityResult monotonicity_run(const RiccatiProblem& problem, const std::vector<Complex>& shifts,
                                    Arithmetic arithmetic) {
  const CMatrix x = dense_care_solve(problem);
  const double scale = hermitian_norm(x);
  MonotonicityResult out;
  CMatrix prev = CMatrix::Zero(problem.n(), problem.n());
  bool first = true;
  LowRankState state = LowRankState::initial(problem);
  run_shift_sequence(state, problem, shifts, arithmetic, [&](const LowRankState& s, std::size_t) {
    const CMatrix xk = assemble_dense(s);
    const LoewnerReport report = loewner_and_stability_checks(prev, xk, problem);
    const double step = report.min_eig_difference / scale;
    const double gap = min_hermitian_eigenvalue(x - xk) / scale;
    const double psd = report.min_eig_next / scale;
    if (first) {
      out.step = step;
      out.gap = gap;
      out.psd = psd;
      first = false;
    } else {
      out.step = std::min(out.step, step);
      out.gap = std::min(out.gap, gap);
      out.psd = std::min(out.psd, psd);
    }
    prev = xk;
  });
  return out;
}

LyapunovReductionResult lyapunov_reduction_run(const RiccatiProblem& problem, const std::vector<Complex>& shifts) {
  if (!problem.has_zero_b()) throw Error(ErrorCode::Dimension, "Lyapunov reduction needs B = 0");
  LyapunovReductionResult out;
  LowRankState radi = LowRankState::initial(problem);
  LowRankState adi = LowRankState::initial(problem);
  CMatrix dense = CMatrix::Zero(problem.n(), problem.n());
  for (Complex sigma : shifts) {
    const Shift s = Shift::make(sigma);
    radi_step_complex(radi, problem, s);
    lyapunov_adi_step(adi, problem, s);
    dense = lyapunov_adi_dense_step(dense, problem, sigma);
    const CMatrix& y = radi.y_blocks.back();
    if (y != CMatrix::Identity(y.rows(), y.cols())) out.y_identity = false;
    const CMatrix xa = assemble_dense(adi);
    out.radi_vs_adi = std::max(out.radi_vs_adi, rel_dev(assemble_dense(radi), xa));
    out.adi_vs_dense = std::max(out.adi_vs_dense, rel_dev(xa, dense));
  }
  return out;
}

double gradient_check(const ProjectedResidualProblem& problem, Rng& rng, int points) {
  double worst = 0.0;
  // Sample on the scale of the projected spectrum.
  Eigen::ComplexEigenSolver<CMatrix> eig(problem.a_h, false);
  const double scale = std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 1e-3);
  for (int i = 0; i < points; ++i) {
    const Complex sigma(-scale * rng.uniform(0.05, 2.0), scale * rng.uniform(-2.0, 2.0));
    const Eigen::Vector2d g = residual_min_gradient(problem, sigma);
    const double h = 1e-6 * std::abs(sigma);
    Eigen::Vector2d fd;
    fd(0) = (residual_min_objective(problem, sigma + h) - residual_min_objective(problem, sigma - h)) / (2.0 * h);
    fd(1) = (residual_min_objective(problem, sigma + Complex(0.0, h)) -
             residual_min_objective(problem, sigma - Complex(0.0, h))) /
            (2.0 * h);
    worst = std::max(worst, (g - fd).norm() / std::max(fd.norm(), 1e-300));
  }
  return worst;
}

ProjectedResidualProblem random_projected_problem(Index n, std::uint64_t seed) {
  const RiccatiProblem problem = random_stable_problem(n, 2, 1, seed);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  LowRankState state = LowRankState::initial(problem);
  const auto shifts = random_shift_sequence(rng, 3);
  run_shift_sequence(state, problem, shifts, Arithmetic::Complex, [](const LowRankState&, std::size_t) {});
  return reduce_projected(projected_hamiltonian(state, problem, std::nullopt));
}

GeneralizedResult generalized_run(Index n, std::uint64_t seed) {
  GeneralizedResult out;
  const RiccatiProblem problem = random_generalized_problem(n, 2, 2, seed);
  SolveOptions options;
  DynamicStrategy strategy(DynamicConfig{Index{2 * problem.p()}, false});
  const SolveOutcome outcome = solve(problem, strategy, options);
  out.status = outcome.status;
  const CMatrix x = assemble_dense(outcome.state);
  out.residual_over_q = dense_residual(x, problem).norm / hermitian_norm(problem.q().cast<Complex>());

  // E = I against the standard path with a shared shift list.
  const RiccatiProblem plain = random_stable_problem(n, 2, 2, seed);
  const RiccatiProblem with_identity(plain.a(), plain.b(), plain.c(), SparseMatrix(Matrix::Identity(n, n).sparseView()));
  Rng rng(seed + 1);
  const auto shifts = random_shift_sequence(rng, 8);
  LowRankState s_plain = LowRankState::initial(plain);
  LowRankState s_id = LowRankState::initial(with_identity);
  for (Complex sigma : shifts) {
    radi_step_complex(s_plain, plain, Shift::make(sigma));
    radi_step_generalized(s_id, with_identity, Shift::make(sigma));
    out.identity_e_deviation = std::max(out.identity_e_deviation, rel_dev(assemble_dense(s_id), assemble_dense(s_plain)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CLI drivers

void write_history_csv(const std::vector<IterationRecord>& history, std::ostream& out) {
  out << "iter,shift_re,shift_im,relres,z_cols,wall_time_s\n";
  char buf[256];
  for (std::size_t i = 0; i < history.size(); ++i) {
    const IterationRecord& r = history[i];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%lld,%.6f\n", i + 1, r.shift.real(), r.shift.imag(),
                  r.relative_residual, static_cast<long long>(r.width), r.wall_time_s);
    out << buf;
  }
}

namespace {

std::unique_ptr<ShiftStrategy> make_strategy(const RunConfig& config, const RiccatiProblem& problem) {
  const Window window = config.ell ? *config.ell : Window{2 * problem.p()};
  switch (config.strategy) {
    case StrategyKind::Penzl: return std::make_unique<PenzlStrategy>();
    case StrategyKind::Ham: return std::make_unique<DynamicStrategy>(DynamicConfig{window, false});
    case StrategyKind::HamOpt: return std::make_unique<DynamicStrategy>(DynamicConfig{window, true});
    case StrategyKind::File:
      if (!config.shift_file) throw Error(ErrorCode::InvalidOptions, "--shifts file requires --shift-file");
      return std::make_unique<ShiftListStrategy>(read_shift_file(*config.shift_file), true, "file");
  }
  throw Error(ErrorCode::InvalidOptions, "unknown shift strategy");
}

}  // namespace

int run_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::optional<SparseMatrix> e;
    if (config.e) e = read_matrix_market(*config.e);
    const RiccatiProblem problem(read_matrix_market(config.a), read_matrix_market_dense(config.b),
                                 read_matrix_market_dense(config.c), std::move(e));
    auto strategy = make_strategy(config, problem);
    const SolveOutcome outcome = solve(problem, *strategy, config.options);

    if (config.history) {
      std::ofstream csv(*config.history);
      if (!csv) throw Error(ErrorCode::Io, "cannot write " + config.history->string());
      write_history_csv(outcome.history(), csv);
      if (!csv) throw Error(ErrorCode::Io, "write failed for " + config.history->string());
    }

    const auto& h = outcome.history();
    char buf[256];
    std::snprintf(buf, sizeof buf, "status=%s iterations=%zu width=%lld relres=%.6e time_s=%.3f",
                  std::string(to_string(outcome.status)).c_str(), h.size(),
                  static_cast<long long>(outcome.state.width()), h.empty() ? 1.0 : h.back().relative_residual,
                  outcome.state.elapsed_seconds());
    out << buf << '\n';
    if (!outcome.diagnostic.empty() && outcome.status != SolveStatus::Converged)
      err << "note: " << outcome.diagnostic << '\n';

    switch (outcome.status) {
      case SolveStatus::Converged: return 0;
      case SolveStatus::MaxIterReached:
      case SolveStatus::Stagnated: return 2;
      case SolveStatus::Breakdown: return 1;
    }
    return 1;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  }
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> suites = {"equivalence", "monotonicity",       "residual-identity",
                                                  "gradient",    "lyapunov-reduction", "generalized"};
  return suites;
}

namespace {

constexpr int kVerifyInstances = 5;

std::uint64_t instance_seed(std::uint64_t seed, int i) { return seed * 1000003ULL + static_cast<std::uint64_t>(i); }

}  // namespace

VerifyReport run_verify(const std::string& suite, Index n, std::uint64_t seed) {
  const auto& suites = verify_suites();
  if (std::find(suites.begin(), suites.end(), suite) == suites.end())
    throw Error(ErrorCode::InvalidOptions, "unknown suite '" + suite + "'");
  if (n < 2 || n > 200) throw Error(ErrorCode::InvalidOptions, "verify needs 2 <= n <= 200");

  VerifyReport report;
  report.suite = suite;
  auto add = [&](std::string name, double value, double tol, bool upper = true) {
    report.checks.push_back({std::move(name), value, tol, upper});
  };

  if (suite == "equivalence") {
    EquivalenceResult worst;
    for (int i = 0; i < kVerifyInstances; ++i) {
      Rng rng(instance_seed(seed, i));
      const RiccatiProblem problem = random_stable_problem(n, 1 + i % 3, 1 + (i + 1) % 3, instance_seed(seed, i));
      const EquivalenceResult r = equivalence_run(problem, random_shift_sequence(rng, 8));
      worst.radi_vs_qadi = std::max(worst.radi_vs_qadi, r.radi_vs_qadi);
      worst.radi_vs_cayley = std::max(worst.radi_vs_cayley, r.radi_vs_cayley);
      worst.qadi_vs_cayley = std::max(worst.qadi_vs_cayley, r.qadi_vs_cayley);
      worst.merged_vs_complex = std::max(worst.merged_vs_complex, r.merged_vs_complex);
    }
    add("radi_vs_qadi", worst.radi_vs_qadi, 1e-8);
    add("radi_vs_cayley", worst.radi_vs_cayley, 1e-8);
    add("qadi_vs_cayley", worst.qadi_vs_cayley, 1e-8);
    add("merged_vs_complex", worst.merged_vs_complex, 1e-8);
  } else if (suite == "monotonicity") {
    double step = 0.0, gap = 0.0, psd = 0.0;
    for (int i = 0; i < kVerifyInstances; ++i) {
      Rng rng(instance_seed(seed, i));
      const RiccatiProblem problem = random_stable_problem(n, 1 + i % 3, 1 + (i + 1) % 3, instance_seed(seed, i));
      const MonotonicityResult r = monotonicity_run(problem, random_shift_sequence(rng, 10));
      step = std::min(step, r.step);
      gap = std::min(gap, r.gap);
      psd = std::min(psd, r.psd);
    }
    add("min_eig(X_k+1 - X_k)/||X||", step, -1e-10, false);
    add("min_eig(X - X_k)/||X||", gap, -1e-10, false);
    add("min_eig(X_k)/||X||", psd, -1e-10, false);
  } else if (suite == "residual-identity") {
    ResidualIdentityResult worst;
    for (int i = 0; i < kVerifyInstances; ++i) {
      Rng rng(instance_seed(seed, i));
      const RiccatiProblem problem = random_stable_problem(n, 1 + i % 3, 1 + (i + 1) % 3, instance_seed(seed, i));
      const ResidualIdentityResult r = residual_identity_run(problem, random_shift_sequence(rng, 8));
      worst.identity = std::max(worst.identity, r.identity);
      worst.via_current_block = std::max(worst.via_current_block, r.via_current_block);
      worst.via_next_block = std::max(worst.via_next_block, r.via_next_block);
    }
    add("||RR^H - R(X_k)||/||R(X_k)||", worst.identity, 1e-8);
    add("||R^(1) - R||/||R||", worst.via_current_block, 1e-8);
    add("||R^(2) - R||/||R||", worst.via_next_block, 1e-8);
  } else if (suite == "gradient") {
    double worst = 0.0;
    for (int i = 0; i < kVerifyInstances; ++i) {
      Rng rng(instance_seed(seed, i));
      worst = std::max(worst, gradient_check(random_projected_problem(n, instance_seed(seed, i)), rng, 20));
    }
    add("gradient_vs_central_difference", worst, 1e-5);
  } else if (suite == "lyapunov-reduction") {
    LyapunovReductionResult worst;
    for (int i = 0; i < kVerifyInstances; ++i) {
      Rng rng(instance_seed(seed, i));
      const RiccatiProblem base = random_stable_problem(n, 1, 1 + i % 3, instance_seed(seed, i));
      const RiccatiProblem problem(base.a(), Matrix::Zero(n, 1), base.c());
      const LyapunovReductionResult r = lyapunov_reduction_run(problem, random_shift_sequence(rng, 6));
      worst.radi_vs_adi = std::max(worst.radi_vs_adi, r.radi_vs_adi);
      worst.adi_vs_dense = std::max(worst.adi_vs_dense, r.adi_vs_dense);
      worst.y_identity = worst.y_identity && r.y_identity;
    }
    add("radi_vs_lyapunov_adi", worst.radi_vs_adi, 1e-12);
    add("lyapunov_adi_vs_dense", worst.adi_vs_dense, 1e-10);
    add("y_blocks_not_identity", worst.y_identity ? 0.0 : 1.0, 0.0);
  } else if (suite == "generalized") {
    double residual = 0.0, identity = 0.0, unconverged = 0.0;
    for (int i = 0; i < kVerifyInstances; ++i) {
      const GeneralizedResult r = generalized_run(n, instance_seed(seed, i));
      residual = std::max(residual, r.residual_over_q);
      identity = std::max(identity, r.identity_e_deviation);
      if (r.status != SolveStatus::Converged) unconverged += 1.0;
    }
    add("unconverged_instances", unconverged, 0.0);
    add("generalized_residual/||Q||", residual, 1e-8);
    add("identity_E_vs_standard", identity, 1e-12);
  }
  return report;
}

int print_verify_report(const VerifyReport& report, std::ostream& out) {
  for (const CheckResult& c : report.checks) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-4s %-20s %-34s %.3e (%s %.1e)", c.passed() ? "ok" : "FAIL", report.suite.c_str(),
                  c.name.c_str(), c.value, c.upper_bound ? "<=" : ">=", c.tolerance);
    out << buf << '\n';
  }
  out << (report.passed() ? "PASS " : "FAIL ") << report.suite << '\n';
  return report.passed() ? 0 : 1;
}

}  // namespace radi
