#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "radi/model.hpp"
#include "radi/radi.hpp"
#include "radi/shifts.hpp"

namespace radi {

// ---------------------------------------------------------------------------
// Random data

/// std::mt19937_64 seeded with the user seed. Uniforms are (x >> 11) * 2^-53 and
/// normals use Box-Muller, so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Matrix uniform_matrix(Index rows, Index cols, double lo, double hi);
  Matrix normal_matrix(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// A = N / sqrt(n) shifted so its spectral abscissa is -0.5; B, C standard normal.
RiccatiProblem random_stable_problem(Index n, Index m, Index p, std::uint64_t seed);

/// Same A, B, C as random_stable_problem plus E = M^T M / n + I with M standard normal.
RiccatiProblem random_generalized_problem(Index n, Index m, Index p, std::uint64_t seed);

/// Symmetric positive definite M^T M / n + I.
Matrix random_spd(Index n, Rng& rng);

/// `count` shifts in the open left half-plane, mixing reals and conjugate pairs
/// (leading element Im > 0, conjugate adjacent).
std::vector<Complex> random_shift_sequence(Rng& rng, int count);

/// Centered finite differences on the unit cube with g interior nodes per direction
/// (h = 1/(g+1), Dirichlet boundary) of  Laplacian - 10x d/dx - 1000y d/dy - 10 d/dz.
/// Node (i, j, k) has index i + g(j + g k). B, C are i.i.d. uniform(-1, 1).
RiccatiProblem generate_cube(int g, Index p, Index m, std::uint64_t seed);

/// Writes A.mtx, B.mtx, C.mtx (and E.mtx when present) into dir.
void write_problem(const RiccatiProblem& problem, const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Shift sequences

/// Runs one step per entry of `shifts`. In RealMerged mode a non-real entry and its
/// adjacent conjugate are consumed by one pair step. The callback sees the state after
/// every step together with the number of shifts consumed so far.
template <typename F>
void run_shift_sequence(LowRankState& state, const RiccatiProblem& problem, const std::vector<Complex>& shifts,
                        Arithmetic arithmetic, F&& after_step, const SolverConfig& config = {}) {
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    const Shift s = Shift::make(shifts[i]);
    if (arithmetic == Arithmetic::RealMerged && !s.is_real()) {
      radi_step_real_pair(state, problem, s, config);
      ++i;
    } else {
      radi_step_complex(state, problem, s, config);
    }
    after_step(state, i + 1);
  }
}

// ---------------------------------------------------------------------------
// Property kernels shared by `verify` and the test suites

/// Maximum relative deviations ||X_a - X_b||_F / ||X_b||_F over all steps.
struct EquivalenceResult {
  double radi_vs_qadi = 0.0;
  double radi_vs_cayley = 0.0;
  double qadi_vs_cayley = 0.0;
  double merged_vs_complex = 0.0;
  double max() const;
};

EquivalenceResult equivalence_run(const RiccatiProblem& problem, const std::vector<Complex>& shifts);

struct ResidualIdentityResult {
  double identity = 0.0;  // max ||R R^H - R(X_k)|| / ||R(X_k)||
  double via_current_block = 0.0;  // max ||R_k^(1) - R_k|| / ||R_k||
  double via_next_block = 0.0;     // max ||R_k^(2) - R_k|| / ||R_k||
};

ResidualIdentityResult residual_identity_run(const RiccatiProblem& problem, const std::vector<Complex>& shifts);

struct MonotonicityResult {
  double step = 0.0;     // min over k of lambda_min(X_{k+1} - X_k) / ||X||
  double gap = 0.0;      // min over k of lambda_min(X - X_k) / ||X||
  double psd = 0.0;      // min over k of lambda_min(X_k) / ||X||
};

MonotonicityResult monotonicity_run(const RiccatiProblem& problem, const std::vector<Complex>& shifts,
                                    Arithmetic arithmetic = Arithmetic::RealMerged);

struct LyapunovReductionResult {
  double radi_vs_adi = 0.0;   // max over steps of ||X_radi - X_adi||_F / ||X_adi||_F
  double adi_vs_dense = 0.0;  // low-rank ADI vs the dense ADI oracle
  bool y_identity = true;     // every RADI Y block exactly I
};

LyapunovReductionResult lyapunov_reduction_run(const RiccatiProblem& problem, const std::vector<Complex>& shifts);

/// Max relative error of residual_min_gradient against central differences with
/// step 1e-6 |sigma| at `points` random left half-plane points.
double gradient_check(const ProjectedResidualProblem& problem, Rng& rng, int points);

/// A projected problem taken from a few RADI steps on a random n x n problem with p = 1.
ProjectedResidualProblem random_projected_problem(Index n, std::uint64_t seed);

struct GeneralizedResult {
  SolveStatus status = SolveStatus::MaxIterReached;
  double residual_over_q = 0.0;   // dense generalized residual / ||Q||
  double identity_e_deviation = 0.0;  // E = I vs no E, assembled iterates
};

GeneralizedResult generalized_run(Index n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// CLI drivers

enum class StrategyKind { Penzl, Ham, HamOpt, File };

struct RunConfig {
  std::filesystem::path a, b, c;
  std::optional<std::filesystem::path> e;
  StrategyKind strategy = StrategyKind::Ham;
  std::optional<std::filesystem::path> shift_file;
  /// Projection window in columns; nullopt means all of Z. Unset: 2p.
  std::optional<Window> ell;
  SolveOptions options;
  std::optional<std::filesystem::path> history;
  std::uint64_t seed = 0;
};

/// Exit code 0 on Converged, 2 on MaxIterReached or Stagnated, 1 otherwise.
int run_solve(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Writes the CSV history (iter, shift_re, shift_im, relres, z_cols, wall_time_s).
void write_history_csv(const std::vector<IterationRecord>& history, std::ostream& out);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool upper_bound = true;  // pass iff value <= tolerance; otherwise value >= tolerance
  bool passed() const { return upper_bound ? value <= tolerance : value >= tolerance; }
};

struct VerifyReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool passed() const;
};

const std::vector<std::string>& verify_suites();

VerifyReport run_verify(const std::string& suite, Index n, std::uint64_t seed);

/// Prints one line per check; returns 0 iff all checks pass.
int print_verify_report(const VerifyReport& report, std::ostream& out);

}  // namespace radi
