#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "radi/harness.hpp"

namespace {

using namespace radi;

std::optional<Window> parse_ell(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text == "inf") return Window{std::nullopt};
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || value < 1) throw CLI::ValidationError("--ell", "expected a positive integer or 'inf'");
  return Window{Index{value}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank RADI solver for continuous-time algebraic Riccati equations"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve A^T X E + E^T X A + C^T C - E^T X B B^T X E = 0");
  std::string a_path, b_path, c_path, e_path, shift_file, history, ell_text, shifts = "ham", arithmetic = "real",
                                                                             norm = "2";
  double tol = 1e-11;
  int maxiter = 300;
  std::uint64_t solve_seed = 0;
  solve_cmd->add_option("--a", a_path, "A in Matrix Market format")->required();
  solve_cmd->add_option("--b", b_path, "B in Matrix Market format")->required();
  solve_cmd->add_option("--c", c_path, "C in Matrix Market format")->required();
  solve_cmd->add_option("--e", e_path, "optional E in Matrix Market format");
  solve_cmd->add_option("--shifts", shifts, "shift strategy")
      ->check(CLI::IsMember({"penzl", "ham", "ham-opt", "file"}));
  solve_cmd->add_option("--shift-file", shift_file, "shift list, one 're im' per line");
  solve_cmd->add_option("--ell", ell_text, "projection window in columns, or 'inf' (default 2p)");
  solve_cmd->add_option("--tol", tol, "relative residual tolerance");
  solve_cmd->add_option("--maxiter", maxiter, "step cap");
  solve_cmd->add_option("--arithmetic", arithmetic, "real (merged pairs) or complex")
      ->check(CLI::IsMember({"real", "complex"}));
  solve_cmd->add_option("--norm", norm, "residual norm")->check(CLI::IsMember({"2", "fro"}));
  solve_cmd->add_option("--history", history, "CSV history output");
  solve_cmd->add_option("--seed", solve_seed, "RNG seed (recorded; the solver itself is deterministic)");

  // gen cube
  auto* gen_cmd = app.add_subcommand("gen", "Generate benchmark problems");
  gen_cmd->require_subcommand(1);
  auto* cube_cmd = gen_cmd->add_subcommand("cube", "Convection-diffusion operator on the unit cube");
  int grid = 10;
  Index gen_p = 1, gen_m = 1;
  std::string out_dir;
  std::uint64_t gen_seed = 0;
  cube_cmd->add_option("--grid", grid, "interior nodes per direction")->required();
  cube_cmd->add_option("--p", gen_p, "rows of C");
  cube_cmd->add_option("--m", gen_m, "columns of B");
  cube_cmd->add_option("--out", out_dir, "output directory")->required();
  cube_cmd->add_option("--seed", gen_seed, "RNG seed")->required();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Run an oracle property suite");
  std::string suite;
  Index verify_n = 12;
  std::uint64_t verify_seed = 0;
  verify_cmd->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(verify_suites()));
  verify_cmd->add_option("--n", verify_n, "problem order");
  verify_cmd->add_option("--seed", verify_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve_cmd) {
      RunConfig config;
      config.a = a_path;
      config.b = b_path;
      config.c = c_path;
      if (!e_path.empty()) config.e = e_path;
      if (shifts == "penzl")
        config.strategy = StrategyKind::Penzl;
      else if (shifts == "ham")
        config.strategy = StrategyKind::Ham;
      else if (shifts == "ham-opt")
        config.strategy = StrategyKind::HamOpt;
      else
        config.strategy = StrategyKind::File;
      if (!shift_file.empty()) config.shift_file = shift_file;
      config.ell = parse_ell(ell_text);
      config.options.tol = tol;
      config.options.maxiter = maxiter;
      config.options.arithmetic = arithmetic == "real" ? Arithmetic::RealMerged : Arithmetic::Complex;
      config.options.norm = norm == "2" ? NormKind::Two : NormKind::Frobenius;
      if (!history.empty()) config.history = history;
      config.seed = solve_seed;
      return run_solve(config, std::cout, std::cerr);
    }
    if (*cube_cmd) {
      const RiccatiProblem problem = generate_cube(grid, gen_p, gen_m, gen_seed);
      write_problem(problem, out_dir);
      std::cout << "n=" << problem.n() << " nnz=" << problem.a().nonZeros() << " out=" << out_dir << '\n';
      return 0;
    }
    if (*verify_cmd) return print_verify_report(run_verify(suite, verify_n, verify_seed), std::cout);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
