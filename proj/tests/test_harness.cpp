#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "radi/harness.hpp"
#include "radi/matrix_market.hpp"

using namespace radi;
namespace fs = std::filesystem;

namespace {

template <typename F>
Error error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  FAIL("no error raised");
  return Error(ErrorCode::InternalInconsistency, "");
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "radi_harness_test" / name;
  fs::create_directories(dir);
  return dir;
}

fs::path write_text(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

std::string strip_time_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

const fs::path kData = RADI_TEST_DATA;

}  // namespace

TEST_CASE("Matrix Market reading") {
  SUBCASE("array 1x1") {
    const Matrix a = read_matrix_market_dense(kData / "scalar_A.mtx");
    REQUIRE(a.rows() == 1);
    CHECK(a(0, 0) == -1.0);
  }
  SUBCASE("coordinate diagonal") {
    const SparseMatrix a = read_matrix_market(kData / "diag_A.mtx");
    CHECK(a.nonZeros() == 2);
    CHECK(Matrix(a) == Matrix(Eigen::Vector2d(-1.0, -2.0).asDiagonal()));
  }
  SUBCASE("symmetric storage is expanded") {
    const fs::path f = write_text(scratch("sym") / "s.mtx",
                                  "%%MatrixMarket matrix coordinate real symmetric\n3 3 3\n1 1 2\n2 1 -1\n3 3 4\n");
    Matrix expected(3, 3);
    expected << 2, -1, 0, -1, 0, 0, 0, 0, 4;
    CHECK(read_matrix_market_dense(f) == expected);
  }
  SUBCASE("errors carry line numbers") {
    const fs::path dir = scratch("bad");
    const Error e1 = error_of([&] {
      read_matrix_market(write_text(dir / "a.mtx", "%%MatrixMarket matrix coordinate real general\n% c\n2 2 2\n1 1 1\n3 1 1\n"));
    });
    CHECK(e1.code() == ErrorCode::Parse);
    CHECK(std::string(e1.what()).find(":5:") != std::string::npos);
    const Error e2 = error_of([&] {
      read_matrix_market(write_text(dir / "b.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 x\n"));
    });
    CHECK(std::string(e2.what()).find(":3:") != std::string::npos);
    CHECK(error_of([&] { read_matrix_market(write_text(dir / "c.mtx", "not a header\n")); }).code() == ErrorCode::Parse);
    CHECK(error_of([&] { read_matrix_market(dir / "missing.mtx"); }).code() == ErrorCode::Io);
  }
}

TEST_CASE("Matrix Market round trip is bit-identical") {
  const fs::path dir = scratch("roundtrip");
  Rng rng(3);
  const Matrix dense = rng.normal_matrix(7, 4) * 1e-3;
  write_matrix_market(dir / "d.mtx", dense);
  CHECK(read_matrix_market_dense(dir / "d.mtx") == dense);

  const SparseMatrix sparse = generate_cube(3, 1, 1, 5).a();
  write_matrix_market(dir / "s.mtx", sparse);
  const SparseMatrix back = read_matrix_market(dir / "s.mtx");
  CHECK(Matrix(back) == Matrix(sparse));
}

TEST_CASE("CUBE generator") {
  SUBCASE("g = 2 structure") {
    const RiccatiProblem p = generate_cube(2, 1, 1, 1);
    CHECK(p.n() == 8);
    for (Index j = 0; j < p.a().outerSize(); ++j) CHECK(p.a().col(j).nonZeros() <= 7);
    const double h = 1.0 / 3.0;
    CHECK(p.a().coeff(0, 0) == doctest::Approx(-6.0 / (h * h)));
    CHECK(p.b().cwiseAbs().maxCoeff() < 1.0);
    CHECK(p.c().rows() == 1);
  }
  SUBCASE("full size without solving") {
    const RiccatiProblem p = generate_cube(22, 1, 1, 1);
    CHECK(p.n() == 10648);
    CHECK(p.a().nonZeros() <= 7 * 10648);
  }
  SUBCASE("deterministic in the seed") {
    CHECK(generate_cube(4, 2, 2, 9).b() == generate_cube(4, 2, 2, 9).b());
    CHECK(generate_cube(4, 2, 2, 9).c() == generate_cube(4, 2, 2, 9).c());
    CHECK(generate_cube(4, 2, 2, 9).b() != generate_cube(4, 2, 2, 10).b());
  }
  SUBCASE("limits") {
    CHECK(error_of([] { generate_cube(1, 1, 1, 1); }).code() == ErrorCode::InvalidOptions);
    CHECK(error_of([] { generate_cube(201, 1, 1, 1); }).code() == ErrorCode::Dimension);
  }
}

TEST_CASE("random data is reproducible") {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
  CHECK(random_stable_problem(6, 1, 1, 2).dense_a() == random_stable_problem(6, 1, 1, 2).dense_a());
  Rng rng(5);
  const auto shifts = random_shift_sequence(rng, 12);
  CHECK(shifts.size() == 12);
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    CHECK(shifts[i].real() < 0.0);
    if (shifts[i].imag() > 0.0) {
      REQUIRE(i + 1 < shifts.size());
      CHECK(shifts[i + 1] == std::conj(shifts[i]));
      ++i;
    } else {
      CHECK(shifts[i].imag() == 0.0);
    }
  }
}

TEST_CASE("run_solve drives a file problem end to end") {
  const fs::path dir = scratch("solve");
  RunConfig config;
  config.a = kData / "scalar_A.mtx";
  config.b = kData / "scalar_B.mtx";
  config.c = kData / "scalar_C.mtx";
  config.strategy = StrategyKind::File;
  config.shift_file = kData / "scalar_shifts.txt";
  config.history = dir / "h.csv";
  std::ostringstream out, err;
  CHECK(run_solve(config, out, err) == 0);
  CHECK(out.str().find("status=Converged") != std::string::npos);
  std::ifstream csv(dir / "h.csv");
  std::string header, row, extra;
  std::getline(csv, header);
  std::getline(csv, row);
  CHECK(header == "iter,shift_re,shift_im,relres,z_cols,wall_time_s");
  CHECK(!std::getline(csv, extra));
  std::istringstream fields(row);
  std::string cell;
  std::vector<std::string> cells;
  while (std::getline(fields, cell, ',')) cells.push_back(cell);
  REQUIRE(cells.size() == 6);
  CHECK(std::stod(cells[3]) <= 1e-14);
}

TEST_CASE("history CSV is deterministic apart from timing") {
  const RiccatiProblem p = generate_cube(4, 1, 1, 3);
  auto run = [&] {
    DynamicStrategy s(DynamicConfig{});
    std::ostringstream os;
    write_history_csv(solve(p, s).history(), os);
    return strip_time_column(os.str());
  };
  CHECK(run() == run());
}

TEST_CASE("verify suites") {
  for (const std::string& suite : verify_suites()) {
    const VerifyReport report = run_verify(suite, 10, 3);
    CHECK_MESSAGE(report.passed(), suite);
    std::ostringstream os;
    CHECK(print_verify_report(report, os) == 0);
    CHECK(os.str().find("PASS " + suite) != std::string::npos);
  }
  CHECK(error_of([] { run_verify("nope", 10, 1); }).code() == ErrorCode::InvalidOptions);
  CHECK(error_of([] { run_verify(verify_suites().front(), 1, 1); }).code() == ErrorCode::InvalidOptions);
}
