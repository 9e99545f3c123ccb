#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
  std::string err;
};

// Runs the installed binary through the shell, capturing both streams and
// the exit status.  PLAP_CLI_PATH is injected by the build.
CliRun run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  const fs::path errfile =
      fs::temp_directory_path() /
      ("plap-cli-stderr-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  const std::string cmd =
      env_prefix + PLAP_CLI_PATH + " " + args + " 2>" + errfile.string();
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliRun r;
  char buf[4096];
  size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int rc = ::pclose(pipe);
  if (WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
  std::ifstream ef(errfile);
  std::stringstream ss;
  ss << ef.rdbuf();
  r.err = ss.str();
  fs::remove(errfile);
  return r;
}

// Extracts the number printed as "<key> = <value>".
double printed_field(const std::string& out, const std::string& key) {
  const std::string tag = key + " = ";
  const auto pos = out.find(tag);
  REQUIRE(pos != std::string::npos);
  return std::stod(out.substr(pos + tag.size()));
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Scratch directory per test run; removed on destruction.
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("plap-cli-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(reinterpret_cast<uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("model eigenvalue command reproduces the flat disc value") {
  const CliRun r = run_cli("model-eigen --n 2 --K 0 --r 1 --p 2 --tol 1e-10");
  REQUIRE(r.status == 0);
  const double lambda = printed_field(r.out, "lambda");
  const double j01 = oracles::bessel_j0_first_zero();
  const double expect = j01 * j01;
  CHECK(lambda == Catch::Approx(expect).epsilon(1e-6));
  CHECK(printed_field(r.out, "bracket_width") < 1e-6);
}

TEST_CASE("model eigenvalue command reproduces the hemisphere value") {
  const CliRun r = run_cli("model-eigen --n 2 --K 1 --r 1.5707963267948966 --p 2 --tol 1e-10");
  REQUIRE(r.status == 0);
  CHECK(printed_field(r.out, "lambda") == Catch::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("model eigenvalue decreases when the ball grows") {
  const CliRun small = run_cli("model-eigen --n 2 --K 1 --r 1 --p 2");
  const CliRun large = run_cli("model-eigen --n 2 --K 1 --r 2 --p 2");
  REQUIRE(small.status == 0);
  REQUIRE(large.status == 0);
  CHECK(printed_field(large.out, "lambda") < printed_field(small.out, "lambda"));
}

TEST_CASE("neumann measurement prints the nodal radius") {
  const CliRun r = run_cli("warped-eigen --profile sphere --n 2 --K 1 --p 2 --neumann");
  REQUIRE(r.status == 0);
  CHECK(printed_field(r.out, "mu") == Catch::Approx(2.0).epsilon(1e-5));
  CHECK(printed_field(r.out, "nodal_radius") ==
        Catch::Approx(0.5 * oracles::pi).margin(1e-3));
}

TEST_CASE("curvature report resolves auto-min to the profile floor") {
  const CliRun r = run_cli("curvature --profile sphere --n 3 --K auto-min --q 2");
  REQUIRE(r.status == 0);
  CHECK(printed_field(r.out, "K") == Catch::Approx(1.0).margin(1e-6));
  CHECK(printed_field(r.out, "curvature_floor") == Catch::Approx(1.0).margin(1e-6));
  // At the floor the deficit vanishes identically.
  const auto norm_pos = r.out.find("] = ");
  REQUIRE(norm_pos != std::string::npos);
  CHECK(std::stod(r.out.substr(norm_pos + 4)) == 0.0);
}

TEST_CASE("verify writes a well-formed report and exits cleanly") {
  TempDir tmp;
  const std::string out = tmp.file("doubling.csv");
  const CliRun r = run_cli("verify doubling --profile sphere --n 2 --K 1 --q 2 --out " + out);
  REQUIRE(r.status == 0);
  REQUIRE(fs::exists(out));

  std::ifstream f(out);
  std::string line;
  int comments = 0;
  while (std::getline(f, line) && !line.empty() && line[0] == '#') ++comments;
  CHECK(comments == 4);
  REQUIRE(line.rfind("suite,check,", 0) == 0);
  const auto commas = std::count(line.begin(), line.end(), ',');
  int rows = 0;
  while (std::getline(f, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == commas);
    CHECK(line.find("holds") != std::string::npos);
    ++rows;
  }
  CHECK(rows == 4);
}

TEST_CASE("identical configurations produce byte-identical reports") {
  TempDir tmp;
  const std::string base =
      "verify cheng --profile perturbed-sphere:0.04,2 --n 2 --K 1 --p 2 --q 2 "
      "--tol 1e-7 --grid 512 ";
  const CliRun a = run_cli(base + "--jobs 1 --out " + tmp.file("a.csv"));
  const CliRun b = run_cli(base + "--jobs 4 --out " + tmp.file("b.csv"));
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);
  CHECK(slurp(tmp.file("a.csv")) == slurp(tmp.file("b.csv")));
}

TEST_CASE("violated verdicts drive the exit status") {
  TempDir tmp;
  const CliRun r = run_cli(
      "verify isoperimetric --profile perturbed-sphere:0.05,2 --n 2 --K 1 --q 2 "
      "--radius 1.0 --alpha 0.9 --out " +
      tmp.file("iso.csv"));
  CHECK(r.status == 1);
  CHECK(r.out.find("violated") != std::string::npos);
  CHECK(fs::exists(tmp.file("iso.csv")));  // the table is still written
}

TEST_CASE("configuration errors exit distinctly and leave no file") {
  TempDir tmp;
  const std::string out = tmp.file("never.csv");
  const CliRun r = run_cli("verify cheng --profile banana --n 1 --p 0.5 --q 0.1 --out " + out);
  CHECK(r.status == 2);
  CHECK_FALSE(fs::exists(out));
  CHECK(r.err.find("configuration errors") != std::string::npos);
  // Consolidated: every problem is listed at once.
  CHECK(r.err.find("--n") != std::string::npos);
  CHECK(r.err.find("--p") != std::string::npos);
  CHECK(r.err.find("--profile") != std::string::npos);
  CHECK(r.err.find("--q") != std::string::npos);
}

TEST_CASE("unknown suites and missing tables are configuration errors") {
  CHECK(run_cli("verify nonsense --profile sphere").status == 2);
  CHECK(run_cli("verify cheng --profile table:/no/such/file.tsv --q 2").status == 2);
  CHECK(run_cli("model-eigen --n 2 --K auto-min --r 1").status == 2);
  CHECK(run_cli("model-eigen --n 2 --K 1 --r 1 --banana").status == 2);
}

TEST_CASE("sweep emits one row per value in the given order") {
  TempDir tmp;
  const std::string out = tmp.file("sweep.csv");
  const CliRun r = run_cli(
      "sweep model-eigen --axis r --values 1.5,1.0,0.5 --n 2 --K 1 --p 2 --out " + out);
  REQUIRE(r.status == 0);

  std::ifstream f(out);
  std::string line;
  std::vector<double> radii, lambdas;
  int r_col = -1, lhs_col = -1;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (r_col < 0) {
      for (size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "r") r_col = int(i);
        if (cells[i] == "lhs") lhs_col = int(i);
      }
      REQUIRE(r_col >= 0);
      REQUIRE(lhs_col >= 0);
      continue;
    }
    radii.push_back(std::stod(cells[size_t(r_col)]));
    lambdas.push_back(std::stod(cells[size_t(lhs_col)]));
  }
  REQUIRE(radii == std::vector<double>{1.5, 1.0, 0.5});
  CHECK(lambdas[0] < lambdas[1]);
  CHECK(lambdas[1] < lambdas[2]);
}

TEST_CASE("sweep records a broken value in its row and continues") {
  TempDir tmp;
  const std::string out = tmp.file("sweep.csv");
  const CliRun r = run_cli(
      "sweep obata --axis a --values 9.0,0.02 --profile perturbed-sphere:0.02,2 "
      "--n 2 --K 1 --p 2 --q 2 --tol 1e-7 --grid 512 --out " +
      out);
  REQUIRE(r.status == 0);  // per-row failure, not a configuration error
  const std::string table = slurp(out);
  CHECK(table.find("error:") != std::string::npos);
  CHECK(table.find("obata") != std::string::npos);
}

TEST_CASE("environment variable sets the default output directory") {
  TempDir tmp;
  const CliRun r = run_cli("verify doubling --profile sphere --n 2 --K 1 --q 2",
                           "PLAP_OUT_DIR=" + tmp.path.string() + " ");
  REQUIRE(r.status == 0);
  CHECK(fs::exists(tmp.path / "doubling.csv"));
}
