// Exercises the installed command-line surface end to end: subcommands,
// exit codes, file outputs, and cross-command consistency.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "khop/io.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) {
    std::cout << "FAIL: " << what << "\n";
    ++failures;
  }
}

int run(const std::string& cmd) {
  int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  if (status == -1) return -1;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -2;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// drop metadata lines whose key is in {kind} so exact/oracle bodies compare
std::string strip_kind(const std::string& text) {
  std::stringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("# kind=", 0) == 0) continue;
    out += line + "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cout << "usage: test_cli <path-to-cli>\n";
    return 1;
  }
  const std::string cli = argv[1];
  fs::path dir = fs::temp_directory_path() / "khop_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto at = [&](const std::string& name) { return (dir / name).string(); };

  // exact distribution file
  check(run(cli + " exact --k 3 --m 2,2 --out " + at("exact.csv")) == 0,
        "exact exits 0");
  {
    auto file = khop::harness::parse_distribution_file(
        slurp(at("exact.csv")), khop::harness::FileFormat::csv);
    check(file.kind == "exact", "exact kind");
    check(file.multinomial == 6, "exact multinomial");
    check(file.rows.size() == 5, "exact row count");
    check(file.rows[2].n == 2 && file.rows[2].numerator == 1 &&
              file.rows[2].denominator == 3,
          "exact row values");
  }

  // dense tabulation over the whole attainable range
  check(run(cli + " exact --k 4 --m 5,5,5 --out " + at("e555.csv")) == 0,
        "exact k4 m=5,5,5 exits 0");
  {
    auto file = khop::harness::parse_distribution_file(
        slurp(at("e555.csv")), khop::harness::FileFormat::csv);
    check(file.rows.size() == 126, "126 rows, support 0..125");
    check(file.rows.front().n == 0 && file.rows.back().n == 125,
          "row index range");
  }

  // oracle rows byte-identical to exact rows
  check(run(cli + " exact --k 4 --m 2,2,2 --out " + at("e4.csv")) == 0,
        "exact k4 exits 0");
  check(run(cli + " oracle --k 4 --m 2,2,2 --out " + at("o4.csv")) == 0,
        "oracle exits 0");
  check(strip_kind(slurp(at("e4.csv"))) == strip_kind(slurp(at("o4.csv"))),
        "exact and oracle agree byte for byte");

  // pgf coefficients match the exact distribution
  check(run(cli + " pgf --k 4 --m 2,2,2 --format json --out " + at("p4.json")) ==
            0,
        "pgf exits 0");
  {
    auto pgf = khop::harness::parse_distribution_file(
        slurp(at("p4.json")), khop::harness::FileFormat::json);
    auto exact = khop::harness::parse_distribution_file(
        slurp(at("e4.csv")), khop::harness::FileFormat::csv);
    check(pgf.rows.size() == 9, "pgf dense rows 0..8");
    khop::algebra::Rational total(0);
    for (const auto& row : pgf.rows) {
      total += khop::algebra::make_rational(row.numerator, row.denominator);
    }
    check(total == 1, "pgf coefficients sum to 1");
    bool all = true;
    for (const auto& row : exact.rows) {
      const auto& prow = pgf.rows[static_cast<std::size_t>(row.n)];
      all = all && prow.numerator == row.numerator &&
            prow.denominator == row.denominator;
    }
    check(all, "pgf matches exact entry-wise");
  }

  // simulation reproducibility
  const std::string sim_args = " simulate --k 3 --r0 0.35 --m 7,7 --trials 2000";
  check(run(cli + sim_args + " --seed 7 --out " + at("s1.csv")) == 0,
        "simulate exits 0");
  check(run(cli + sim_args + " --seed 7 --out " + at("s2.csv")) == 0,
        "simulate again exits 0");
  check(run(cli + sim_args + " --seed 8 --out " + at("s3.csv")) == 0,
        "simulate new seed exits 0");
  check(slurp(at("s1.csv")) == slurp(at("s2.csv")),
        "same seed gives byte-identical output");
  check(slurp(at("s1.csv")) != slurp(at("s3.csv")),
        "different seed gives different output");
  {
    auto file = khop::harness::parse_simulation_file(
        slurp(at("s1.csv")), khop::harness::FileFormat::csv);
    check(file.trials == 2000, "simulate trials recorded");
    std::uint64_t total = 0;
    for (const auto& row : file.rows) total += row.count;
    check(total == 2000, "simulate counts sum to trials");
  }

  // validation in self-test mode passes and emits report + plot
  check(run(cli + " validate --k 3 --r0 0.35 --m 7,7 --trials 20000 --seed 5"
                  " --self-test --out " +
            at("report.csv")) == 0,
        "self-test validate exits 0");
  {
    auto report = khop::harness::parse_report_file(
        slurp(at("report.csv")), khop::harness::FileFormat::csv);
    check(report.passed, "self-test report passed");
    check(report.self_test, "self-test flag recorded");
    check(report.report.exact_mean == 24.5, "exact mean column is 24.5");
    check(fs::exists(at("report_plot.csv")), "plot data file written");
    auto rows = khop::harness::parse_plot(slurp(at("report_plot.csv")),
                                          khop::harness::FileFormat::csv);
    check(rows.size() == report.report.rows.size(), "plot rows match report");
  }

  // geometry validation also runs end to end
  check(run(cli + " validate --k 2 --r0 0.51 --lambda 100 --trials 20000"
                  " --seed 3 --out " +
            at("r2.csv")) == 0,
        "two-hop validate exits 0");
  check(run(cli + " validate --k 3 --r0 0.35 --m 3,3 --trials 20000"
                  " --seed 3 --out " +
            at("r3.csv")) == 0,
        "conditioned geometry validate exits 0");

  // exit code contract
  check(run(cli + " simulate --k 3 --r0 0.60 --m 2,2") == 2,
        "invalid r0 exits 2");
  check(run(cli + " exact --k 3") == 2, "missing --m exits 2");
  check(run(cli + " simulate --k 3 --r0 0.35 --m 2,2 --lambda 5") == 2,
        "both occupancy modes exits 2");
  check(run(cli + " exact --k 3 --m 0,2") == 2, "zero occupancy exits 2");
  check(run(cli + " exact --k 3 --m 2,2,2") == 2, "wrong --m arity exits 2");
  check(run(cli + " oracle --k 4 --m 6,6,6 --budget 100") == 3,
        "budget overrun exits 3");
  check(run(cli + " exact --k 4 --m 40,40,40") == 3,
        "infeasible exact exits 3");
  check(run(cli + " validate --k 3 --r0 0.35 --m 3,3 --trials 3000 --seed 1"
                  " --self-test --tv-max 0.000001") == 4,
        "failed validation exits 4");
  check(run(cli + " bogus") == 2, "unknown subcommand exits 2");
  check(run(cli + " --help") == 0, "--help exits 0");

  if (failures == 0) {
    std::cout << "cli: all checks passed\n";
    return 0;
  }
  std::cout << "cli: " << failures << " check(s) failed\n";
  return 1;
}
