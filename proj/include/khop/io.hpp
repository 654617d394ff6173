#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "khop/distribution.hpp"
#include "khop/polynomial.hpp"
#include "khop/rgg.hpp"
#include "khop/stats.hpp"

namespace khop::harness {

enum class FileFormat { csv, json };

FileFormat parse_format(const std::string& name);

// Exact distribution output (kinds: exact, pgf, oracle). Exactness lives in
// the numerator/denominator columns; the decimal column is convenience.
struct DistributionFile {
  std::string kind;
  int k = 0;
  std::vector<int> m;
  algebra::BigInt multinomial;

  struct Row {
    std::int64_t n = 0;
    algebra::BigInt numerator;
    algebra::BigInt denominator;
    double decimal = 0;

    bool operator==(const Row&) const = default;
  };
  std::vector<Row> rows;

  bool operator==(const DistributionFile&) const = default;
};

DistributionFile make_distribution_file(std::string kind,
                                        const engine::HopConfig& cfg,
                                        const engine::ExactDistribution& d);

// Coefficient list of the normalized p.g.f.: one row per power 0..degree,
// zero coefficients included.
DistributionFile make_pgf_file(const engine::HopConfig& cfg,
                               const algebra::QRationalPolynomial& pgf);

std::string render(const DistributionFile& file, FileFormat format);
DistributionFile parse_distribution_file(const std::string& text,
                                         FileFormat format);

struct SimulationFile {
  int k = 0;
  double r0 = 0;
  std::optional<std::vector<int>> m;
  double lambda = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  struct Row {
    algebra::BigInt n;
    std::uint64_t count = 0;
    double frequency = 0;

    bool operator==(const Row&) const = default;
  };
  std::vector<Row> rows;

  bool operator==(const SimulationFile&) const = default;
};

SimulationFile make_simulation_file(const sim::GeometryConfig& cfg,
                                    const sim::Histogram& hist);

std::string render(const SimulationFile& file, FileFormat format);
SimulationFile parse_simulation_file(const std::string& text,
                                     FileFormat format);

struct ReportFile {
  int k = 0;
  double r0 = 0;
  std::optional<std::vector<int>> m;
  double lambda = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  bool self_test = false;
  double tv_max = 0;
  double p_min = 0;
  bool passed = false;
  ComparisonReport report;
};

std::string render(const ReportFile& file, FileFormat format);
ReportFile parse_report_file(const std::string& text, FileFormat format);

// Two-series plot data: rows (n, exact, empirical).
std::string render_plot(const ComparisonReport& report, FileFormat format);
std::vector<ComparisonReport::Row> parse_plot(const std::string& text,
                                              FileFormat format);

// Write-temp-then-rename so readers never observe a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& payload);

std::string format_double(double v);

}  // namespace khop::harness
