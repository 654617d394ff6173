#include "khop/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace khop::harness {

using nlohmann::json;

FileFormat parse_format(const std::string& name) {
  if (name == "csv") return FileFormat::csv;
  if (name == "json") return FileFormat::json;
  throw std::invalid_argument("unknown format: " + name);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::vector<int> split_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

struct CsvDoc {
  std::map<std::string, std::string> meta;
  std::vector<std::vector<std::string>> rows;  // header skipped
};

CsvDoc parse_csv(const std::string& text) {
  CsvDoc doc;
  std::stringstream ss(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      std::size_t start = body.find_first_not_of(' ');
      if (start == std::string::npos) continue;
      body = body.substr(start);
      std::size_t eq = body.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("malformed metadata line: " + line);
      }
      doc.meta[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    if (!header_seen) {
      header_seen = true;  // column names carry no data
      continue;
    }
    doc.rows.push_back(split_fields(line));
  }
  return doc;
}

const std::string& require_meta(const CsvDoc& doc, const std::string& key) {
  auto it = doc.meta.find(key);
  if (it == doc.meta.end()) {
    throw std::invalid_argument("missing metadata key: " + key);
  }
  return it->second;
}

json meta_common_json(const std::string& kind) {
  json j;
  j["kind"] = kind;
  return j;
}

void require_kind(const std::string& got, const std::string& family) {
  bool ok = false;
  if (family == "distribution") {
    ok = got == "exact" || got == "pgf" || got == "oracle";
  } else {
    ok = got == family;
  }
  if (!ok) throw std::invalid_argument("unexpected file kind: " + got);
}

}  // namespace

DistributionFile make_distribution_file(std::string kind,
                                        const engine::HopConfig& cfg,
                                        const engine::ExactDistribution& d) {
  DistributionFile file;
  file.kind = std::move(kind);
  file.k = cfg.k;
  file.m = cfg.m;
  file.multinomial = cfg.path_multinomial();
  // dense table over the whole attainable range 0..prod(m), zero
  // probabilities included, mirroring a coefficient list
  algebra::BigInt top_big = cfg.max_path_count();
  if (!top_big.fits_slong_p()) {
    throw std::invalid_argument("distribution too wide to tabulate");
  }
  std::int64_t top = top_big.get_si();
  for (std::int64_t n = 0; n <= top; ++n) {
    algebra::Rational p = d.probability(n);
    DistributionFile::Row row;
    row.n = n;
    row.numerator = p.get_num();
    row.denominator = p.get_den();
    row.decimal = algebra::to_double(p);
    file.rows.push_back(std::move(row));
  }
  return file;
}

DistributionFile make_pgf_file(const engine::HopConfig& cfg,
                               const algebra::QRationalPolynomial& pgf) {
  DistributionFile file;
  file.kind = "pgf";
  file.k = cfg.k;
  file.m = cfg.m;
  file.multinomial = cfg.path_multinomial();
  const auto& coeffs = pgf.coefficients();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    DistributionFile::Row row;
    row.n = static_cast<std::int64_t>(i);
    row.numerator = coeffs[i].get_num();
    row.denominator = coeffs[i].get_den();
    row.decimal = algebra::to_double(coeffs[i]);
    file.rows.push_back(std::move(row));
  }
  return file;
}

std::string render(const DistributionFile& file, FileFormat format) {
  if (format == FileFormat::csv) {
    std::string out;
    out += "# kind=" + file.kind + "\n";
    out += "# k=" + std::to_string(file.k) + "\n";
    out += "# m=" + join_ints(file.m) + "\n";
    out += "# multinomial=" + file.multinomial.get_str() + "\n";
    out += "n,numerator,denominator,decimal\n";
    for (const auto& row : file.rows) {
      out += std::to_string(row.n) + "," + row.numerator.get_str() + "," +
             row.denominator.get_str() + "," + format_double(row.decimal) +
             "\n";
    }
    return out;
  }
  json j = meta_common_json(file.kind);
  j["k"] = file.k;
  j["m"] = file.m;
  j["multinomial"] = file.multinomial.get_str();
  j["rows"] = json::array();
  for (const auto& row : file.rows) {
    j["rows"].push_back({{"n", row.n},
                         {"numerator", row.numerator.get_str()},
                         {"denominator", row.denominator.get_str()},
                         {"decimal", row.decimal}});
  }
  return j.dump(2) + "\n";
}

DistributionFile parse_distribution_file(const std::string& text,
                                         FileFormat format) {
  DistributionFile file;
  if (format == FileFormat::csv) {
    CsvDoc doc = parse_csv(text);
    file.kind = require_meta(doc, "kind");
    require_kind(file.kind, "distribution");
    file.k = std::stoi(require_meta(doc, "k"));
    file.m = split_ints(require_meta(doc, "m"));
    file.multinomial = algebra::BigInt(require_meta(doc, "multinomial"));
    for (const auto& fields : doc.rows) {
      if (fields.size() != 4) {
        throw std::invalid_argument("distribution row needs 4 fields");
      }
      DistributionFile::Row row;
      row.n = std::stoll(fields[0]);
      row.numerator = algebra::BigInt(fields[1]);
      row.denominator = algebra::BigInt(fields[2]);
      row.decimal = std::stod(fields[3]);
      file.rows.push_back(std::move(row));
    }
    return file;
  }
  json j = json::parse(text);
  file.kind = j.at("kind").get<std::string>();
  require_kind(file.kind, "distribution");
  file.k = j.at("k").get<int>();
  file.m = j.at("m").get<std::vector<int>>();
  file.multinomial = algebra::BigInt(j.at("multinomial").get<std::string>());
  for (const auto& row : j.at("rows")) {
    DistributionFile::Row r;
    r.n = row.at("n").get<std::int64_t>();
    r.numerator = algebra::BigInt(row.at("numerator").get<std::string>());
    r.denominator = algebra::BigInt(row.at("denominator").get<std::string>());
    r.decimal = row.at("decimal").get<double>();
    file.rows.push_back(std::move(r));
  }
  return file;
}

SimulationFile make_simulation_file(const sim::GeometryConfig& cfg,
                                    const sim::Histogram& hist) {
  SimulationFile file;
  file.k = cfg.k;
  file.r0 = cfg.r0;
  file.m = cfg.m;
  file.lambda = cfg.lambda;
  file.trials = hist.trials;
  file.seed = cfg.seed;
  for (const auto& [n, c] : hist.counts) {
    SimulationFile::Row row;
    row.n = n;
    row.count = c;
    row.frequency =
        static_cast<double>(c) / static_cast<double>(hist.trials);
    file.rows.push_back(std::move(row));
  }
  return file;
}

std::string render(const SimulationFile& file, FileFormat format) {
  const std::string mode = file.m.has_value() ? "conditioned" : "poisson";
  if (format == FileFormat::csv) {
    std::string out;
    out += "# kind=simulate\n";
    out += "# k=" + std::to_string(file.k) + "\n";
    out += "# r0=" + format_double(file.r0) + "\n";
    out += "# mode=" + mode + "\n";
    if (file.m.has_value()) {
      out += "# m=" + join_ints(*file.m) + "\n";
    } else {
      out += "# lambda=" + format_double(file.lambda) + "\n";
    }
    out += "# trials=" + std::to_string(file.trials) + "\n";
    out += "# seed=" + std::to_string(file.seed) + "\n";
    out += "n,count,frequency\n";
    for (const auto& row : file.rows) {
      out += row.n.get_str() + "," + std::to_string(row.count) + "," +
             format_double(row.frequency) + "\n";
    }
    return out;
  }
  json j = meta_common_json("simulate");
  j["k"] = file.k;
  j["r0"] = file.r0;
  j["mode"] = mode;
  if (file.m.has_value()) {
    j["m"] = *file.m;
  } else {
    j["lambda"] = file.lambda;
  }
  j["trials"] = file.trials;
  j["seed"] = file.seed;
  j["rows"] = json::array();
  for (const auto& row : file.rows) {
    j["rows"].push_back({{"n", row.n.get_str()},
                         {"count", row.count},
                         {"frequency", row.frequency}});
  }
  return j.dump(2) + "\n";
}

SimulationFile parse_simulation_file(const std::string& text,
                                     FileFormat format) {
  SimulationFile file;
  if (format == FileFormat::csv) {
    CsvDoc doc = parse_csv(text);
    require_kind(require_meta(doc, "kind"), "simulate");
    file.k = std::stoi(require_meta(doc, "k"));
    file.r0 = std::stod(require_meta(doc, "r0"));
    if (require_meta(doc, "mode") == "conditioned") {
      file.m = split_ints(require_meta(doc, "m"));
    } else {
      file.lambda = std::stod(require_meta(doc, "lambda"));
    }
    file.trials = std::stoull(require_meta(doc, "trials"));
    file.seed = std::stoull(require_meta(doc, "seed"));
    for (const auto& fields : doc.rows) {
      if (fields.size() != 3) {
        throw std::invalid_argument("simulation row needs 3 fields");
      }
      SimulationFile::Row row;
      row.n = algebra::BigInt(fields[0]);
      row.count = std::stoull(fields[1]);
      row.frequency = std::stod(fields[2]);
      file.rows.push_back(std::move(row));
    }
    return file;
  }
  json j = json::parse(text);
  require_kind(j.at("kind").get<std::string>(), "simulate");
  file.k = j.at("k").get<int>();
  file.r0 = j.at("r0").get<double>();
  if (j.at("mode").get<std::string>() == "conditioned") {
    file.m = j.at("m").get<std::vector<int>>();
  } else {
    file.lambda = j.at("lambda").get<double>();
  }
  file.trials = j.at("trials").get<std::uint64_t>();
  file.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& row : j.at("rows")) {
    SimulationFile::Row r;
    r.n = algebra::BigInt(row.at("n").get<std::string>());
    r.count = row.at("count").get<std::uint64_t>();
    r.frequency = row.at("frequency").get<double>();
    file.rows.push_back(std::move(r));
  }
  return file;
}

std::string render(const ReportFile& file, FileFormat format) {
  const std::string mode = file.m.has_value() ? "conditioned" : "poisson";
  if (format == FileFormat::csv) {
    std::string out;
    out += "# kind=validate\n";
    out += "# k=" + std::to_string(file.k) + "\n";
    out += "# r0=" + format_double(file.r0) + "\n";
    out += "# mode=" + mode + "\n";
    if (file.m.has_value()) {
      out += "# m=" + join_ints(*file.m) + "\n";
    } else {
      out += "# lambda=" + format_double(file.lambda) + "\n";
    }
    out += "# trials=" + std::to_string(file.trials) + "\n";
    out += "# seed=" + std::to_string(file.seed) + "\n";
    out += "# self_test=" + std::to_string(file.self_test ? 1 : 0) + "\n";
    out += "# tv=" + format_double(file.report.tv) + "\n";
    out += "# chi_square=" + format_double(file.report.chi.statistic) + "\n";
    out += "# dof=" + std::to_string(file.report.chi.dof) + "\n";
    out += "# p_value=" + format_double(file.report.chi.p_value) + "\n";
    out += "# exact_mean=" + format_double(file.report.exact_mean) + "\n";
    out += "# empirical_mean=" + format_double(file.report.empirical_mean) + "\n";
    out += "# tv_max=" + format_double(file.tv_max) + "\n";
    out += "# p_min=" + format_double(file.p_min) + "\n";
    out += "# passed=" + std::to_string(file.passed ? 1 : 0) + "\n";
    out += "n,exact,empirical\n";
    for (const auto& row : file.report.rows) {
      out += std::to_string(row.n) + "," + format_double(row.exact) + "," +
             format_double(row.empirical) + "\n";
    }
    return out;
  }
  json j = meta_common_json("validate");
  j["k"] = file.k;
  j["r0"] = file.r0;
  j["mode"] = mode;
  if (file.m.has_value()) {
    j["m"] = *file.m;
  } else {
    j["lambda"] = file.lambda;
  }
  j["trials"] = file.trials;
  j["seed"] = file.seed;
  j["self_test"] = file.self_test;
  j["tv"] = file.report.tv;
  j["chi_square"] = file.report.chi.statistic;
  j["dof"] = file.report.chi.dof;
  j["p_value"] = file.report.chi.p_value;
  j["exact_mean"] = file.report.exact_mean;
  j["empirical_mean"] = file.report.empirical_mean;
  j["tv_max"] = file.tv_max;
  j["p_min"] = file.p_min;
  j["passed"] = file.passed;
  j["rows"] = json::array();
  for (const auto& row : file.report.rows) {
    j["rows"].push_back(
        {{"n", row.n}, {"exact", row.exact}, {"empirical", row.empirical}});
  }
  return j.dump(2) + "\n";
}

ReportFile parse_report_file(const std::string& text, FileFormat format) {
  ReportFile file;
  auto parse_rows_csv = [&](const CsvDoc& doc) {
    for (const auto& fields : doc.rows) {
      if (fields.size() != 3) {
        throw std::invalid_argument("report row needs 3 fields");
      }
      ComparisonReport::Row row;
      row.n = std::stoll(fields[0]);
      row.exact = std::stod(fields[1]);
      row.empirical = std::stod(fields[2]);
      file.report.rows.push_back(row);
    }
  };
  if (format == FileFormat::csv) {
    CsvDoc doc = parse_csv(text);
    require_kind(require_meta(doc, "kind"), "validate");
    file.k = std::stoi(require_meta(doc, "k"));
    file.r0 = std::stod(require_meta(doc, "r0"));
    if (require_meta(doc, "mode") == "conditioned") {
      file.m = split_ints(require_meta(doc, "m"));
    } else {
      file.lambda = std::stod(require_meta(doc, "lambda"));
    }
    file.trials = std::stoull(require_meta(doc, "trials"));
    file.seed = std::stoull(require_meta(doc, "seed"));
    file.self_test = require_meta(doc, "self_test") == "1";
    file.report.tv = std::stod(require_meta(doc, "tv"));
    file.report.chi.statistic = std::stod(require_meta(doc, "chi_square"));
    file.report.chi.dof = std::stoi(require_meta(doc, "dof"));
    file.report.chi.p_value = std::stod(require_meta(doc, "p_value"));
    file.report.exact_mean = std::stod(require_meta(doc, "exact_mean"));
    file.report.empirical_mean = std::stod(require_meta(doc, "empirical_mean"));
    file.report.trials = file.trials;
    file.tv_max = std::stod(require_meta(doc, "tv_max"));
    file.p_min = std::stod(require_meta(doc, "p_min"));
    file.passed = require_meta(doc, "passed") == "1";
    parse_rows_csv(doc);
    return file;
  }
  json j = json::parse(text);
  require_kind(j.at("kind").get<std::string>(), "validate");
  file.k = j.at("k").get<int>();
  file.r0 = j.at("r0").get<double>();
  if (j.at("mode").get<std::string>() == "conditioned") {
    file.m = j.at("m").get<std::vector<int>>();
  } else {
    file.lambda = j.at("lambda").get<double>();
  }
  file.trials = j.at("trials").get<std::uint64_t>();
  file.seed = j.at("seed").get<std::uint64_t>();
  file.self_test = j.at("self_test").get<bool>();
  file.report.tv = j.at("tv").get<double>();
  file.report.chi.statistic = j.at("chi_square").get<double>();
  file.report.chi.dof = j.at("dof").get<int>();
  file.report.chi.p_value = j.at("p_value").get<double>();
  file.report.exact_mean = j.at("exact_mean").get<double>();
  file.report.empirical_mean = j.at("empirical_mean").get<double>();
  file.report.trials = file.trials;
  file.tv_max = j.at("tv_max").get<double>();
  file.p_min = j.at("p_min").get<double>();
  file.passed = j.at("passed").get<bool>();
  for (const auto& row : j.at("rows")) {
    ComparisonReport::Row r;
    r.n = row.at("n").get<std::int64_t>();
    r.exact = row.at("exact").get<double>();
    r.empirical = row.at("empirical").get<double>();
    file.report.rows.push_back(r);
  }
  return file;
}

std::string render_plot(const ComparisonReport& report, FileFormat format) {
  if (format == FileFormat::csv) {
    std::string out = "n,exact,empirical\n";
    for (const auto& row : report.rows) {
      out += std::to_string(row.n) + "," + format_double(row.exact) + "," +
             format_double(row.empirical) + "\n";
    }
    return out;
  }
  json j = json::array();
  for (const auto& row : report.rows) {
    j.push_back(
        {{"n", row.n}, {"exact", row.exact}, {"empirical", row.empirical}});
  }
  return j.dump(2) + "\n";
}

std::vector<ComparisonReport::Row> parse_plot(const std::string& text,
                                              FileFormat format) {
  std::vector<ComparisonReport::Row> rows;
  if (format == FileFormat::csv) {
    CsvDoc doc = parse_csv(text);
    for (const auto& fields : doc.rows) {
      if (fields.size() != 3) {
        throw std::invalid_argument("plot row needs 3 fields");
      }
      rows.push_back({std::stoll(fields[0]), std::stod(fields[1]),
                      std::stod(fields[2])});
    }
    return rows;
  }
  for (const auto& row : json::parse(text)) {
    rows.push_back({row.at("n").get<std::int64_t>(),
                    row.at("exact").get<double>(),
                    row.at("empirical").get<double>()});
  }
  return rows;
}

void write_atomic(const std::filesystem::path& path,
                  const std::string& payload) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << payload;
    out.flush();
    if (!out) {
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace khop::harness
