// Command-line front end: exact distributions, generating-function
// coefficients, brute-force oracle, Monte Carlo simulation, and
// exact-vs-simulation validation for k-hop path counts in the 1d hard
// random geometric graph.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "khop/distribution.hpp"
#include "khop/errors.hpp"
#include "khop/io.hpp"
#include "khop/lattice.hpp"
#include "khop/rgg.hpp"
#include "khop/stats.hpp"

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitBudget = 3;
constexpr int kExitValidationFailed = 4;

struct Options {
  int k = 3;
  std::vector<int> m;
  bool m_given = false;
  double lambda = 0;
  bool lambda_given = false;
  double r0 = 0;
  std::uint64_t trials = 50000;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out_path;
  double epsilon = 1e-9;
  std::uint64_t budget = khop::lattice::kDefaultEnumerationBudget;
  int threads = 0;
  bool self_test = false;
  double tv_max = 0.05;
  double p_min = 0.001;

  int effective_threads() const {
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }
};

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
  } else {
    khop::harness::write_atomic(out_path, payload);
  }
}

std::string plot_path_for(const std::string& out_path) {
  auto dot = out_path.rfind('.');
  auto slash = out_path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return out_path + "_plot";
  }
  return out_path.substr(0, dot) + "_plot" + out_path.substr(dot);
}

std::vector<int> occupancies_or_throw(const Options& opt) {
  if (opt.lambda_given) {
    throw std::invalid_argument("this subcommand needs --m, not --lambda");
  }
  if (!opt.m_given && opt.k != 1) {
    throw std::invalid_argument("missing --m (k-1 comma-separated occupancies)");
  }
  return opt.m;
}

khop::sim::GeometryConfig geometry_config(const Options& opt) {
  khop::sim::GeometryConfig cfg;
  cfg.k = opt.k;
  cfg.r0 = opt.r0;
  cfg.trials = opt.trials;
  cfg.seed = opt.seed;
  if (opt.m_given && opt.lambda_given) {
    throw std::invalid_argument("--m and --lambda are mutually exclusive");
  }
  if (opt.m_given || opt.k == 1) {
    cfg.m = opt.m;
  } else if (opt.lambda_given) {
    cfg.lambda = opt.lambda;
  } else {
    throw std::invalid_argument("simulation needs --m or --lambda");
  }
  cfg.validate();
  return cfg;
}

int run_exact(const Options& opt) {
  khop::engine::HopConfig cfg(opt.k, occupancies_or_throw(opt));
  khop::engine::EngineOptions eopts{opt.budget, opt.effective_threads()};
  khop::engine::ExactDistribution dist =
      khop::engine::path_count_pmf(cfg, eopts);
  auto file = khop::harness::make_distribution_file("exact", cfg, dist);
  emit(khop::harness::render(file, khop::harness::parse_format(opt.format)),
       opt.out_path);
  return 0;
}

int run_pgf(const Options& opt) {
  khop::engine::HopConfig cfg(opt.k, occupancies_or_throw(opt));
  khop::engine::EngineOptions eopts{opt.budget, opt.effective_threads()};
  khop::algebra::QRationalPolynomial pgf =
      khop::engine::path_count_pgf(cfg, eopts);
  auto file = khop::harness::make_pgf_file(cfg, pgf);
  emit(khop::harness::render(file, khop::harness::parse_format(opt.format)),
       opt.out_path);
  return 0;
}

int run_oracle(const Options& opt) {
  khop::engine::HopConfig cfg(opt.k, occupancies_or_throw(opt));
  khop::engine::ExactDistribution dist = [&] {
    if (opt.k <= 2) {
      return khop::engine::ExactDistribution::point_mass(
          opt.k == 1 ? 1 : cfg.m[0]);
    }
    auto hist = khop::lattice::brute_force_volume_distribution(
        cfg.m_vector(), opt.budget, opt.effective_threads());
    khop::algebra::BigInt total = cfg.path_multinomial();
    std::map<std::int64_t, khop::algebra::Rational> probs;
    for (const auto& [n, c] : hist) {
      probs[n] = khop::algebra::make_rational(
          khop::algebra::BigInt(static_cast<unsigned long>(c)), total);
    }
    return khop::engine::ExactDistribution(std::move(probs));
  }();
  auto file = khop::harness::make_distribution_file("oracle", cfg, dist);
  emit(khop::harness::render(file, khop::harness::parse_format(opt.format)),
       opt.out_path);
  return 0;
}

int run_simulate(const Options& opt) {
  khop::sim::GeometryConfig cfg = geometry_config(opt);
  khop::sim::Histogram hist =
      khop::sim::run_trials(cfg, opt.effective_threads());
  auto file = khop::harness::make_simulation_file(cfg, hist);
  emit(khop::harness::render(file, khop::harness::parse_format(opt.format)),
       opt.out_path);
  return 0;
}

khop::harness::ReferencePmf reference_for(const Options& opt) {
  using namespace khop;
  if (opt.m_given || opt.k == 1) {
    engine::HopConfig cfg(opt.k, opt.m);
    engine::require_valid_range(opt.k, opt.r0);
    engine::EngineOptions eopts{opt.budget, opt.effective_threads()};
    return harness::to_reference(engine::path_count_pmf(cfg, eopts));
  }
  if (opt.k == 2) {
    return harness::to_reference(
        engine::two_hop_distribution(opt.lambda, opt.r0));
  }
  engine::EngineOptions eopts{opt.budget, opt.effective_threads()};
  return harness::to_reference(
      engine::poisson_mixture(opt.k, opt.lambda, opt.r0, opt.epsilon, eopts));
}

int run_validate(const Options& opt) {
  using namespace khop;
  sim::GeometryConfig cfg = geometry_config(opt);
  harness::ReferencePmf ref = reference_for(opt);
  sim::Histogram hist =
      opt.self_test
          ? harness::sample_from_reference(ref, opt.trials, opt.seed)
          : sim::run_trials(cfg, opt.effective_threads());

  harness::ReportFile file;
  file.k = opt.k;
  file.r0 = opt.r0;
  file.m = cfg.m;
  file.lambda = cfg.lambda;
  file.trials = hist.trials;
  file.seed = opt.seed;
  file.self_test = opt.self_test;
  file.tv_max = opt.tv_max;
  file.p_min = opt.p_min;
  file.report = harness::compare_distributions(ref, hist);
  file.passed = file.report.passed(opt.tv_max, opt.p_min);

  khop::harness::FileFormat format = harness::parse_format(opt.format);
  emit(harness::render(file, format), opt.out_path);
  if (!opt.out_path.empty()) {
    harness::write_atomic(plot_path_for(opt.out_path),
                          harness::render_plot(file.report, format));
    std::cout << (file.passed ? "PASS" : "FAIL") << " tv="
              << harness::format_double(file.report.tv)
              << " p=" << harness::format_double(file.report.chi.p_value)
              << "\n";
  }
  return file.passed ? 0 : kExitValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact and simulated distributions of the k-hop path count between "
      "the endpoints of a 1d hard random geometric graph"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool wants_geometry) {
    sub->add_option("--k", opt.k, "hop count")->required();
    sub->add_option("--m", opt.m,
                    "comma-separated lens occupancies m_1,...,m_{k-1}")
        ->delimiter(',')
        ->each([&](const std::string&) { opt.m_given = true; });
    sub->add_option("--format", opt.format, "csv or json");
    sub->add_option("--out", opt.out_path, "output path (default: stdout)");
    sub->add_option("--budget", opt.budget, "enumeration feasibility budget");
    sub->add_option("--threads", opt.threads, "worker threads (0 = auto)");
    if (wants_geometry) {
      sub->add_option("--r0", opt.r0, "connection range")->required();
      sub->add_option("--lambda", opt.lambda, "point process density")
          ->each([&](const std::string&) { opt.lambda_given = true; });
      sub->add_option("--trials", opt.trials, "Monte Carlo trials");
      sub->add_option("--seed", opt.seed, "RNG seed");
      sub->add_option("--epsilon", opt.epsilon,
                      "Poisson mixture truncation mass");
    }
  };

  CLI::App* cmd_exact = app.add_subcommand(
      "exact", "exact p.m.f. conditioned on lens occupancies");
  add_common(cmd_exact, false);
  CLI::App* cmd_pgf = app.add_subcommand(
      "pgf", "normalized p.g.f. coefficients (generating-function route)");
  add_common(cmd_pgf, false);
  CLI::App* cmd_oracle = app.add_subcommand(
      "oracle", "distribution by brute-force path enumeration");
  add_common(cmd_oracle, false);
  CLI::App* cmd_simulate =
      app.add_subcommand("simulate", "Monte Carlo path-count histogram");
  add_common(cmd_simulate, true);
  CLI::App* cmd_validate = app.add_subcommand(
      "validate", "exact-vs-simulation comparison report and plot data");
  add_common(cmd_validate, true);
  cmd_validate->add_flag("--self-test", opt.self_test,
                         "sample from the exact distribution itself");
  cmd_validate->add_option("--tv-max", opt.tv_max,
                           "total variation acceptance threshold");
  cmd_validate->add_option("--p-min", opt.p_min,
                           "chi-square p-value acceptance threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidConfig;
  }

  try {
    if (app.got_subcommand(cmd_exact)) return run_exact(opt);
    if (app.got_subcommand(cmd_pgf)) return run_pgf(opt);
    if (app.got_subcommand(cmd_oracle)) return run_oracle(opt);
    if (app.got_subcommand(cmd_simulate)) return run_simulate(opt);
    if (app.got_subcommand(cmd_validate)) return run_validate(opt);
  } catch (const khop::BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
