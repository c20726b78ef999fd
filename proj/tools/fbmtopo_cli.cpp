// fbmtopo command line: generate a series, analyze one, or run a parameter sweep.
//
// Exit codes: 0 success, 1 configuration / usage error, 2 runtime error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "fbmtopo/errors.hpp"
#include "fbmtopo/experiment.hpp"
#include "fbmtopo/output.hpp"
#include "fbmtopo/random.hpp"
#include "json.hpp"

namespace {

using namespace fbmtopo;
using nlohmann::ordered_json;

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

ordered_json diagram_json(const PersistenceDiagram& d) {
  ordered_json pairs = ordered_json::array();
  for (const auto& p : d.pairs) {
    if (p.essential)
      pairs.push_back({p.appear, nullptr});
    else
      pairs.push_back({p.appear, p.disappear});
  }
  return {{"dimension", d.dimension}, {"n_points", d.n_points},
          {"epsilon_max", d.epsilon_max}, {"pairs", std::move(pairs)}};
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

int run_generate(double hurst, std::size_t length, std::uint64_t seed, const std::string& method,
                 double q, const std::string& out_path) {
  auto series = generate_fbm(hurst, length, seed, parse_fbm_method(method));
  series = inject_irregularity(series, q, splitmix64(seed ^ 0x6d61736bULL));
  if (out_path.empty() || out_path == "-") {
    write_series_csv(std::cout, series);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + out_path + "' for writing");
    write_series_csv(out, series);
  }
  return 0;
}

int run_analyze(const std::string& in_path, std::size_t dim, std::size_t tau, double eps_factor,
                const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) throw IoError("cannot read '" + in_path + "'");
  const TimeSeries series = read_series_csv(in);
  const auto r = run_pipeline(series, dim, tau, eps_factor);
  const auto& s = r.summary;

  ordered_json j;
  j["input"] = in_path;
  j["dim"] = dim;
  j["tau"] = tau;
  j["epsilon_max"] = r.epsilon_max;
  j["T"] = series.size();
  j["T_missing"] = series.missing_count();
  j["N"] = r.nominal_points;
  j["N_q"] = r.cloud.size();
  j["merged_duplicates"] = r.merged_duplicates;
  j["summary"] = {
      {"eta0_disappear", s.eta0_disappear},  {"B0", s.b0},
      {"E0", s.e0},                          {"eta1_appear", optional_json(s.eta1_appear)},
      {"eta1_disappear", optional_json(s.eta1_disappear)},
      {"eta1_maximize", optional_json(s.eta1_maximize)},
      {"B1", s.b1},                          {"E1", optional_json(s.e1)},
      {"n1", s.n1},
  };
  j["diagrams"] = {diagram_json(r.h0), diagram_json(r.h1)};
  if (r.merged_duplicates > 0)
    std::cerr << "warning: merged " << r.merged_duplicates << " duplicate state vectors\n";

  if (out_path.empty() || out_path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + out_path + "' for writing");
    out << j.dump(2) << '\n';
  }
  return 0;
}

int run_experiment_command(const std::string& config_path, const std::string& out_dir,
                           std::size_t workers, const std::string& scale, bool timings) {
  ExperimentConfig config;
  try {
    config = default_config(parse_scale(scale));
    if (!config_path.empty()) config = load_config(config_path, config);
    if (!out_dir.empty()) config.output_dir = out_dir;
    config.validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());

  const auto table = run_experiment(config, workers);
  const auto agg = aggregate(table);
  const auto files = emit_outputs(table, agg, config.output_dir, {timings});
  std::cerr << table.rows.size() << " realizations (" << table.failed_count() << " failed) -> "
            << config.output_dir << '\n';
  for (const auto& f : files) std::cerr << "  " << f << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological measures of delay-embedded fractional Brownian motion"};
  app.require_subcommand(1);

  double hurst = 0.5;
  std::size_t length = 1024;
  std::uint64_t seed = 0;
  std::string method = "spectral_fgn";
  double q = 0.0;
  std::string out_path;
  auto* gen = app.add_subcommand("generate", "Write one fBm series as CSV (t,value,present)");
  gen->add_option("--hurst", hurst, "Hurst exponent in (0,1)")->required();
  gen->add_option("--length", length, "Number of samples T")->required();
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--method", method, "riemann_liouville | spectral_fgn")->capture_default_str();
  gen->add_option("--q", q, "Fraction of samples to mark missing")->capture_default_str();
  gen->add_option("-o,--out", out_path, "Output file (default stdout)");

  std::string in_path;
  std::size_t dim = 2;
  std::size_t tau = 1;
  double eps_factor = 0.2;
  std::string analyze_out;
  auto* ana = app.add_subcommand("analyze", "Persistence diagrams and summary of one series, as JSON");
  ana->add_option("input", in_path, "Series CSV written by 'generate'")->required();
  ana->add_option("--dim", dim, "Embedding dimension D")->capture_default_str();
  ana->add_option("--tau", tau, "Time delay")->capture_default_str();
  ana->add_option("--eps-factor", eps_factor, "epsilon_max = factor * sqrt(D)")->capture_default_str();
  ana->add_option("-o,--out", analyze_out, "Output file (default stdout)");

  std::string config_path;
  std::string out_dir;
  std::size_t workers = 1;
  std::string scale = "desk";
  bool timings = false;
  auto* exp = app.add_subcommand("experiment", "Run a Monte Carlo sweep and write CSV/JSON outputs");
  exp->add_option("--config", config_path, "Config file (key = value lines)");
  exp->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  exp->add_option("--workers", workers, "Worker threads (0 = all cores)")->capture_default_str();
  exp->add_option("--scale", scale, "Default sizes: desk (N=256, R=100) or paper (N=1024, R=1000)")
      ->check(CLI::IsMember({"desk", "paper"}))
      ->capture_default_str();
  exp->add_flag("--timings", timings, "Also write timings.csv (not deterministic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigError;
  }

  try {
    if (*gen) return run_generate(hurst, length, seed, method, q, out_path);
    if (*ana) return run_analyze(in_path, dim, tau, eps_factor, analyze_out);
    if (*exp) return run_experiment_command(config_path, out_dir, workers, scale, timings);
  } catch (const fbmtopo::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
