#include "fbmtopo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "fbmtopo/errors.hpp"
#include "fbmtopo/random.hpp"
#include "fbmtopo/rips.hpp"

namespace fbmtopo {

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
  if (hurst_list.empty() || dims.empty() || taus.empty() || qs.empty())
    throw ConfigError("every sweep axis needs at least one value");
  for (double h : hurst_list)
    if (!(h > 0.0 && h < 1.0)) throw ConfigError("hurst values must lie in (0, 1)");
  for (std::size_t d : dims)
    if (d < 1) throw ConfigError("dims must be >= 1");
  for (double q : qs)
    if (!(q >= 0.0 && q < 1.0)) throw ConfigError("q values must lie in [0, 1)");
  if (n_points < 2) throw ConfigError("n_points must be >= 2");
  if (realizations < 1) throw ConfigError("realizations must be >= 1");
  if (!(epsilon_max_factor > 0.0)) throw ConfigError("epsilon_max_factor must be positive");
  if (grid_resolution < 1) throw ConfigError("grid_resolution must be >= 1");
}

ExperimentConfig default_config(Scale scale) {
  ExperimentConfig c;
  if (scale == Scale::desk) {
    c.n_points = 256;
    c.realizations = 100;
  }
  return c;
}

Scale parse_scale(std::string_view name) {
  if (name == "desk") return Scale::desk;
  if (name == "paper") return Scale::paper;
  throw ConfigError("unknown scale '" + std::string(name) + "' (expected desk or paper)");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> items;
  while (true) {
    const auto comma = s.find(',');
    items.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return items;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty())
    throw ConfigError("invalid value '" + std::string(text) + "' for key '" + std::string(key) + "'");
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  for (auto item : split_list(text)) out.push_back(parse_number<T>(key, item));
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  ExperimentConfig c = std::move(base);
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find_first_of("=:");
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.emplace(key).second) throw ConfigError("duplicate key '" + std::string(key) + "'");

    if (key == "hurst_list") c.hurst_list = parse_list<double>(key, value);
    else if (key == "dims") c.dims = parse_list<std::size_t>(key, value);
    else if (key == "taus") c.taus = parse_list<std::size_t>(key, value);
    else if (key == "qs") c.qs = parse_list<double>(key, value);
    else if (key == "n_points") c.n_points = parse_number<std::size_t>(key, value);
    else if (key == "realizations") c.realizations = parse_number<std::size_t>(key, value);
    else if (key == "epsilon_max_factor") c.epsilon_max_factor = parse_number<double>(key, value);
    else if (key == "master_seed") c.master_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "output_dir") c.output_dir = std::string(value);
    else if (key == "grid_resolution") c.grid_resolution = parse_number<std::size_t>(key, value);
    else if (key == "method") {
      try {
        c.method = parse_fbm_method(value);
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
    } else {
      throw ConfigError("unknown key '" + std::string(key) + "'");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::move(base));
}

// ---------------------------------------------------------------------------
// Pipeline

std::uint64_t realization_seed(std::uint64_t master_seed, const Cell& cell, std::size_t realization) {
  return hash_seed({master_seed, cell.hurst_index, cell.dim, cell.delay, cell.q_index, realization});
}

PipelineResult run_pipeline(const TimeSeries& series, std::size_t dim, std::size_t delay,
                            double epsilon_max_factor) {
  PipelineResult r;
  r.nominal_points = embedded_capacity(series.size(), dim, delay);
  r.usable_missing = usable_missing_count(series, dim, delay);
  r.cloud = delay_embed(rescale_unit(series), dim, delay);
  r.merged_duplicates = merge_duplicate_points(r.cloud);
  r.epsilon_max = epsilon_max_factor * std::sqrt(static_cast<double>(dim));

  const SparseDistances sd = distance_matrix(r.cloud, r.epsilon_max);
  r.h0 = compute_h0(sd);
  r.h1 = compute_h1(sd);
  r.summary = summarize(r.h0, r.h1, r.nominal_points);
  r.summary.hurst = series.hurst;
  r.summary.dim = dim;
  r.summary.delay = delay;
  r.summary.seed = series.seed;
  return r;
}

std::vector<double> eta_grid(const ExperimentConfig& config, std::size_t dim) {
  const double top = static_cast<double>(config.n_points) * config.epsilon_max_factor *
                     std::sqrt(static_cast<double>(dim));
  std::vector<double> grid(config.grid_resolution, 0.0);
  if (grid.size() == 1) return grid;
  const double steps = static_cast<double>(grid.size() - 1);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = top * static_cast<double>(i) / steps;
  return grid;
}

namespace {

std::string failure_category(const std::exception& e) {
  if (dynamic_cast<const DomainError*>(&e)) return "domain_error";
  if (dynamic_cast<const DegenerateInputError*>(&e)) return "degenerate_input";
  if (dynamic_cast<const GeneratorError*>(&e)) return "generator_error";
  if (dynamic_cast<const SizeError*>(&e)) return "size_error";
  if (dynamic_cast<const ContractViolation*>(&e)) return "contract_violation";
  if (dynamic_cast<const std::bad_alloc*>(&e)) return "out_of_memory";
  return "runtime_error";
}

}  // namespace

ResultRow run_realization(const ExperimentConfig& config, const Cell& cell, std::size_t realization) {
  const auto start = std::chrono::steady_clock::now();
  ResultRow row;
  row.cell = cell;
  row.hurst = config.hurst_list.at(cell.hurst_index);
  row.q = config.qs.at(cell.q_index);
  row.realization = realization;
  row.seed = realization_seed(config.master_seed, cell, realization);
  try {
    const std::size_t length = config.n_points + (cell.dim - 1) * cell.delay;
    auto series = generate_fbm(row.hurst, length, row.seed, config.method);
    series = inject_irregularity(series, row.q, splitmix64(row.seed ^ 0x6d61736bULL));
    row.t_missing = series.missing_count();

    const auto result = run_pipeline(series, cell.dim, cell.delay, config.epsilon_max_factor);
    row.summary = result.summary;
    row.summary.q = row.q;
    row.cloud_size = result.cloud.size();
    row.n_missing = result.nominal_points - row.cloud_size;

    const auto grid = eta_grid(config, cell.dim);
    row.beta0 = betti_curve(result.h0, grid, result.nominal_points).values;
    row.beta1 = betti_curve(result.h1, grid, result.nominal_points).values;
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.failure = failure_category(e);
  }
  row.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::size_t ResultTable::failed_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const ResultRow& r) { return !r.ok; }));
}

ResultTable run_experiment(const ExperimentConfig& config, std::size_t workers) {
  config.validate();
  struct Job {
    Cell cell;
    std::size_t realization;
  };
  std::vector<Job> jobs;
  jobs.reserve(config.cell_count() * config.realizations);
  for (std::size_t h = 0; h < config.hurst_list.size(); ++h)
    for (std::size_t d : config.dims)
      for (std::size_t tau : config.taus)
        for (std::size_t qi = 0; qi < config.qs.size(); ++qi)
          for (std::size_t r = 0; r < config.realizations; ++r)
            jobs.push_back({{h, d, tau, qi}, r});

  ResultTable table;
  table.config = config;
  table.rows.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++)
      table.rows[i] = run_realization(config, jobs[i].cell, jobs[i].realization);
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(jobs.size(), 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return table;
}

// ---------------------------------------------------------------------------
// Aggregation

std::optional<double> measure_value(const TopologicalSummary& s, std::size_t index) {
  switch (index) {
    case 0: return s.eta0_disappear;
    case 1: return s.b0;
    case 2: return s.e0;
    case 3: return s.eta1_appear;
    case 4: return s.eta1_disappear;
    case 5: return s.eta1_maximize;
    case 6: return s.b1;
    case 7: return s.e1;
    case 8: return static_cast<double>(s.n1);
    default: return std::nullopt;
  }
}

MeasureStats describe(const std::vector<double>& values) {
  MeasureStats s;
  s.n = values.size();
  if (s.n == 0) return s;
  const double n = static_cast<double>(s.n);
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  s.mean = mean;
  if (s.n >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    s.sd = std::sqrt(ss / (n - 1.0));
    s.se = *s.sd / std::sqrt(n);
  }
  return s;
}

const AggregateRow* AggregateTable::find(double hurst, std::size_t dim, std::size_t delay,
                                         double q) const {
  for (const auto& row : rows)
    if (row.hurst == hurst && row.cell.dim == dim && row.cell.delay == delay && row.q == q)
      return &row;
  return nullptr;
}

AggregateTable aggregate(const ResultTable& table) {
  // Canonical order first so floating-point sums do not depend on input order.
  std::vector<const ResultRow*> sorted;
  sorted.reserve(table.rows.size());
  for (const auto& r : table.rows) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const ResultRow* a, const ResultRow* b) {
    if (a->cell != b->cell) return a->cell < b->cell;
    return a->realization < b->realization;
  });

  AggregateTable out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j]->cell == sorted[i]->cell) ++j;

    AggregateRow agg;
    agg.cell = sorted[i]->cell;
    agg.hurst = sorted[i]->hurst;
    agg.q = sorted[i]->q;
    std::vector<std::vector<double>> values(kMeasureCount);
    double cloud_sum = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      const ResultRow& row = *sorted[k];
      if (!row.ok) {
        ++agg.failed;
        continue;
      }
      ++agg.count;
      cloud_sum += static_cast<double>(row.cloud_size);
      for (std::size_t m = 0; m < kMeasureCount; ++m)
        if (auto v = measure_value(row.summary, m)) values[m].push_back(*v);
      if (agg.mean_beta0.empty()) {
        agg.mean_beta0.assign(row.beta0.size(), 0.0);
        agg.mean_beta1.assign(row.beta1.size(), 0.0);
      }
      for (std::size_t g = 0; g < row.beta0.size(); ++g) {
        agg.mean_beta0[g] += row.beta0[g];
        agg.mean_beta1[g] += row.beta1[g];
      }
    }
    for (const auto& v : values) agg.measures.push_back(describe(v));
    if (agg.count > 0) {
      const double n = static_cast<double>(agg.count);
      agg.mean_cloud_size = cloud_sum / n;
      for (auto& v : agg.mean_beta0) v /= n;
      for (auto& v : agg.mean_beta1) v /= n;
    }
    out.rows.push_back(std::move(agg));
    i = j;
  }
  return out;
}

}  // namespace fbmtopo
