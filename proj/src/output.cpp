#include "fbmtopo/output.hpp"

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fbmtopo/errors.hpp"
#include "json.hpp"

#ifndef FBMTOPO_VERSION
#define FBMTOPO_VERSION "0.0.0"
#endif

namespace fbmtopo {

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

std::string format_number(const std::optional<double>& value) {
  return value ? format_number(*value) : std::string{};
}

void write_realizations_csv(std::ostream& out, const ResultTable& table) {
  out << "H,D,tau,q,realization,seed,status,failure,N_q,T_missing,N_missing";
  for (auto name : kMeasureNames) out << ',' << name;
  out << '\n';
  for (const auto& r : table.rows) {
    out << format_number(r.hurst) << ',' << r.cell.dim << ',' << r.cell.delay << ','
        << format_number(r.q) << ',' << r.realization << ',' << r.seed << ','
        << (r.ok ? "ok" : "failed") << ',' << r.failure << ',';
    if (r.ok) {
      out << r.cloud_size << ',' << r.t_missing << ',' << r.n_missing;
      for (std::size_t m = 0; m < kMeasureCount; ++m)
        out << ',' << format_number(measure_value(r.summary, m));
    } else {
      out << ",,";
      for (std::size_t m = 0; m < kMeasureCount; ++m) out << ',';
    }
    out << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const AggregateTable& agg) {
  out << "H,D,tau,q,count";
  for (auto name : kMeasureNames) out << ',' << name << "_mean," << name << "_se";
  out << '\n';
  for (const auto& row : agg.rows) {
    out << format_number(row.hurst) << ',' << row.cell.dim << ',' << row.cell.delay << ','
        << format_number(row.q) << ',' << row.count;
    for (std::size_t m = 0; m < kMeasureCount; ++m) {
      const auto& s = row.measures[m];
      out << ',' << format_number(s.mean) << ',' << format_number(s.se);
    }
    out << '\n';
  }
}

void write_aggregate_detail_csv(std::ostream& out, const AggregateTable& agg) {
  out << "H,D,tau,q,count,failed,N_q_mean";
  for (auto name : kMeasureNames) out << ',' << name << "_n," << name << "_sd";
  out << '\n';
  for (const auto& row : agg.rows) {
    out << format_number(row.hurst) << ',' << row.cell.dim << ',' << row.cell.delay << ','
        << format_number(row.q) << ',' << row.count << ',' << row.failed << ','
        << (row.count ? format_number(row.mean_cloud_size) : std::string{});
    for (std::size_t m = 0; m < kMeasureCount; ++m) {
      const auto& s = row.measures[m];
      out << ',' << s.n << ',' << format_number(s.sd);
    }
    out << '\n';
  }
}

void write_betti_curves_csv(std::ostream& out, const ResultTable& table, const AggregateTable& agg) {
  out << "H,D,tau,q,eta,beta0,beta1\n";
  for (const auto& row : agg.rows) {
    const auto grid = eta_grid(table.config, row.cell.dim);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      out << format_number(row.hurst) << ',' << row.cell.dim << ',' << row.cell.delay << ','
          << format_number(row.q) << ',' << format_number(grid[g]) << ',';
      if (!row.empty()) out << format_number(row.mean_beta0[g]) << ',' << format_number(row.mean_beta1[g]);
      else out << ',';
      out << '\n';
    }
  }
}

void write_manifest_json(std::ostream& out, const ResultTable& table,
                         const std::vector<std::string>& files) {
  const auto& c = table.config;
  nlohmann::ordered_json j;
  j["tool"] = "fbmtopo";
  j["version"] = FBMTOPO_VERSION;
  j["config"] = {
      {"hurst_list", c.hurst_list},
      {"dims", c.dims},
      {"taus", c.taus},
      {"qs", c.qs},
      {"n_points", c.n_points},
      {"realizations", c.realizations},
      {"epsilon_max_factor", c.epsilon_max_factor},
      {"master_seed", c.master_seed},
      {"output_dir", c.output_dir},
      {"grid_resolution", c.grid_resolution},
      {"method", std::string(to_string(c.method))},
  };
  j["seeding"] = {
      {"master_seed", c.master_seed},
      {"child_seed", "hash_seed(master_seed, hurst_index, D, tau, q_index, realization)"},
      {"irregularity_seed", "splitmix64(child_seed ^ 0x6d61736b)"},
      {"prng", "mt19937_64, 53-bit uniforms, Marsaglia polar gaussians"},
  };
  j["rows"] = {
      {"total", table.rows.size()},
      {"successful", table.rows.size() - table.failed_count()},
      {"failed", table.failed_count()},
  };
  j["files"] = files;
  out << j.dump(2) << '\n';
}

void write_series_csv(std::ostream& out, const TimeSeries& series) {
  out << "t,value,present\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    out << i << ',' << format_number(series.values[i]) << ',' << (series.mask[i] ? 1 : 0) << '\n';
}

TimeSeries read_series_csv(std::istream& in) {
  TimeSeries series;
  std::string line;
  if (!std::getline(in, line)) throw IoError("series CSV is empty");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<std::string_view, 3> fields;
    std::string_view rest = line;
    for (std::size_t k = 0; k < 3; ++k) {
      const auto comma = rest.find(',');
      if ((comma == std::string_view::npos) != (k == 2))
        throw IoError("series CSV line " + std::to_string(line_no) + ": expected 3 fields");
      fields[k] = rest.substr(0, comma);
      if (comma != std::string_view::npos) rest.remove_prefix(comma + 1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), value);
    if (ec != std::errc() || ptr != fields[1].data() + fields[1].size())
      throw IoError("series CSV line " + std::to_string(line_no) + ": bad value");
    if (fields[2] != "0" && fields[2] != "1")
      throw IoError("series CSV line " + std::to_string(line_no) + ": present must be 0 or 1");
    series.values.push_back(value);
    series.mask.push_back(fields[2] == "1");
  }
  return series;
}

namespace {

template <typename Writer>
std::string write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
  return path.string();
}

}  // namespace

std::vector<std::string> emit_outputs(const ResultTable& table, const AggregateTable& agg,
                                      const std::string& dir, const OutputOptions& options) {
  const std::filesystem::path root(dir);
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());

  std::vector<std::string> names{"realizations.csv", "aggregate.csv", "aggregate_detail.csv",
                                 "betti_curves.csv"};
  std::vector<std::string> written;
  written.push_back(write_file(root / names[0], [&](std::ostream& o) { write_realizations_csv(o, table); }));
  written.push_back(write_file(root / names[1], [&](std::ostream& o) { write_aggregate_csv(o, agg); }));
  written.push_back(write_file(root / names[2], [&](std::ostream& o) { write_aggregate_detail_csv(o, agg); }));
  written.push_back(write_file(root / names[3], [&](std::ostream& o) { write_betti_curves_csv(o, table, agg); }));
  if (options.write_timings) {
    written.push_back(write_file(root / "timings.csv", [&](std::ostream& o) {
      o << "H,D,tau,q,realization,wall_seconds\n";
      for (const auto& r : table.rows)
        o << format_number(r.hurst) << ',' << r.cell.dim << ',' << r.cell.delay << ','
          << format_number(r.q) << ',' << r.realization << ',' << format_number(r.wall_seconds) << '\n';
    }));
    names.push_back("timings.csv");
  }
  names.push_back("manifest.json");
  written.push_back(write_file(root / "manifest.json",
                               [&](std::ostream& o) { write_manifest_json(o, table, names); }));
  return written;
}

}  // namespace fbmtopo
