#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fbmtopo/experiment.hpp"

namespace fbmtopo {

/// Shortest decimal form that round-trips, '.' separator, locale independent.
std::string format_number(double value);
/// Empty string for an absent value.
std::string format_number(const std::optional<double>& value);

struct OutputOptions {
  bool write_timings = false;  // timings.csv; its contents vary run to run
};

// Writers for the individual files. Each writes LF-terminated lines with a header.
void write_realizations_csv(std::ostream& out, const ResultTable& table);
void write_aggregate_csv(std::ostream& out, const AggregateTable& agg);
void write_aggregate_detail_csv(std::ostream& out, const AggregateTable& agg);
void write_betti_curves_csv(std::ostream& out, const ResultTable& table, const AggregateTable& agg);
void write_manifest_json(std::ostream& out, const ResultTable& table,
                         const std::vector<std::string>& files);
void write_series_csv(std::ostream& out, const TimeSeries& series);
/// Parses the format written by write_series_csv. Throws IoError on malformed input.
TimeSeries read_series_csv(std::istream& in);

/// Writes realizations.csv, aggregate.csv, aggregate_detail.csv,
/// betti_curves.csv and manifest.json into `dir` (created if needed). Returns
/// the paths written. Throws IoError if a file cannot be written.
std::vector<std::string> emit_outputs(const ResultTable& table, const AggregateTable& agg,
                                      const std::string& dir, const OutputOptions& options = {});

}  // namespace fbmtopo
