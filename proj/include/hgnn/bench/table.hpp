#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hgnn/bench/experiment.hpp"

namespace hgnn::bench {

inline constexpr std::string_view kCsvHeader =
    "dataset,method,noise_level,seed,accuracy,wall_time_s,pca";

enum class TableFormat { kCsv, kText };

// Median accuracy per (method, noise level) over seeds; an even count takes
// the mean of the two middle values.
struct MedianGrid {
  std::string dataset;
  std::vector<Method> methods;
  std::vector<double> levels;
  std::map<std::pair<Method, double>, double> median;
  std::map<std::pair<Method, double>, std::size_t> count;

  double at(Method m, double level) const;
};

std::vector<MedianGrid> median_grids(const std::vector<ResultRow>& rows);

// kCsv: one line per row under kCsvHeader, values in shortest round-trip
// form (accuracy as a fraction). kText: per dataset, methods down and noise
// levels across, medians in percent with two decimals.
std::string emit_table(const std::vector<ResultRow>& rows, TableFormat format);

// Inverse of the kCsv form. Throws FormatError with a line number.
std::vector<ResultRow> parse_results_csv(std::string_view text);

double median(std::vector<double> values);

}  // namespace hgnn::bench
