#include "hgnn/bench/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "hgnn/error.hpp"

namespace hgnn::bench {

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double MedianGrid::at(Method m, double level) const {
  const auto it = median.find({m, level});
  return it == median.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
}

std::vector<MedianGrid> median_grids(const std::vector<ResultRow>& rows) {
  std::vector<MedianGrid> grids;
  std::vector<std::map<std::pair<Method, double>, std::vector<double>>> samples;
  for (const ResultRow& r : rows) {
    auto it = std::find_if(grids.begin(), grids.end(),
                           [&](const MedianGrid& g) { return g.dataset == r.dataset; });
    if (it == grids.end()) {
      grids.push_back({});
      grids.back().dataset = r.dataset;
      samples.emplace_back();
      it = grids.end() - 1;
    }
    MedianGrid& g = *it;
    if (std::find(g.methods.begin(), g.methods.end(), r.method) == g.methods.end()) {
      g.methods.push_back(r.method);
    }
    if (std::find(g.levels.begin(), g.levels.end(), r.noise_level) == g.levels.end()) {
      g.levels.push_back(r.noise_level);
    }
    samples[static_cast<std::size_t>(it - grids.begin())][{r.method, r.noise_level}].push_back(
        r.accuracy);
  }
  for (std::size_t i = 0; i < grids.size(); ++i) {
    std::sort(grids[i].levels.begin(), grids[i].levels.end());
    for (auto& [key, values] : samples[i]) {
      grids[i].count[key] = values.size();
      grids[i].median[key] = median(std::move(values));
    }
  }
  return grids;
}

namespace {

std::string emit_csv(const std::vector<ResultRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const ResultRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.dataset, to_string(r.method), r.noise_level,
                       r.seed, r.accuracy, r.wall_time_seconds, r.pca_used ? 1 : 0);
  }
  return out;
}

std::string emit_text(const std::vector<ResultRow>& rows) {
  std::string out;
  std::size_t name_width = 0;
  for (Method m : kAllMethods) name_width = std::max(name_width, display_name(m).size());
  for (const MedianGrid& g : median_grids(rows)) {
    if (!out.empty()) out += '\n';
    out += fmt::format("dataset: {} (median accuracy %, over seeds)\n", g.dataset);
    out += fmt::format("{:<{}}", "method \\ noise", name_width);
    for (double level : g.levels) out += fmt::format("  {:>7}", fmt::format("{:g}%", level * 100));
    out += '\n';
    for (Method m : g.methods) {
      out += fmt::format("{:<{}}", display_name(m), name_width);
      for (double level : g.levels) {
        const double v = g.at(m, level);
        out += std::isnan(v) ? fmt::format("  {:>7}", "-") : fmt::format("  {:>7.2f}", v * 100);
      }
      out += '\n';
    }
  }
  return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no, std::string_view column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw FormatError(fmt::format("results csv line {}: bad {} '{}'", line_no, column, field));
  }
  return value;
}

}  // namespace

std::string emit_table(const std::vector<ResultRow>& rows, TableFormat format) {
  return format == TableFormat::kCsv ? emit_csv(rows) : emit_text(rows);
}

std::vector<ResultRow> parse_results_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kCsvHeader) {
        throw FormatError(fmt::format("results csv line 1: expected header '{}'", kCsvHeader));
      }
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 7) {
      throw FormatError(
          fmt::format("results csv line {}: expected 7 fields, got {}", line_no, f.size()));
    }
    ResultRow r;
    r.dataset = std::string(f[0]);
    const auto m = parse_method(f[1]);
    if (!m) throw FormatError(fmt::format("results csv line {}: unknown method '{}'", line_no, f[1]));
    r.method = *m;
    r.noise_level = parse_number<double>(f[2], line_no, "noise_level");
    r.seed = parse_number<std::uint64_t>(f[3], line_no, "seed");
    r.accuracy = parse_number<double>(f[4], line_no, "accuracy");
    r.wall_time_seconds = parse_number<double>(f[5], line_no, "wall_time_s");
    if (f[6] != "0" && f[6] != "1") {
      throw FormatError(fmt::format("results csv line {}: bad pca flag '{}'", line_no, f[6]));
    }
    r.pca_used = f[6] == "1";
    rows.push_back(std::move(r));
  }
  if (line_no == 0) throw FormatError("results csv: empty input");
  return rows;
}

}  // namespace hgnn::bench
