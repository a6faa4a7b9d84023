#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "hgnn/dataset.hpp"
#include "hgnn/error.hpp"

namespace hgnn {
namespace {

constexpr std::size_t kUspsPixels = 256;

}  // namespace

UspsRows read_usps_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(fmt::format("{}: cannot open", path.string()));
  std::vector<double> values;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> fields;
  while (std::getline(in, line)) {
    ++line_no;
    fields.clear();
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && std::isspace(static_cast<unsigned char>(*p))) ++p;
      if (p == end) break;
      double v = 0.0;
      const auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{}) {
        throw FormatError(fmt::format("{}:{}: unparsable number", path.string(), line_no));
      }
      fields.push_back(v);
      p = next;
    }
    if (fields.empty()) continue;
    if (fields.size() != kUspsPixels + 1) {
      throw FormatError(fmt::format("{}:{}: expected {} fields, found {}", path.string(), line_no,
                                    kUspsPixels + 1, fields.size()));
    }
    if (!std::isfinite(fields[0]) || fields[0] < 0.0) {
      throw FormatError(fmt::format("{}:{}: bad class label", path.string(), line_no));
    }
    labels.push_back(static_cast<int>(std::trunc(fields[0])));
    values.insert(values.end(), fields.begin() + 1, fields.end());
  }
  UspsRows rows;
  rows.features = DenseMatrix(labels.size(), kUspsPixels, std::move(values));
  rows.labels = std::move(labels);
  return rows;
}

void write_usps_file(const std::filesystem::path& path, const DenseMatrix& features,
                     const std::vector<int>& labels) {
  if (features.cols() != kUspsPixels || features.rows() != labels.size()) {
    throw ShapeError("write_usps_file: expected n x 256 features and n labels");
  }
  std::ofstream out(path);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    // Shortest round-trip representation keeps reloads bit-identical.
    out << fmt::format("{}", labels[i]);
    for (double v : features.row(i)) out << fmt::format(" {}", v);
    out << '\n';
  }
  if (!out) throw FormatError(fmt::format("{}: write failed", path.string()));
}

ImageDataset load_usps_dataset(const std::filesystem::path& train_path,
                               const std::filesystem::path& test_path) {
  UspsRows train = read_usps_file(train_path);
  UspsRows test = read_usps_file(test_path);
  const std::size_t n = train.labels.size() + test.labels.size();
  std::vector<double> values;
  values.reserve(n * kUspsPixels);
  values.insert(values.end(), train.features.values().begin(), train.features.values().end());
  values.insert(values.end(), test.features.values().begin(), test.features.values().end());

  ImageDataset ds;
  ds.features = DenseMatrix(n, kUspsPixels, std::move(values));
  ds.labels = std::move(train.labels);
  ds.labels.insert(ds.labels.end(), test.labels.begin(), test.labels.end());
  for (std::size_t i = 0; i < n; ++i) {
    (i < n - test.labels.size() ? ds.train_indices : ds.test_indices).push_back(i);
  }
  int max_label = 0;
  for (int l : ds.labels) max_label = std::max(max_label, l);
  ds.num_classes = std::max(10, max_label + 1);
  ds.validate();
  return ds;
}

}  // namespace hgnn
