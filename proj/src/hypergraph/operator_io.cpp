#include <array>
#include <cstring>
#include <fstream>

#include <fmt/format.h>

#include "hgnn/error.hpp"
#include "hgnn/hypergraph.hpp"

namespace hgnn {
namespace {

constexpr std::array<char, 8> kMagic{'H', 'G', 'N', 'N', 'C', 'S', 'R', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T v) {
  static_assert(std::is_integral_v<T>);
  std::array<char, sizeof(T)> b{};
  for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

template <typename T>
T get_le(std::istream& in, const std::filesystem::path& path) {
  std::array<unsigned char, sizeof(T)> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) {
    throw FormatError(fmt::format("{}: truncated operator file", path.string()));
  }
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(b[i]) << (8 * i);
  return v;
}

std::uint64_t bits_of(double d) {
  std::uint64_t u = 0;
  std::memcpy(&u, &d, sizeof u);
  return u;
}

double from_bits(std::uint64_t u) {
  double d = 0.0;
  std::memcpy(&d, &u, sizeof d);
  return d;
}

}  // namespace

void save_operator(const std::filesystem::path& path, const PropagationOperator& op) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(fmt::format("{}: cannot open for writing", path.string()));
  const SparseMatrix& m = op.matrix;
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(op.normalization));
  put_le<std::uint64_t>(out, m.rows());
  put_le<std::uint64_t>(out, m.cols());
  put_le<std::uint64_t>(out, m.nnz());
  for (std::size_t o : m.row_offsets()) put_le<std::uint64_t>(out, o);
  for (auto c : m.col_indices()) put_le<std::uint32_t>(out, c);
  for (double v : m.values()) put_le<std::uint64_t>(out, bits_of(v));
  if (!out) throw FormatError(fmt::format("{}: write failed", path.string()));
}

PropagationOperator load_operator(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(fmt::format("{}: cannot open", path.string()));
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError(fmt::format("{}: not an operator cache file", path.string()));
  }
  const auto version = get_le<std::uint32_t>(in, path);
  if (version != kVersion) {
    throw FormatError(fmt::format("{}: unsupported operator file version {}", path.string(), version));
  }
  const auto norm = get_le<std::uint32_t>(in, path);
  if (norm > static_cast<std::uint32_t>(Normalization::kGcn)) {
    throw FormatError(fmt::format("{}: unknown normalization code {}", path.string(), norm));
  }
  const auto rows = get_le<std::uint64_t>(in, path);
  const auto cols = get_le<std::uint64_t>(in, path);
  const auto nnz = get_le<std::uint64_t>(in, path);
  std::vector<std::size_t> offsets(rows + 1);
  for (auto& o : offsets) o = get_le<std::uint64_t>(in, path);
  std::vector<SparseMatrix::Index> ci(nnz);
  for (auto& c : ci) c = get_le<std::uint32_t>(in, path);
  std::vector<double> vals(nnz);
  for (auto& v : vals) v = from_bits(get_le<std::uint64_t>(in, path));
  PropagationOperator op;
  op.normalization = static_cast<Normalization>(norm);
  op.matrix = SparseMatrix(rows, cols, std::move(offsets), std::move(ci), std::move(vals));
  return op;
}

}  // namespace hgnn
