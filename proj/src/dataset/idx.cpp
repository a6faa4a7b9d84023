#include <array>
#include <fstream>

#include <fmt/format.h>

#include "hgnn/dataset.hpp"
#include "hgnn/error.hpp"

namespace hgnn {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(std::istream& in, const std::filesystem::path& path) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
    throw FormatError(fmt::format("{}: truncated IDX header", path.string()));
  }
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
         (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

void write_be32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                              static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b.data(), 4);
}

std::ifstream open_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(fmt::format("{}: cannot open", path.string()));
  return in;
}

}  // namespace

IdxImages read_idx_images(const std::filesystem::path& path) {
  auto in = open_binary(path);
  const std::uint32_t magic = read_be32(in, path);
  if (magic != kImageMagic) {
    throw FormatError(fmt::format("{}: bad IDX image magic 0x{:08x}", path.string(), magic));
  }
  IdxImages img;
  img.count = read_be32(in, path);
  img.height = read_be32(in, path);
  img.width = read_be32(in, path);
  img.pixels.resize(img.count * img.height * img.width);
  if (!in.read(reinterpret_cast<char*>(img.pixels.data()),
               static_cast<std::streamsize>(img.pixels.size()))) {
    throw FormatError(fmt::format("{}: truncated pixel data (expected {} bytes)", path.string(),
                                  img.pixels.size()));
  }
  return img;
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path) {
  auto in = open_binary(path);
  const std::uint32_t magic = read_be32(in, path);
  if (magic != kLabelMagic) {
    throw FormatError(fmt::format("{}: bad IDX label magic 0x{:08x}", path.string(), magic));
  }
  std::vector<std::uint8_t> labels(read_be32(in, path));
  if (!in.read(reinterpret_cast<char*>(labels.data()),
               static_cast<std::streamsize>(labels.size()))) {
    throw FormatError(fmt::format("{}: truncated label data", path.string()));
  }
  return labels;
}

void write_idx_images(const std::filesystem::path& path, const IdxImages& images) {
  std::ofstream out(path, std::ios::binary);
  write_be32(out, kImageMagic);
  write_be32(out, static_cast<std::uint32_t>(images.count));
  write_be32(out, static_cast<std::uint32_t>(images.height));
  write_be32(out, static_cast<std::uint32_t>(images.width));
  out.write(reinterpret_cast<const char*>(images.pixels.data()),
            static_cast<std::streamsize>(images.pixels.size()));
  if (!out) throw FormatError(fmt::format("{}: write failed", path.string()));
}

void write_idx_labels(const std::filesystem::path& path, const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary);
  write_be32(out, kLabelMagic);
  write_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
  if (!out) throw FormatError(fmt::format("{}: write failed", path.string()));
}

ImageDataset load_idx_dataset(const std::filesystem::path& train_images,
                              const std::filesystem::path& train_labels,
                              const std::filesystem::path& test_images,
                              const std::filesystem::path& test_labels) {
  const IdxImages parts[2] = {read_idx_images(train_images), read_idx_images(test_images)};
  const std::vector<std::uint8_t> labels[2] = {read_idx_labels(train_labels),
                                               read_idx_labels(test_labels)};
  for (int s = 0; s < 2; ++s) {
    if (parts[s].count != labels[s].size()) {
      throw FormatError(fmt::format("{} images but {} labels in the {} split", parts[s].count,
                                    labels[s].size(), s == 0 ? "train" : "test"));
    }
  }
  if (parts[0].height != parts[1].height || parts[0].width != parts[1].width) {
    throw FormatError("train and test image sizes differ");
  }
  const std::size_t m = parts[0].height * parts[0].width;
  const std::size_t n = parts[0].count + parts[1].count;

  ImageDataset ds;
  ds.features = DenseMatrix(n, m);
  ds.labels.reserve(n);
  std::size_t row = 0;
  int max_label = 0;
  for (int s = 0; s < 2; ++s) {
    for (std::size_t i = 0; i < parts[s].count; ++i, ++row) {
      const std::uint8_t* px = parts[s].pixels.data() + i * m;
      auto out = ds.features.row(row);
      for (std::size_t t = 0; t < m; ++t) out[t] = px[t] / 255.0;
      ds.labels.push_back(labels[s][i]);
      max_label = std::max<int>(max_label, labels[s][i]);
      (s == 0 ? ds.train_indices : ds.test_indices).push_back(row);
    }
  }
  ds.num_classes = std::max(10, max_label + 1);
  ds.validate();
  return ds;
}

ImageDataset load_idx_directory(const std::filesystem::path& dir) {
  return load_idx_dataset(dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte",
                          dir / "t10k-images-idx3-ubyte", dir / "t10k-labels-idx1-ubyte");
}

}  // namespace hgnn
