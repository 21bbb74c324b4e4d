#include "advids/net/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <memory>

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace advids::net {

namespace {

constexpr char kMagic[8] = {'A', 'D', 'V', 'N', 'E', 'T', '0', '1'};
constexpr std::uint32_t kVersion = 1;

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

template <typename T>
void write_pod(std::FILE* f, const T& v) {
  if (std::fwrite(&v, sizeof(T), 1, f) != 1) throw IoError("checkpoint: write failed");
}

template <typename T>
T read_pod(std::FILE* f) {
  T v;
  if (std::fread(&v, sizeof(T), 1, f) != 1) throw IoError("checkpoint: truncated file");
  return v;
}

void write_doubles(std::FILE* f, const double* p, std::size_t n) {
  if (n == 0) return;
  if (std::fwrite(p, sizeof(double), n, f) != n) throw IoError("checkpoint: write failed");
}

void read_doubles(std::FILE* f, double* p, std::size_t n) {
  if (n == 0) return;
  if (std::fread(p, sizeof(double), n, f) != n) throw IoError("checkpoint: truncated file");
}

}  // namespace

void save_network(const std::string& path, const Network& net, std::uint64_t seed) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("checkpoint: cannot open " + path + " for writing");
  if (std::fwrite(kMagic, 1, sizeof(kMagic), f.get()) != sizeof(kMagic)) {
    throw IoError("checkpoint: write failed");
  }
  write_pod(f.get(), kVersion);
  write_pod(f.get(), seed);
  write_pod(f.get(), static_cast<std::uint32_t>(net.input_dim()));
  write_pod(f.get(), static_cast<std::uint32_t>(net.layer_count()));
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    const DenseLayer& l = net.layer(i);
    write_pod(f.get(), static_cast<std::uint32_t>(l.fan_in()));
    write_pod(f.get(), static_cast<std::uint32_t>(l.fan_out()));
    write_pod(f.get(), static_cast<std::uint8_t>(l.act));
    write_pod(f.get(), static_cast<std::uint8_t>(l.trainable ? 1 : 0));
  }
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    const DenseLayer& l = net.layer(i);
    // row-major parameter blocks
    for (int r = 0; r < l.fan_in(); ++r) {
      for (int c = 0; c < l.fan_out(); ++c) {
        const double v = l.W(r, c);
        write_doubles(f.get(), &v, 1);
      }
    }
    write_doubles(f.get(), l.b.data(), static_cast<std::size_t>(l.b.size()));
  }
}

LoadedNetwork load_network(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("checkpoint: cannot open " + path);
  char magic[8];
  if (std::fread(magic, 1, sizeof(magic), f.get()) != sizeof(magic) ||
      std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw IoError("checkpoint: bad magic in " + path);
  }
  const auto version = read_pod<std::uint32_t>(f.get());
  if (version != kVersion) {
    throw IoError("checkpoint: unsupported format version " + std::to_string(version));
  }
  LoadedNetwork result;
  result.seed = read_pod<std::uint64_t>(f.get());
  const auto input_dim = read_pod<std::uint32_t>(f.get());
  const auto n_layers = read_pod<std::uint32_t>(f.get());
  struct Header {
    std::uint32_t fan_in, fan_out;
    std::uint8_t act, trainable;
  };
  std::vector<Header> headers(n_layers);
  for (auto& h : headers) {
    h.fan_in = read_pod<std::uint32_t>(f.get());
    h.fan_out = read_pod<std::uint32_t>(f.get());
    h.act = read_pod<std::uint8_t>(f.get());
    h.trainable = read_pod<std::uint8_t>(f.get());
  }
  std::vector<LayerPtr> layers;
  layers.reserve(n_layers);
  for (const auto& h : headers) {
    auto l = std::make_shared<DenseLayer>();
    l->W.resize(h.fan_in, h.fan_out);
    l->b.resize(h.fan_out);
    l->act = static_cast<Activation>(h.act);
    l->trainable = h.trainable != 0;
    for (std::uint32_t r = 0; r < h.fan_in; ++r) {
      for (std::uint32_t c = 0; c < h.fan_out; ++c) {
        double v;
        read_doubles(f.get(), &v, 1);
        l->W(r, c) = v;
      }
    }
    read_doubles(f.get(), l->b.data(), h.fan_out);
    layers.push_back(std::move(l));
  }
  result.net = Network(static_cast<int>(input_dim), std::move(layers));
  return result;
}

}  // namespace advids::net
