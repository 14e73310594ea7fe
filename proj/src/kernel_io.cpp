// Binary kernel cache: little-endian, CRC-protected header and payload.

#include <zlib.h>

#include <array>
#include <cstring>
#include <fstream>
#include <vector>

#include "segeo/kernels.hpp"

namespace segeo {

namespace {

constexpr char kMagic[4] = {'S', 'G', 'K', '1'};
constexpr std::uint32_t kVersion = 1;

struct Writer {
  std::vector<unsigned char> bytes;

  template <typename T>
  void put(const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const unsigned char*>(&v);
    bytes.insert(bytes.end(), p, p + sizeof(T));
  }
};

struct Reader {
  const unsigned char* data;
  std::size_t size;
  std::size_t pos = 0;

  template <typename T>
  T get(const char* field) {
    static_assert(std::is_trivially_copyable_v<T>);
    if (pos + sizeof(T) > size) {
      throw kernel_format_error(std::string("kernel file truncated at field ") +
                                field);
    }
    T v;
    std::memcpy(&v, data + pos, sizeof(T));
    pos += sizeof(T);
    return v;
  }
};

std::uint32_t crc_of(const unsigned char* data, std::size_t len) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(data),
              static_cast<uInt>(len)));
}

}  // namespace

void save_kernel(const KernelGrid& grid, const std::filesystem::path& path) {
  Writer w;
  w.put(kMagic);
  w.put(kVersion);
  w.put(static_cast<std::uint8_t>(grid.params.kind));
  w.put(static_cast<std::uint8_t>(grid.params.mode));
  w.put(static_cast<std::uint32_t>(grid.geom.nx));
  w.put(static_cast<std::uint32_t>(grid.geom.ny));
  w.put(static_cast<std::uint32_t>(grid.geom.ntheta));
  w.put(grid.geom.half_width_x);
  w.put(grid.geom.half_width_y);
  w.put(grid.geom.period);
  w.put(grid.params.sigma);
  w.put(grid.params.sigma1);
  w.put(grid.params.sigma3);
  w.put(grid.params.sigma_iso);
  w.put(grid.params.rho);
  w.put(grid.params.n_paths);
  w.put(grid.params.steps);
  w.put(grid.params.step);
  w.put(grid.params.seed);
  w.put(grid.retained_count);
  w.put(static_cast<std::uint8_t>(grid.symmetrized ? 1 : 0));
  w.put(crc_of(w.bytes.data(), w.bytes.size()));

  const std::size_t payload_begin = w.bytes.size();
  for (double v : grid.values) w.put(v);
  w.put(crc_of(w.bytes.data() + payload_begin, w.bytes.size() - payload_begin));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw kernel_format_error("cannot open kernel file for writing: " +
                              path.string());
  }
  out.write(reinterpret_cast<const char*>(w.bytes.data()),
            static_cast<std::streamsize>(w.bytes.size()));
  if (!out) {
    throw kernel_format_error("short write to kernel file: " + path.string());
  }
}

KernelGrid load_kernel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw kernel_format_error("cannot open kernel file: " + path.string());
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  Reader r{bytes.data(), bytes.size()};

  char magic[4];
  std::memcpy(magic, r.get<std::array<char, 4>>("magic").data(), 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw kernel_format_error("kernel file magic mismatch");
  }
  const auto version = r.get<std::uint32_t>("version");
  if (version != kVersion) {
    throw kernel_format_error("kernel file version mismatch: " +
                              std::to_string(version));
  }

  KernelGrid grid;
  const auto kind = r.get<std::uint8_t>("kind");
  if (kind > 2) throw kernel_format_error("kernel file bad kind byte");
  grid.params.kind = static_cast<KernelKind>(kind);
  const auto mode = r.get<std::uint8_t>("mode");
  if (mode > 1) throw kernel_format_error("kernel file bad mode byte");
  grid.params.mode = static_cast<Polarity>(mode);

  GridSpec spec;
  spec.nx = static_cast<int>(r.get<std::uint32_t>("nx"));
  spec.ny = static_cast<int>(r.get<std::uint32_t>("ny"));
  spec.ntheta = static_cast<int>(r.get<std::uint32_t>("ntheta"));
  spec.half_width_x = r.get<double>("half_width_x");
  spec.half_width_y = r.get<double>("half_width_y");
  const double period = r.get<double>("period");
  grid.params.sigma = r.get<double>("sigma");
  grid.params.sigma1 = r.get<double>("sigma1");
  grid.params.sigma3 = r.get<double>("sigma3");
  grid.params.sigma_iso = r.get<double>("sigma_iso");
  grid.params.rho = r.get<double>("rho");
  grid.params.n_paths = r.get<std::uint64_t>("n_paths");
  grid.params.steps = r.get<std::uint64_t>("steps");
  grid.params.step = r.get<double>("step");
  grid.params.seed = r.get<std::uint64_t>("seed");
  grid.retained_count = r.get<std::uint64_t>("retained_count");
  grid.symmetrized = r.get<std::uint8_t>("symmetrized") != 0;

  const std::size_t header_len = r.pos;
  const auto header_crc = r.get<std::uint32_t>("header_crc");
  if (header_crc != crc_of(bytes.data(), header_len)) {
    throw kernel_format_error("kernel file header checksum mismatch");
  }

  grid.geom = GridGeom::make(spec, grid.params.mode);
  if (grid.geom.period != period) {
    throw kernel_format_error("kernel file period inconsistent with mode");
  }

  const std::size_t payload_begin = r.pos;
  grid.values.resize(grid.geom.size());
  for (double& v : grid.values) v = r.get<double>("values");
  const std::size_t payload_len = r.pos - payload_begin;
  const auto payload_crc = r.get<std::uint32_t>("payload_crc");
  if (payload_crc != crc_of(bytes.data() + payload_begin, payload_len)) {
    throw kernel_format_error("kernel file payload checksum mismatch");
  }
  return grid;
}

}  // namespace segeo
