#include "wgraphlet/wgdv_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

#include "wgraphlet/error.hpp"

namespace wgraphlet {
namespace {

constexpr char kMagic[4] = {'W', 'G', 'D', 'V'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> bytes{static_cast<char>(v & 0xFF), static_cast<char>(v >> 8 & 0xFF),
                                  static_cast<char>(v >> 16 & 0xFF), static_cast<char>(v >> 24 & 0xFF)};
  out.write(bytes.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw ParseError("truncated WGDV file", 0);
  return b[0] | b[1] << 8 | b[2] << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

}  // namespace

void write_wgdv(std::ostream& out, const FloatMatrix& m) {
  if (m.rows() > std::numeric_limits<std::uint32_t>::max() || m.cols() > std::numeric_limits<std::uint32_t>::max())
    throw InputError("matrix too large for WGDV");
  out.write(kMagic, 4);
  put_u32(out, kWgdvVersion);
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.size(); ++i) put_u32(out, std::bit_cast<std::uint32_t>(m.data()[i]));
  if (!out) throw Error("failed writing WGDV data");
}

void write_wgdv(const std::filesystem::path& path, const FloatMatrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  write_wgdv(out, m);
}

FloatMatrix read_wgdv(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw ParseError("not a WGDV file", 0);
  const auto version = get_u32(in);
  if (version != kWgdvVersion) throw ParseError("unsupported WGDV version " + std::to_string(version), 0);
  const auto rows = get_u32(in);
  const auto cols = get_u32(in);
  FloatMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = std::bit_cast<float>(get_u32(in));
  return m;
}

FloatMatrix read_wgdv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  return read_wgdv(in);
}

}  // namespace wgraphlet
