#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include <Eigen/Core>

namespace wgraphlet {

/// Row-major float32 matrix in the "WGDV" layout:
///   bytes 0-3  magic "WGDV"
///   u32 LE     version (1)
///   u32 LE     rows M
///   u32 LE     cols K
///   M*K IEEE-754 binary32 LE values, row-major.
using FloatMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr std::uint32_t kWgdvVersion = 1;

void write_wgdv(std::ostream& out, const FloatMatrix& m);
void write_wgdv(const std::filesystem::path& path, const FloatMatrix& m);
FloatMatrix read_wgdv(std::istream& in);
FloatMatrix read_wgdv(const std::filesystem::path& path);

}  // namespace wgraphlet
