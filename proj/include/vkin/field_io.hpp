#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vkin/grid.hpp"

namespace vkin {

/// Binary field dump: "VKF1", three little-endian u32 dims, n^3 little-endian f64
/// values (third axis fastest), then the f64 half-width L.
std::vector<unsigned char> encode_vkf1(const ScalarField& field);
ScalarField decode_vkf1(const std::vector<unsigned char>& bytes);

void write_vkf1(const std::filesystem::path& path, const ScalarField& field);
ScalarField read_vkf1(const std::filesystem::path& path);

} // namespace vkin
