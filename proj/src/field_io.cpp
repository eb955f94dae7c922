#include "vkin/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

namespace vkin {

namespace {

constexpr char kMagic[4] = {'V', 'K', 'F', '1'};

void put_u32(std::vector<unsigned char>& out, std::uint32_t x)
{
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>((x >> (8 * b)) & 0xffu));
}

void put_f64(std::vector<unsigned char>& out, double x)
{
    const auto bits = std::bit_cast<std::uint64_t>(x);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>((bits >> (8 * b)) & 0xffu));
}

std::uint32_t get_u32(const unsigned char* p)
{
    std::uint32_t x = 0;
    for (int b = 0; b < 4; ++b) x |= static_cast<std::uint32_t>(p[b]) << (8 * b);
    return x;
}

double get_f64(const unsigned char* p)
{
    std::uint64_t x = 0;
    for (int b = 0; b < 8; ++b) x |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    return std::bit_cast<double>(x);
}

} // namespace

std::vector<unsigned char> encode_vkf1(const ScalarField& field)
{
    const auto& g = field.grid();
    std::vector<unsigned char> out;
    out.reserve(4 + 12 + 8 * field.size() + 8);
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    for (int d = 0; d < 3; ++d) put_u32(out, static_cast<std::uint32_t>(g.n()));
    for (double x : field.values()) put_f64(out, x);
    put_f64(out, g.half_width());
    return out;
}

ScalarField decode_vkf1(const std::vector<unsigned char>& bytes)
{
    if (bytes.size() < 24 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw ConfigError("VKF1: missing magic bytes");
    const std::uint32_t n0 = get_u32(bytes.data() + 4);
    const std::uint32_t n1 = get_u32(bytes.data() + 8);
    const std::uint32_t n2 = get_u32(bytes.data() + 12);
    if (n0 != n1 || n1 != n2) throw ConfigError("VKF1: only cubic grids are supported");
    const std::size_t count = static_cast<std::size_t>(n0) * n1 * n2;
    if (bytes.size() != 16 + 8 * count + 8) throw ConfigError("VKF1: truncated or oversized payload");
    const double L = get_f64(bytes.data() + 16 + 8 * count);
    VelocityGrid grid(static_cast<int>(n0), L);
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) values[i] = get_f64(bytes.data() + 16 + 8 * i);
    return ScalarField(grid, std::move(values));
}

void write_vkf1(const std::filesystem::path& path, const ScalarField& field)
{
    const auto bytes = encode_vkf1(field);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

ScalarField read_vkf1(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return decode_vkf1(bytes);
}

} // namespace vkin
