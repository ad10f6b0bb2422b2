#include <bit>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

#include "qvrad/error.hpp"
#include "qvrad/spectrum.hpp"

namespace qvrad {

namespace {

constexpr char magic[8] = {'Q', 'V', 'R', 'S', 'P', 'E', 'C', '1'};

void put_u64(std::ostream& os, std::uint64_t v)
{
    unsigned char b[8];
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
    os.write(reinterpret_cast<char const*>(b), 8);
}

void put_f64(std::ostream& os, double x) { put_u64(os, std::bit_cast<std::uint64_t>(x)); }

std::uint64_t get_u64(std::istream& is)
{
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8))
        throw Error(ErrorCode::Io, "truncated spectrum file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

}  // namespace

void write_grid_binary(std::ostream& os, SpectralGrid const& g, std::string const& metadata)
{
    os.write(magic, sizeof magic);
    put_u64(os, metadata.size());
    os.write(metadata.data(), static_cast<std::streamsize>(metadata.size()));
    for (auto const& a : g.axes())
        put_u64(os, static_cast<std::uint64_t>(a.count));
    for (auto const& a : g.axes())
        put_f64(os, a.spacing);
    for (auto const& a : g.axes())
        put_f64(os, -a.max_value());
    put_f64(os, g.half_extent());
    for (auto const& v : g.values()) {
        put_f64(os, v.real());
        put_f64(os, v.imag());
    }
    if (!os)
        throw Error(ErrorCode::Io, "failed writing spectrum file");
}

SpectralGrid read_grid_binary(std::istream& is, std::string* metadata)
{
    char head[8];
    if (!is.read(head, 8) || std::memcmp(head, magic, 8) != 0)
        throw Error(ErrorCode::Io, "not a QVRSPEC1 spectrum file");
    std::uint64_t meta_size = get_u64(is);
    if (meta_size > (std::uint64_t{1} << 20))
        throw Error(ErrorCode::Io, "spectrum metadata block is implausibly large");
    std::string meta(meta_size, '\0');
    if (!is.read(meta.data(), static_cast<std::streamsize>(meta_size)))
        throw Error(ErrorCode::Io, "truncated spectrum file");
    if (metadata != nullptr)
        *metadata = std::move(meta);
    std::array<GridAxis, 4> axes{};
    std::size_t total = 1;
    for (auto& a : axes) {
        a.count = static_cast<std::size_t>(get_u64(is));
        total *= a.count;
    }
    for (auto& a : axes)
        a.spacing = get_f64(is);
    for (std::size_t i = 0; i < axes.size(); ++i)
        (void)get_f64(is);  // origin is implied by count and spacing
    double half_extent = get_f64(is);
    for (auto& a : axes)
        a.sample_step = 2.0 * 3.141592653589793 / (static_cast<double>(a.count) * a.spacing);
    std::vector<Complex> values(total);
    for (auto& v : values) {
        double re = get_f64(is);
        double im = get_f64(is);
        v = {re, im};
    }
    return SpectralGrid(axes, std::move(values), half_extent);
}

void write_grid_csv(std::ostream& os, SpectralGrid const& g)
{
    auto const& ax = g.axes();
    os << "omega,kx,ky,kz,re,im\n";
    os << std::setprecision(17);
    std::array<std::ptrdiff_t, 4> idx{};
    for (idx[0] = -ax[0].half(); idx[0] <= ax[0].half(); ++idx[0])
        for (idx[1] = -ax[1].half(); idx[1] <= ax[1].half(); ++idx[1])
            for (idx[2] = -ax[2].half(); idx[2] <= ax[2].half(); ++idx[2])
                for (idx[3] = -ax[3].half(); idx[3] <= ax[3].half(); ++idx[3]) {
                    Complex v = g.values()[g.flat_index(idx)];
                    os << g.coordinate(0, idx[0]) << ',' << g.coordinate(1, idx[1]) << ','
                       << g.coordinate(2, idx[2]) << ',' << g.coordinate(3, idx[3]) << ','
                       << v.real() << ',' << v.imag() << '\n';
                }
}

}  // namespace qvrad
