#include "oseen/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace oseen {

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'N', 'S', 'F', '2'};

[[noreturn]] void fail_at(const std::string& path, std::uint64_t offset, const char* what) {
    throw std::runtime_error("snapshot: " + path + ": " + what + " at byte offset " +
                             std::to_string(offset));
}

void read_exact(std::ifstream& in, const std::string& path, std::uint64_t& offset, void* dst,
                std::size_t count, const char* what) {
    in.read(static_cast<char*>(dst), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count)
        fail_at(path, offset + static_cast<std::uint64_t>(std::max<std::streamsize>(in.gcount(), 0)),
                what);
    offset += count;
}

} // namespace

void write_snapshot(const std::string& path, const Snapshot& snap) {
    if (snap.components.empty())
        throw std::invalid_argument("snapshot: nothing to write");
    for (const auto& c : snap.components)
        if (!c.grid.same_layout(snap.grid))
            throw std::invalid_argument("snapshot: component grids differ");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("snapshot: cannot open " + path + " for writing");
    const std::uint32_t n = static_cast<std::uint32_t>(snap.grid.n_points);
    const std::uint32_t nc = static_cast<std::uint32_t>(snap.components.size());
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&snap.grid.half_width), 8);
    out.write(reinterpret_cast<const char*>(&snap.time), 8);
    out.write(reinterpret_cast<const char*>(&nc), 4);
    for (const auto& c : snap.components)
        out.write(reinterpret_cast<const char*>(c.data.data()),
                  static_cast<std::streamsize>(c.data.size() * sizeof(double)));
    if (!out) throw std::runtime_error("snapshot: write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("snapshot: cannot open " + path);
    std::uint64_t offset = 0;
    char magic[4];
    read_exact(in, path, offset, magic, 4, "truncated magic");
    for (int i = 0; i < 4; ++i)
        if (magic[i] != kMagic[i]) fail_at(path, 0, "bad magic");
    std::uint32_t n = 0, nc = 0;
    double half_width = 0.0, time = 0.0;
    read_exact(in, path, offset, &n, 4, "truncated point count");
    read_exact(in, path, offset, &half_width, 8, "truncated half width");
    read_exact(in, path, offset, &time, 8, "truncated time");
    read_exact(in, path, offset, &nc, 4, "truncated component count");
    if (nc == 0 || nc > 4) fail_at(path, offset - 4, "implausible component count");
    Snapshot snap;
    snap.grid = Grid(static_cast<int>(n), half_width, half_width / 4.0);
    snap.time = time;
    snap.components.reserve(nc);
    for (std::uint32_t c = 0; c < nc; ++c) {
        ScalarField f(snap.grid);
        read_exact(in, path, offset, f.data.data(), f.data.size() * sizeof(double),
                   "truncated component data");
        snap.components.push_back(std::move(f));
    }
    return snap;
}

void write_csv_slice(const std::string& path, const ScalarField& f, int iy) {
    if (iy < 0 || iy >= f.grid.n_points)
        throw std::invalid_argument("csv slice: row index out of range");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("csv slice: cannot open " + path);
    out << "x,value\n";
    char buf[64];
    for (int ix = 0; ix < f.grid.n_points; ++ix) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", f.grid.x(ix), f(ix, iy));
        out << buf;
    }
}

} // namespace oseen
