#include "edlf/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "edlf/errors.hpp"

namespace edlf {

namespace {

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double d) {
    std::uint64_t v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

double get_f64(const char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return std::bit_cast<double>(v);
}

constexpr std::size_t kHeaderBytes = 4 + 4 + 1 + 8 + 12 + 8 + 24;

}  // namespace

void save_field(const std::string& path, const LineFieldState& state) {
    const GridDomain& d = state.domain;
    std::string buf;
    buf.reserve(kHeaderBytes + d.size() * 25);
    buf.append("EDLF", 4);
    put_u32(buf, kFieldFileVersion);
    buf.push_back(static_cast<char>(state.params.target_mode));
    put_f64(buf, state.params.k);
    put_u32(buf, static_cast<std::uint32_t>(d.nx));
    put_u32(buf, static_cast<std::uint32_t>(d.ny));
    put_u32(buf, static_cast<std::uint32_t>(d.nz));
    put_f64(buf, d.h);
    put_f64(buf, d.origin.x);
    put_f64(buf, d.origin.y);
    put_f64(buf, d.origin.z);
    for (std::size_t i = 0; i < d.size(); ++i)
        buf.push_back(static_cast<char>(d.roles[i]));
    for (std::size_t i = 0; i < d.size(); ++i) {
        put_f64(buf, state.values[i].x);
        put_f64(buf, state.values[i].y);
        put_f64(buf, state.values[i].z);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("save_field: cannot open '" + path + "' for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("save_field: write failed for '" + path + "'");
}

LineFieldState load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_field: cannot open '" + path + "'");
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (buf.size() < kHeaderBytes)
        throw IoError("load_field: truncated header in '" + path + "': expected at least " +
                      std::to_string(kHeaderBytes) + " bytes, got " + std::to_string(buf.size()));
    if (std::memcmp(buf.data(), "EDLF", 4) != 0)
        throw IoError("load_field: bad magic in '" + path + "' (expected EDLF)");
    std::uint32_t version = get_u32(buf.data() + 4);
    if (version != kFieldFileVersion)
        throw IoError("load_field: unsupported version " + std::to_string(version) +
                      " in '" + path + "' (expected " + std::to_string(kFieldFileVersion) + ")");

    unsigned char mode = static_cast<unsigned char>(buf[8]);
    if (mode > 1) throw IoError("load_field: invalid target mode byte");
    ConeParams params;
    params.target_mode = static_cast<TargetMode>(mode);
    params.k = get_f64(buf.data() + 9);

    GridDomain d;
    d.nx = static_cast<int>(get_u32(buf.data() + 17));
    d.ny = static_cast<int>(get_u32(buf.data() + 21));
    d.nz = static_cast<int>(get_u32(buf.data() + 25));
    d.h = get_f64(buf.data() + 29);
    d.origin = {get_f64(buf.data() + 37), get_f64(buf.data() + 45), get_f64(buf.data() + 53)};
    d.shape = GridShape::Box;

    if (d.nx <= 0 || d.ny <= 0 || d.nz <= 0 || d.size() > (std::size_t(1) << 33))
        throw IoError("load_field: implausible dims in '" + path + "'");
    std::size_t n = d.size();
    std::size_t expect = kHeaderBytes + n + 24 * n;
    if (buf.size() != expect)
        throw IoError("load_field: payload length mismatch in '" + path + "': expected " +
                      std::to_string(expect) + " bytes, got " + std::to_string(buf.size()));

    d.roles.resize(n);
    const char* p = buf.data() + kHeaderBytes;
    for (std::size_t i = 0; i < n; ++i) {
        unsigned char r = static_cast<unsigned char>(p[i]);
        if (r > 2) throw IoError("load_field: invalid role byte");
        d.roles[i] = static_cast<NodeRole>(r);
    }
    p += n;

    LineFieldState state(std::move(d), params);
    for (std::size_t i = 0; i < n; ++i) {
        state.values[i] = {get_f64(p), get_f64(p + 8), get_f64(p + 16)};
        p += 24;
    }
    return state;
}

}  // namespace edlf
