#include "gspde/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace gspde {

namespace {

constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_i32(std::string& out, std::int32_t v) { put_u32(out, static_cast<std::uint32_t>(v)); }

void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    put_u64(out, bits);
}

struct Reader {
    const std::string& data;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > data.size()) throw FieldError("snapshot: truncated file");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int b = 0; b < 4; ++b)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + b])) << (8 * b);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int b = 0; b < 8; ++b)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + b])) << (8 * b);
        pos += 8;
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
};

} // namespace

void write_snapshot(const FourierField& f, const std::string& path) {
    std::string out;
    out += "GSPF";
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(f.dim()));
    put_u32(out, static_cast<std::uint32_t>(f.cutoff()));

    const int dim = f.dim();
    const std::size_t n = f.point_count();
    std::uint64_t count = 0;
    std::string body;
    for (std::size_t p = 0; p < n; ++p) {
        bool nonzero = false;
        for (int c = 0; c < dim; ++c)
            if (f.at(p, c) != Complex{0.0, 0.0}) nonzero = true;
        if (!nonzero) continue;
        ++count;
        const Wave k = f.wave_at(p);
        for (int a = 0; a < dim; ++a) put_i32(body, k[a]);
        for (int c = 0; c < dim; ++c) {
            put_f64(body, f.at(p, c).real());
            put_f64(body, f.at(p, c).imag());
        }
    }
    put_u64(out, count);
    out += body;

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw FieldError("snapshot: cannot open " + path + " for writing");
    os.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!os) throw FieldError("snapshot: short write to " + path);
}

FourierField read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FieldError("snapshot: cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    Reader r{data};
    r.need(4);
    if (data.compare(0, 4, "GSPF") != 0) throw FieldError("snapshot: bad magic");
    r.pos = 4;
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw FieldError("snapshot: unsupported version " + std::to_string(version));
    const int dim = static_cast<int>(r.u32());
    const int cutoff = static_cast<int>(r.u32());
    const std::uint64_t count = r.u64();

    std::vector<std::pair<Wave, ModeVec>> modes;
    modes.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Wave k{0, 0, 0};
        for (int a = 0; a < dim; ++a) k[a] = r.i32();
        ModeVec v{};
        for (int c = 0; c < dim; ++c) {
            const double re = r.f64();
            const double im = r.f64();
            v[c] = Complex{re, im};
        }
        modes.emplace_back(k, v);
    }
    if (r.pos != data.size()) throw FieldError("snapshot: trailing bytes");
    return make_field(dim, cutoff, modes);
}

} // namespace gspde
