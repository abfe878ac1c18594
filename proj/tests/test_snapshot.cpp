#include <doctest.h>

#include "gspde/initial_fields.hpp"
#include "gspde/snapshot.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace gspde;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("snapshot round-trip is bitwise for random fields") {
    for (std::uint64_t s = 1; s <= 8; ++s) {
        const int dim = s % 2 ? 2 : 3;
        const FourierField f = random_spectrum_field(dim, 5, 1.0, 5, 1.0, s);
        const std::string path = temp_path("gspde_snap_test.gspf");
        write_snapshot(f, path);
        const FourierField g = read_snapshot(path);
        CHECK(g.dim() == f.dim());
        CHECK(g.cutoff() == f.cutoff());
        CHECK(g == f);
        std::filesystem::remove(path);
    }
}

TEST_CASE("snapshot header layout is the documented little-endian GSPF") {
    FourierField f(2, 2);
    f.set(Wave{1, 0, 0}, ModeVec{Complex{0, 0}, Complex{0.5, -0.25}});
    const std::string path = temp_path("gspde_snap_header.gspf");
    write_snapshot(f, path);
    std::ifstream is(path, std::ios::binary);
    std::string data((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    REQUIRE(data.size() >= 24);
    CHECK(data.substr(0, 4) == "GSPF");
    CHECK(static_cast<unsigned char>(data[4]) == 1); // version u32 LE
    CHECK(static_cast<unsigned char>(data[8]) == 2); // dim
    CHECK(static_cast<unsigned char>(data[12]) == 2); // cutoff
    CHECK(static_cast<unsigned char>(data[16]) == 2); // two stored modes (k and -k)
    // 24-byte header + 2 modes x (2*i32 + 2*16 bytes)
    CHECK(data.size() == 24 + 2 * (8 + 32));
    std::filesystem::remove(path);
}

TEST_CASE("snapshot reader rejects corrupted input") {
    const std::string path = temp_path("gspde_snap_bad.gspf");
    {
        std::ofstream os(path, std::ios::binary);
        os << "GSPX1234";
    }
    CHECK_THROWS_AS(read_snapshot(path), FieldError);
    {
        std::ofstream os(path, std::ios::binary);
        os << "GSPF";
    }
    CHECK_THROWS_AS(read_snapshot(path), FieldError); // truncated header
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_snapshot(path), FieldError); // missing file
}
