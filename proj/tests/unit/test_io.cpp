#include <doctest.h>

#include <clocale>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sfd/coefficients.hpp"
#include "sfd/error.hpp"
#include "sfd/stochastic.hpp"
#include "sfd/synthesis.hpp"

using namespace sfd;
namespace fs = std::filesystem;

namespace {

fs::path scratchDir(const char* name) {
    const char* base = std::getenv("SFD_TEST_TMP");
    fs::path p = base ? fs::path(base) : fs::temp_directory_path() / "sfd_tests";
    p /= name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

FieldMap smallMap() {
    FieldMap m;
    m.grid = GridSpec::equiangular(2, 2);
    m.values = {0.0, 1.0, 0.5, 0.25};
    m.degree = 3;
    m.seed = 11;
    m.time = 0.5;
    return m;
}

}  // namespace

TEST_CASE("coefficient CSV round trip") {
    const fs::path dir = scratchDir("coef_csv");
    const CoefficientSet c =
        sampleCombined({0.5, 1e-5, AlgebraicSpectrum{1, 1, 2.3}, AlgebraicSpectrum{1e4, 1e4, 2.5}}, 12, 1e-4, RngStream(3, 1));
    writeCoefficientsCsv(c, dir / "c.csv");
    CHECK(slurp(dir / "c.csv").rfind("ell,m,re,im\n", 0) == 0);
    CHECK(readCoefficientsCsv(dir / "c.csv") == c);
    CHECK_FALSE(fs::exists(dir / "c.csv.partial"));
}

TEST_CASE("coefficient binary round trip and layout") {
    const fs::path dir = scratchDir("coef_bin");
    CoefficientSet c(2);
    c(0, 0) = 1.5;
    c(2, 1) = {-0.25, 3.0};
    writeCoefficientsBinary(c, dir / "c.sfdc");
    const std::string bytes = slurp(dir / "c.sfdc");
    REQUIRE(bytes.size() == 12 + 6 * 16);
    CHECK(bytes.substr(0, 4) == "SFDC");
    CHECK(bytes[4] == 1);
    CHECK(bytes[8] == 2);
    CHECK(readCoefficientsBinary(dir / "c.sfdc") == c);

    std::ofstream(dir / "bad.sfdc", std::ios::binary) << "SFDX";
    CHECK_THROWS_AS(readCoefficientsBinary(dir / "bad.sfdc"), InputError);
    CHECK_THROWS_AS(readCoefficientsBinary(dir / "missing.sfdc"), IoError);
}

TEST_CASE("negative orders follow the conjugation rule") {
    CoefficientSet c(3);
    c(3, 1) = {0.5, 2.0};
    c(3, 2) = {1.0, -1.0};
    CHECK(c.at(3, -1) == std::complex<double>(-0.5, 2.0));
    CHECK(c.at(3, -2) == std::complex<double>(1.0, 1.0));
    CHECK_THROWS_AS(c.at(4, 0), DomainError);
}

TEST_CASE("map CSV") {
    const fs::path dir = scratchDir("map_csv");
    FieldMap z;
    z.grid = GridSpec::equiangular(2, 1);
    z.values = {0.0, 0.0};
    writeMapCsv(z, dir / "z.csv");
    CHECK(slurp(dir / "z.csv") == "theta,phi,value\n0,0,0\n3.1415926535897931,0,0\n");

    CoefficientSet c(6);
    c(4, 2) = {0.1234567890123, -1.0 / 3.0};
    const FieldMap f = synthesize(c, GridSpec::equiangular(7, 13));
    writeMapCsv(f, dir / "f.csv");
    const FieldMap back = readMapCsv(dir / "f.csv");
    CHECK(back.values == f.values);
    CHECK(back.grid.nLat == 7);
    CHECK(back.grid.nLon == 13);
}

TEST_CASE("CSV output ignores the C locale setting") {
    const fs::path dir = scratchDir("locale");
    const char* previous = std::setlocale(LC_NUMERIC, nullptr);
    const std::string saved = previous ? previous : "C";
    for (const char* name : {"de_DE.UTF-8", "fr_FR.UTF-8"}) std::setlocale(LC_NUMERIC, name);
    FieldMap m = smallMap();
    writeMapCsv(m, dir / "m.csv");
    std::setlocale(LC_NUMERIC, saved.c_str());
    CHECK(slurp(dir / "m.csv").find("0.5") != std::string::npos);
    CHECK(slurp(dir / "m.csv").find("0,5") == std::string::npos);
}

TEST_CASE("PPM bytes for a 2x2 gray map") {
    const fs::path dir = scratchDir("ppm");
    ImageOptions opt;
    opt.colormap = Colormap::Gray;
    opt.vmin = 0.0;
    opt.vmax = 1.0;
    opt.png = false;
    writeMapImage(smallMap(), dir / "m.ppm", opt);
    const std::string expect = std::string("P6\n2 2\n255\n") +
                               std::string("\x00\x00\x00\xff\xff\xff\x80\x80\x80\x40\x40\x40", 12);
    CHECK(slurp(dir / "m.ppm") == expect);
    const std::string side = slurp(dir / "m.json");
    for (const char* key : {"\"time\"", "\"L\"", "\"seed\"", "\"vmin\"", "\"vmax\"", "\"colormap\": \"gray\""})
        CHECK(side.find(key) != std::string::npos);
}

TEST_CASE("constant map renders in one colour") {
    const fs::path dir = scratchDir("const");
    FieldMap m = smallMap();
    m.values.assign(4, 2.0);
    ImageOptions opt;
    opt.png = pngSupported();
    writeMapImage(m, dir / "c.ppm", opt);
    const std::string bytes = slurp(dir / "c.ppm");
    const std::string pixels = bytes.substr(bytes.size() - 12);
    for (int i = 1; i < 4; ++i) CHECK(pixels.substr(3 * i, 3) == pixels.substr(0, 3));
    if (pngSupported()) CHECK(slurp(dir / "c.png").substr(1, 3) == "PNG");
}

TEST_CASE("colormap endpoints") {
    CHECK(colorFor(Colormap::Viridis, 0.0) == std::array<std::uint8_t, 3>{68, 1, 84});
    CHECK(colorFor(Colormap::Viridis, 1.0) == std::array<std::uint8_t, 3>{253, 231, 37});
    CHECK(colorFor(Colormap::Viridis, -3.0) == colorFor(Colormap::Viridis, 0.0));
    CHECK(colorFor(Colormap::Diverging, 0.5) == std::array<std::uint8_t, 3>{221, 221, 221});
    CHECK((colormapFromString("gray") == Colormap::Gray));
    CHECK_THROWS_AS(colormapFromString("jet"), InputError);
}

TEST_CASE("unwritable path leaves nothing behind") {
    const fs::path dir = scratchDir("unwritable");
    const fs::path target = dir / "no_such_dir" / "m.ppm";
    CHECK_THROWS_AS(writeMapImage(smallMap(), target), IoError);
    CHECK_FALSE(fs::exists(target));
    try {
        writeMapCsv(smallMap(), target);
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("no_such_dir") != std::string::npos);
    }
}
