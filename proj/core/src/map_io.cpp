#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#ifdef SFD_HAVE_PNG
#include <png.h>
#endif

#include "sfd/error.hpp"
#include "sfd/synthesis.hpp"
#include "text_io.hpp"

namespace sfd {

namespace {

struct Anchor {
    double at;
    double r, g, b;
};

// Sampled from matplotlib's viridis.
constexpr Anchor kViridis[] = {
    {0.000, 68, 1, 84},    {0.125, 71, 44, 122},  {0.250, 59, 81, 139},
    {0.375, 44, 113, 142}, {0.500, 33, 144, 141}, {0.625, 39, 173, 129},
    {0.750, 92, 200, 99},  {0.875, 170, 220, 50}, {1.000, 253, 231, 37},
};

constexpr Anchor kDiverging[] = {
    {0.0, 59, 76, 192},
    {0.5, 221, 221, 221},
    {1.0, 180, 4, 38},
};

template <std::size_t N>
std::array<std::uint8_t, 3> interpolate(const Anchor (&table)[N], double u) {
    std::size_t i = 1;
    while (i < N - 1 && u > table[i].at) ++i;
    const Anchor& a = table[i - 1];
    const Anchor& b = table[i];
    const double w = (u - a.at) / (b.at - a.at);
    auto mix = [w](double x, double y) { return static_cast<std::uint8_t>(std::lround(x + w * (y - x))); };
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

std::filesystem::path sibling(const std::filesystem::path& path, const char* ext) {
    std::filesystem::path p = path;
    p.replace_extension(ext);
    return p;
}

#ifdef SFD_HAVE_PNG
void appendBytes(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(data), length);
}

std::string encodePng(const std::vector<std::uint8_t>& rgb, int width, int height) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png: cannot create encoder");
    png_infop info = png_create_info_struct(png);
    std::string out;
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, info ? &info : nullptr);
        throw IoError("png: encoding failed");
    }
    png_set_write_fn(png, &out, appendBytes, nullptr);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int r = 0; r < height; ++r)
        png_write_row(png, const_cast<png_bytep>(rgb.data() + static_cast<std::size_t>(r) * width * 3));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}
#endif

}  // namespace

std::string toString(Colormap c) {
    switch (c) {
        case Colormap::Gray: return "gray";
        case Colormap::Viridis: return "viridis";
        case Colormap::Diverging: return "diverging";
    }
    return "viridis";
}

Colormap colormapFromString(const std::string& name) {
    if (name == "gray" || name == "grey") return Colormap::Gray;
    if (name == "viridis") return Colormap::Viridis;
    if (name == "diverging") return Colormap::Diverging;
    throw InputError("unknown colormap '" + name + "' (expected gray, viridis or diverging)");
}

std::array<std::uint8_t, 3> colorFor(Colormap c, double u) {
    if (!(u >= 0.0)) u = 0.0;
    if (u > 1.0) u = 1.0;
    switch (c) {
        case Colormap::Gray: {
            const auto g = static_cast<std::uint8_t>(std::lround(255.0 * u));
            return {g, g, g};
        }
        case Colormap::Viridis: return interpolate(kViridis, u);
        case Colormap::Diverging: return interpolate(kDiverging, u);
    }
    return {0, 0, 0};
}

bool pngSupported() {
#ifdef SFD_HAVE_PNG
    return true;
#else
    return false;
#endif
}

void writeMapImage(const FieldMap& map, const std::filesystem::path& path, const ImageOptions& options) {
    const int h = map.grid.nLat;
    const int w = map.grid.nLon;
    if (map.values.size() != static_cast<std::size_t>(h) * w) throw DomainError("writeMapImage: value count does not match grid");

    double lo = options.vmin.value_or(0.0), hi = options.vmax.value_or(0.0);
    if (!options.vmin || !options.vmax) {
        const auto [mn, mx] = std::minmax_element(map.values.begin(), map.values.end());
        if (!options.vmin) lo = *mn;
        if (!options.vmax) hi = *mx;
    }
    const double span = hi - lo;

    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(h) * w * 3);
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        const double u = span > 0.0 ? (map.values[i] - lo) / span : 0.5;
        const auto px = colorFor(options.colormap, u);
        std::copy(px.begin(), px.end(), rgb.begin() + static_cast<std::ptrdiff_t>(3 * i));
    }

    std::string ppm = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    ppm.append(reinterpret_cast<const char*>(rgb.data()), rgb.size());

    nlohmann::ordered_json side;
    side["time"] = map.time;
    side["L"] = map.degree;
    side["seed"] = map.seed;
    side["vmin"] = lo;
    side["vmax"] = hi;
    side["colormap"] = toString(options.colormap);
    side["width"] = w;
    side["height"] = h;

    io::writeFileAtomically(path, ppm);
#ifdef SFD_HAVE_PNG
    if (options.png) io::writeFileAtomically(sibling(path, ".png"), encodePng(rgb, w, h));
#endif
    io::writeFileAtomically(sibling(path, ".json"), side.dump(2) + "\n");
}

void writeMapCsv(const FieldMap& map, const std::filesystem::path& path) {
    const std::vector<double> theta = map.grid.colatitudes();
    std::string out = "theta,phi,value\n";
    out.reserve(out.size() + map.values.size() * 64);
    for (int j = 0; j < map.grid.nLat; ++j) {
        const std::string th = io::formatDouble(theta[j]);
        for (int k = 0; k < map.grid.nLon; ++k) {
            out += th;
            out += ',';
            out += io::formatDouble(map.grid.longitude(k));
            out += ',';
            out += io::formatDouble(map.at(j, k));
            out += '\n';
        }
    }
    io::writeFileAtomically(path, out);
}

FieldMap readMapCsv(const std::filesystem::path& path) {
    const std::string text = io::readFile(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("theta,phi,value", 0) != 0)
        throw InputError("'" + path.string() + "': missing header theta,phi,value");
    std::vector<double> thetas, phis, values;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos) throw InputError("'" + path.string() + "': malformed row '" + line + "'");
        const std::string_view sv(line);
        thetas.push_back(io::parseDouble(sv.substr(0, c1)));
        phis.push_back(io::parseDouble(sv.substr(c1 + 1, c2 - c1 - 1)));
        values.push_back(io::parseDouble(sv.substr(c2 + 1)));
    }
    if (values.empty()) throw InputError("'" + path.string() + "': no data rows");

    FieldMap map;
    std::vector<double> ring;
    for (double th : thetas)
        if (ring.empty() || ring.back() != th) ring.push_back(th);
    const std::size_t nLat = ring.size();
    if (values.size() % nLat != 0) throw InputError("'" + path.string() + "': rows do not form a grid");
    map.grid.kind = LatitudeKind::Custom;
    map.grid.customTheta = ring;
    map.grid.nLat = static_cast<int>(nLat);
    map.grid.nLon = static_cast<int>(values.size() / nLat);
    map.grid.lonOffset = phis.front();
    map.values = std::move(values);
    return map;
}

}  // namespace sfd
