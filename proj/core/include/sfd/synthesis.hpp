#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sfd/coefficients.hpp"
#include "sfd/specfun.hpp"

namespace sfd {

enum class LatitudeKind {
    Equiangular,    ///< theta_j = pi j / (nLat - 1), poles included
    GaussLegendre,  ///< cos(theta_j) are the Gauss-Legendre nodes of order nLat
    Custom,         ///< explicit colatitudes in GridSpec::customTheta
};

/// Latitude-longitude grid. Longitudes are phi_k = lonOffset + 2 pi k / nLon.
struct GridSpec {
    int nLat = 2;
    int nLon = 1;
    LatitudeKind kind = LatitudeKind::Equiangular;
    std::vector<double> customTheta;
    double lonOffset = 0.0;

    static GridSpec equiangular(int nLat, int nLon);
    static GridSpec gaussLegendre(int nLat, int nLon);

    void validate() const;
    std::vector<double> colatitudes() const;
    double longitude(int k) const;
    /// Quadrature weights in colatitude normalised to sum 1 (Gauss-Legendre only).
    std::vector<double> latitudeWeights() const;
};

/// Gauss-Legendre nodes (ascending) and weights on [-1,1], weights summing to 2.
void gaussLegendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Real field sampled on a grid, row-major (latitude rings of nLon values).
struct FieldMap {
    GridSpec grid;
    std::vector<double> values;
    double time = 0.0;
    int degree = -1;
    std::uint64_t seed = 0;

    double& at(int j, int k) { return values[static_cast<std::size_t>(j) * grid.nLon + k]; }
    double at(int j, int k) const { return values[static_cast<std::size_t>(j) * grid.nLon + k]; }
};

/// Ring-by-ring synthesis of the real field with the given coefficients.
/// Rings are distributed with parallelFor; the result is independent of the
/// worker count.
FieldMap synthesize(const CoefficientSet& coeffs, const GridSpec& grid);

/// Direct pointwise evaluation through sphericalHarmonic; slow, used as a reference.
double evaluateNaive(const CoefficientSet& coeffs, const SphPoint& p);

enum class Colormap { Gray, Viridis, Diverging };
std::string toString(Colormap c);
Colormap colormapFromString(const std::string& name);

struct ImageOptions {
    Colormap colormap = Colormap::Viridis;
    std::optional<double> vmin;  ///< defaults to the map minimum
    std::optional<double> vmax;  ///< defaults to the map maximum
    bool png = true;             ///< also write a PNG when the build has libpng
};

/// RGB of value u in [0,1] (clamped) for the given colormap.
std::array<std::uint8_t, 3> colorFor(Colormap c, double u);

/// Writes `path` as binary PPM (P6, maxval 255), equirectangular with the north
/// pole on the first row, plus a sidecar `<stem>.json` with the colour scaling
/// and, when enabled, `<stem>.png`. No partial file is left on failure.
void writeMapImage(const FieldMap& map, const std::filesystem::path& path, const ImageOptions& options = {});

/// True when this build links a PNG encoder.
bool pngSupported();

/// CSV with header `theta,phi,value`, latitude-major, 17 significant digits.
void writeMapCsv(const FieldMap& map, const std::filesystem::path& path);
FieldMap readMapCsv(const std::filesystem::path& path);

}  // namespace sfd
