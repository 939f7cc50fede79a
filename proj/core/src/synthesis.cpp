#include "sfd/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "sfd/error.hpp"
#include "sfd/parallel.hpp"

namespace sfd {

GridSpec GridSpec::equiangular(int nLat, int nLon) {
    GridSpec g;
    g.nLat = nLat;
    g.nLon = nLon;
    g.kind = LatitudeKind::Equiangular;
    return g;
}

GridSpec GridSpec::gaussLegendre(int nLat, int nLon) {
    GridSpec g = equiangular(nLat, nLon);
    g.kind = LatitudeKind::GaussLegendre;
    return g;
}

void GridSpec::validate() const {
    if (nLon < 1) throw DomainError("grid: nLon must be at least 1");
    switch (kind) {
        case LatitudeKind::Equiangular:
            if (nLat < 2) throw DomainError("grid: nLat must be at least 2");
            break;
        case LatitudeKind::GaussLegendre:
            if (nLat < 1) throw DomainError("grid: nLat must be at least 1");
            break;
        case LatitudeKind::Custom:
            if (static_cast<int>(customTheta.size()) != nLat || nLat < 1)
                throw DomainError("grid: customTheta must hold nLat colatitudes");
            for (double th : customTheta)
                if (!(th >= 0.0 && th <= std::numbers::pi)) throw DomainError("grid: colatitude outside [0,pi]");
            break;
    }
}

void gaussLegendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw DomainError("gaussLegendre: order must be positive");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            // one more derivative evaluation at the converged node
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
}

std::vector<double> GridSpec::colatitudes() const {
    std::vector<double> th(nLat);
    switch (kind) {
        case LatitudeKind::Equiangular:
            for (int j = 0; j < nLat; ++j) th[j] = std::numbers::pi * j / (nLat - 1);
            break;
        case LatitudeKind::GaussLegendre: {
            std::vector<double> x, w;
            sfd::gaussLegendre(nLat, x, w);
            for (int j = 0; j < nLat; ++j) th[j] = std::acos(x[nLat - 1 - j]);
            break;
        }
        case LatitudeKind::Custom:
            th = customTheta;
            break;
    }
    return th;
}

double GridSpec::longitude(int k) const { return lonOffset + 2.0 * std::numbers::pi * k / nLon; }

std::vector<double> GridSpec::latitudeWeights() const {
    if (kind != LatitudeKind::GaussLegendre) throw DomainError("grid: weights exist only for Gauss-Legendre latitudes");
    std::vector<double> x, w;
    sfd::gaussLegendre(nLat, x, w);
    std::vector<double> out(nLat);
    for (int j = 0; j < nLat; ++j) out[j] = 0.5 * w[nLat - 1 - j];
    return out;
}

namespace {

bool isPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place radix-2 transform with exponent sign +1 and no scaling.
void inverseFft(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                // exact twiddles from sin/cos rather than accumulated rotation
                const std::complex<double> w(std::cos(ang * k), std::sin(ang * k));
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

}  // namespace

FieldMap synthesize(const CoefficientSet& coeffs, const GridSpec& grid) {
    grid.validate();
    const int L = coeffs.degree();
    if (L < 0) throw DomainError("synthesize: empty coefficient set");
    const int nLon = grid.nLon;
    const std::vector<double> theta = grid.colatitudes();

    FieldMap map;
    map.grid = grid;
    map.values.assign(static_cast<std::size_t>(grid.nLat) * nLon, 0.0);
    map.time = coeffs.time();
    map.degree = L;
    map.seed = coeffs.seed();

    const bool useFft = isPowerOfTwo(nLon) && nLon >= 4 * L;
    std::vector<double> cosTab(nLon), sinTab(nLon);
    for (int r = 0; r < nLon; ++r) {
        const double a = 2.0 * std::numbers::pi * r / nLon;
        cosTab[r] = std::cos(a);
        sinTab[r] = std::sin(a);
    }
    // e^{i m lonOffset}
    std::vector<std::complex<double>> shift(L + 1, 1.0);
    if (grid.lonOffset != 0.0)
        for (int m = 1; m <= L; ++m) shift[m] = std::polar(1.0, m * grid.lonOffset);

    parallelFor(static_cast<std::size_t>(grid.nLat), [&](std::size_t j) {
        const double x = std::cos(theta[j]);
        std::vector<double> column(L + 1);
        std::vector<std::complex<double>> ring(L + 1);
        for (int m = 0; m <= L; ++m) {
            assocLegendreColumn(m, L, x, column);
            std::complex<double> acc = 0.0;
            for (int ell = m; ell <= L; ++ell) acc += coeffs(ell, m) * column[ell - m];
            ring[m] = acc * shift[m];
        }
        double* out = map.values.data() + j * nLon;
        if (useFft) {
            std::vector<std::complex<double>> bins(nLon, 0.0);
            bins[0] += ring[0].real();
            for (int m = 1; m <= L; ++m) bins[m % nLon] += 2.0 * ring[m];
            inverseFft(bins);
            for (int k = 0; k < nLon; ++k) out[k] = bins[k].real();
        } else {
            for (int k = 0; k < nLon; ++k) {
                double v = ring[0].real();
                long idx = 0;
                for (int m = 1; m <= L; ++m) {
                    idx += k;
                    if (idx >= nLon) idx -= nLon;
                    v += 2.0 * (ring[m].real() * cosTab[idx] - ring[m].imag() * sinTab[idx]);
                }
                out[k] = v;
            }
        }
    });
    return map;
}

double evaluateNaive(const CoefficientSet& coeffs, const SphPoint& p) {
    double v = 0.0;
    for (int ell = 0; ell <= coeffs.degree(); ++ell) {
        v += coeffs(ell, 0).real() * sphericalHarmonic(ell, 0, p).real();
        for (int m = 1; m <= ell; ++m) v += 2.0 * (coeffs(ell, m) * sphericalHarmonic(ell, m, p)).real();
    }
    return v;
}

}  // namespace sfd
