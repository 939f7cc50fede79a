#include "sfd/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sfd/error.hpp"

namespace sfd {

void MLParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("Mittag-Leffler: alpha must lie in (0,1], got " + std::to_string(alpha));
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw DomainError("Mittag-Leffler: beta must be positive, got " + std::to_string(beta));
}

SphPoint::Vec3 SphPoint::unitVector() const {
    const double s = std::sin(theta);
    return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

double SphPoint::dot(const SphPoint& other) const {
    const Vec3 a = unitVector();
    const Vec3 b = other.unitVector();
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

double gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("gamma: argument must be positive and finite, got " + std::to_string(x));
    return std::tgamma(x);
}

double sinPi(double z) {
    const double n = std::nearbyint(z);
    const double f = z - n;  // exact, |f| <= 1/2
    if (f == 0.0) return 0.0;
    const double s = std::sin(std::numbers::pi * f);
    return std::fmod(n, 2.0) == 0.0 ? s : -s;
}

double reciprocalGamma(double z) {
    if (z > 0.0) {
        if (z < 171.0) return 1.0 / std::tgamma(z);
        return std::exp(-std::lgamma(z));
    }
    // Reflection: 1/Gamma(z) = Gamma(1-z) sin(pi z) / pi.
    const double s = sinPi(z);
    if (s == 0.0) return 0.0;
    const double w = 1.0 - z;
    if (w < 171.0) return std::tgamma(w) * s / std::numbers::pi;
    return std::copysign(std::exp(std::lgamma(w) + std::log(std::abs(s) / std::numbers::pi)), s);
}

double legendreP(int ell, double x) {
    if (ell < 0) throw DomainError("legendreP: degree must be non-negative");
    if (!(std::abs(x) <= 1.0)) throw DomainError("legendreP: |x| must not exceed 1");
    if (ell == 0) return 1.0;
    double pPrev = 1.0;
    double p = x;
    for (int k = 2; k <= ell; ++k) {
        const double next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * pPrev) / k;
        pPrev = p;
        p = next;
    }
    return p;
}

double assocLegendreNormalized(int ell, int m, double x) {
    if (ell < 0 || m < 0 || m > ell)
        throw DomainError("assocLegendreNormalized: need 0 <= m <= ell");
    if (!(std::abs(x) <= 1.0)) throw DomainError("assocLegendreNormalized: |x| must not exceed 1");

    const double s = std::sqrt((1.0 - x) * (1.0 + x));
    // Sectoral seed N_{m,m} = (-1)^m sqrt((2m+1) prod_{k<=m} (2k-1)/(2k)) s^m.
    double pmm = 1.0;
    for (int k = 1; k <= m; ++k) pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
    if (ell == m) return pmm;

    double pPrev = pmm;
    double p = std::sqrt(2.0 * m + 3.0) * x * pmm;
    for (int l = m + 2; l <= ell; ++l) {
        const double lm = static_cast<double>(l - m);
        const double lp = static_cast<double>(l + m);
        const double a = std::sqrt((2.0 * l + 1.0) * (2.0 * l - 1.0) / (lm * lp));
        const double b = std::sqrt((2.0 * l + 1.0) * (lp - 1.0) * (lm - 1.0) / (lm * lp * (2.0 * l - 3.0)));
        const double next = a * x * p - b * pPrev;
        pPrev = p;
        p = next;
    }
    return p;
}

void assocLegendreColumn(int m, int L, double x, std::span<double> out) {
    if (m < 0 || m > L) throw DomainError("assocLegendreColumn: need 0 <= m <= L");
    if (out.size() < static_cast<std::size_t>(L - m + 1))
        throw DomainError("assocLegendreColumn: output span too short");
    const double s = std::sqrt((1.0 - x) * (1.0 + x));
    double pmm = 1.0;
    for (int k = 1; k <= m; ++k) pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
    out[0] = pmm;
    if (L == m) return;
    out[1] = std::sqrt(2.0 * m + 3.0) * x * pmm;
    for (int l = m + 2; l <= L; ++l) {
        const double lm = static_cast<double>(l - m);
        const double lp = static_cast<double>(l + m);
        const double a = std::sqrt((2.0 * l + 1.0) * (2.0 * l - 1.0) / (lm * lp));
        const double b = std::sqrt((2.0 * l + 1.0) * (lp - 1.0) * (lm - 1.0) / (lm * lp * (2.0 * l - 3.0)));
        out[l - m] = a * x * out[l - m - 1] - b * out[l - m - 2];
    }
}

std::complex<double> sphericalHarmonic(int ell, int m, const SphPoint& p) {
    if (ell < 0 || std::abs(m) > ell) throw DomainError("sphericalHarmonic: need |m| <= ell");
    const int am = std::abs(m);
    const double radial = assocLegendreNormalized(ell, am, std::cos(p.theta));
    const double arg = static_cast<double>(am) * p.phi;
    std::complex<double> y(radial * std::cos(arg), radial * std::sin(arg));
    if (m < 0) {
        y = std::conj(y);
        if (am % 2 == 1) y = -y;
    }
    return y;
}

}  // namespace sfd
