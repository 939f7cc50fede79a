#pragma once

#include <complex>
#include <span>

namespace sfd {

/// Parameters of the two-parameter Mittag-Leffler function E_{alpha,beta}.
/// The model only needs alpha in (0,1]; beta must be positive.
struct MLParams {
    double alpha = 1.0;
    double beta = 1.0;

    /// Throws DomainError unless alpha in (0,1] and beta > 0.
    void validate() const;
};

/// A point on the unit sphere: colatitude theta in [0,pi], longitude phi in [0,2pi).
struct SphPoint {
    double theta = 0.0;
    double phi = 0.0;

    struct Vec3 {
        double x, y, z;
    };
    Vec3 unitVector() const;
    double dot(const SphPoint& other) const;
};

/// Eigenvalue of -Laplace-Beltrami for degree ell: ell(ell+1).
constexpr double lambda(int ell) {
    return static_cast<double>(ell) * static_cast<double>(ell + 1);
}

/// Gamma function for positive finite arguments.
double gamma(double x);

/// 1/Gamma(z) for any real z; exactly zero at the poles z = 0,-1,-2,...
double reciprocalGamma(double z);

/// sin(pi*z), exact zero at integers.
double sinPi(double z);

/// Legendre polynomial P_ell(x) by the three-term recurrence. |x| <= 1.
double legendreP(int ell, double x);

/// N_{ell,m}(x) = sqrt((2ell+1)(ell-m)!/(ell+m)!) * P_{ell,m}(x), with the
/// Condon-Shortley phase (-1)^m included in P_{ell,m}. This is the radial
/// factor of Y_{ell,m} normalised against the unit-mass surface measure.
/// Computed through normalised recurrences; finite for ell well beyond 2000.
double assocLegendreNormalized(int ell, int m, double x);

/// Fills out[k] = N_{m+k,m}(x) for k = 0..L-m with one pass of the same recurrence.
/// `out` must hold at least L-m+1 values.
void assocLegendreColumn(int m, int L, double x, std::span<double> out);

/// Complex spherical harmonic Y_{ell,m}(theta,phi), |m| <= ell, orthonormal with
/// respect to the surface measure of total mass 1 (so Y_{0,0} = 1). Differs from
/// the common unit-sphere-area convention by a factor sqrt(4 pi). Negative
/// orders follow Y_{ell,-m} = (-1)^m conj(Y_{ell,m}).
std::complex<double> sphericalHarmonic(int ell, int m, const SphPoint& p);

/// E_{alpha,beta}(-x) for x >= 0, relative error <= 1e-10 on [0, 1e6].
/// Throws DomainError for invalid parameters or x, AccuracyError when no
/// evaluation route reaches tolerance.
double mlNeg(const MLParams& params, double x);

/// Classical Mittag-Leffler E_alpha(-x) = E_{alpha,1}(-x).
inline double mlNeg(double alpha, double x) { return mlNeg(MLParams{alpha, 1.0}, x); }

namespace detail {

/// One evaluation route of E_{alpha,beta}(-x) together with an error estimate.
/// `ok` is false when the route cannot reach its internal tolerance.
struct MLEstimate {
    double value = 0.0;
    double error = 0.0;
    bool ok = false;
};

/// Power series with compensated summation.
MLEstimate mlSeries(const MLParams& params, double x);
/// Large-x algebraic expansion truncated at its smallest term.
MLEstimate mlAsymptotic(const MLParams& params, double x);
/// Real-axis integral representation (alpha < 1, beta < 1 + alpha).
MLEstimate mlIntegral(const MLParams& params, double x);

}  // namespace detail

}  // namespace sfd
