#pragma once

#include <utility>

#include "sfd/coefficients.hpp"
#include "sfd/rng.hpp"
#include "sfd/spectra.hpp"

namespace sfd {

/// One problem instance: fractional order alpha, noise onset tau, the power
/// spectrum C of the initial field and A of the driving Q-Wiener noise.
struct FractionalModel {
    double alpha = 0.5;
    double tau = 1e-5;
    Spectrum specC;
    Spectrum specA;

    /// Throws DomainError unless alpha in (0,1], tau > 0 and both spectra are valid.
    void validate() const;
};

/// sigma^2_{ell,t,alpha} = int_0^t E_alpha(-lambda_ell r^alpha)^2 dr by adaptive quadrature.
/// Results are memoised per (ell, t, alpha); the cache is shared and thread-safe.
double sigmaSquared(int ell, double t, double alpha);

/// E_alpha(-lambda_ell t^alpha), memoised alongside sigmaSquared.
double decayFactor(int ell, double t, double alpha);

/// Closed-form upper bound on sigmaSquared for ell >= 1, t > 0. At alpha = 1/2 the
/// bound is only meaningful when lambda_ell^2 t > 1, see sigmaBoundApplies.
double sigmaSquaredBound(int ell, double t, double alpha);
bool sigmaBoundApplies(int ell, double t, double alpha);

/// int_0^s E_alpha(-lambda (r+h)^alpha) E_alpha(-lambda r^alpha) dr, the covariance of
/// the stochastic integrals at times s and s+h. Memoised like sigmaSquared.
double crossSigma(int ell, double s, double h, double alpha);

/// Drops every memoised quadrature value.
void clearSigmaCache();

/// Initial field: V_{l,0} = sqrt(C_l) Z1, V_{l,m} = sqrt(C_l/2)(Z1 - i Z2).
CoefficientSet sampleInitialCoefficients(const Spectrum& specC, int L, const RngStream& rng);

/// Multiplies every degree by E_alpha(-lambda_l t^alpha).
CoefficientSet evolveHomogeneous(const CoefficientSet& init, double t, double alpha);

/// Stochastic-integral part; zero for t <= tau.
CoefficientSet sampleInhomogeneous(const Spectrum& specA, int L, double t, double tau, double alpha,
                                   const RngStream& rng);

/// Full solution coefficients at time t > 0.
CoefficientSet sampleCombined(const FractionalModel& model, int L, double t, const RngStream& rng);

/// Jointly distributed solution coefficients at t and t+h. The first element is
/// bit-identical to sampleCombined(model, L, t, rng).
std::pair<CoefficientSet, CoefficientSet> sampleCombinedPair(const FractionalModel& model, int L,
                                                             double t, double h, const RngStream& rng);

/// C_l E_alpha(-lambda_l t^alpha)^2 + [t > tau] A_l sigma^2_{l,t-tau,alpha}.
double coefficientVariance(const FractionalModel& model, int ell, double t);

/// sum_{l<=Lmax} (2l+1) coefficientVariance(l,t) P_l(cosAngle).
double covarianceFunction(const FractionalModel& model, double t, double cosAngle, int Lmax);

struct SeriesValue {
    double value = 0.0;      ///< partial sum up to Lmax
    double remainder = 0.0;  ///< upper bound on the omitted terms
};

/// Var[U(x,t) - U(y,t)] for points at geodesic distance theta, i.e.
/// 2 sum (2l+1) var_l (1 - P_l(cos theta)), evaluated with a cancellation-free
/// recurrence for 1 - P_l. The remainder bounds the tail beyond Lmax using
/// 1 - P_l <= 2 and sigma^2 <= t - tau.
SeriesValue fieldDifferenceVariance(const FractionalModel& model, double t, double theta, int Lmax);

}  // namespace sfd
