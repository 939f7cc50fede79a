#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sfd {

/// Power spectrum X_0 = head, X_ell = coeff * ell^{-kappa} for ell >= 1.
/// Used both for the initial field (C_ell) and the driving noise (A_ell).
struct AlgebraicSpectrum {
    double head = 0.0;
    double coeff = 0.0;
    double kappa = 3.0;

    /// Throws DomainError unless head, coeff >= 0 and kappa > 2.
    void validate() const;
    double operator()(int ell) const;
    bool isZero() const { return head == 0.0 && coeff == 0.0; }
};

/// Either an algebraic spectrum or a plain tabulated list (zero beyond its end).
/// Bounds are only defined for the algebraic form.
class Spectrum {
public:
    Spectrum() = default;
    Spectrum(const AlgebraicSpectrum& s);  // NOLINT: implicit by design of the model API
    static Spectrum tabulated(std::vector<double> values);

    double operator()(int ell) const;
    const AlgebraicSpectrum* algebraic() const { return table_.empty() ? &algebraic_ : nullptr; }
    /// The algebraic form, or DomainError naming `what` if tabulated.
    const AlgebraicSpectrum& requireAlgebraic(const char* what) const;
    bool isZero() const;
    void validate() const;

private:
    AlgebraicSpectrum algebraic_{};
    std::vector<double> table_;
};

/// sqrt(coeff * (2/(kappa-2) + 1/(kappa-1))): the tail constant C~_{kappa1} or A~_{kappa2}.
double tailConstant(const AlgebraicSpectrum& s);

/// M_alpha = Gamma(1+alpha)^2 / |2 alpha - 1|, with Gamma(3/2)^2 at alpha = 1/2.
double mAlpha(double alpha);

/// gamma_alpha(kappa2): kappa2+2 (alpha<1/2), kappa2+2/alpha-2 (alpha>1/2), kappa2 (alpha=1/2).
double gammaAlphaKappa(double alpha, double kappa2);

/// psi^H_alpha(t) = Gamma(1+alpha) t^{-alpha}.
double psiH(double alpha, double t);

/// psi^I_alpha(t), including the K(t) branch at alpha = 1/2.
double psiI(double alpha, double t);

/// Bound on the homogeneous truncation error Q^H_L(t).
double boundQH(int L, double t, double alpha, const AlgebraicSpectrum& specC);

/// Bound on the inhomogeneous truncation error Q^I_L(t), t > tau.
double boundQI(int L, double t, double tau, double alpha, const AlgebraicSpectrum& specA);

enum class BoundCase { I, II, III };
std::string toString(BoundCase c);

struct CombinedBound {
    double value = 0.0;
    BoundCase regime = BoundCase::I;
    double exponent = 0.0;  ///< log-log slope in L of the bound
};

/// Bound on the full truncation error Q_L(t). Boundary points go to the earlier
/// case. Throws DomainError naming the violated condition when no case applies
/// (t <= lambda_L^{-1/alpha} while tau < lambda_L^{-1/alpha}).
CombinedBound boundQCombined(int L, double t, double tau, double alpha,
                             const AlgebraicSpectrum& specC, const AlgebraicSpectrum& specA);

/// q(t) sqrt(h), q(t) = sqrt(c C~^2 / t + (1+c) A~^2).
double incrementBound(double t, double h, double tau, double alpha, const AlgebraicSpectrum& specC,
                      const AlgebraicSpectrum& specA, double c);

/// The generic constant c in E_{alpha,beta}(-x) <= c/(1+x), measured for beta = alpha
/// as max over a log grid x in [1e-6, 1e8] of (1+x) E_{alpha,alpha}(-x).
/// Computed once per alpha and cached.
double measuredIncrementConstant(double alpha);

struct HolderConstant {
    double value = 0.0;       ///< K_{beta*}, including the tail remainder bound
    double k1 = 0.0;          ///< K^{(1)} partial sum + remainder
    double k2 = 0.0;          ///< K^{(2)} partial sum + remainder
    double remainder1 = 0.0;  ///< integral tail bound included in k1
    double remainder2 = 0.0;
};

/// K_{beta*} = 2^{4-beta*} (K1 + (t - tau) K2 [t > tau]) with K_j = sum ell^{1+2beta*} X_ell
/// truncated at lmax plus an integral bound on the remainder.
/// Requires kappa1, kappa2 > 2(1 + beta*).
HolderConstant holderEnvelope(double betaStar, double t, double tau, const AlgebraicSpectrum& specC,
                              const AlgebraicSpectrum& specA, int lmax = 100000);

/// Exponents of the three regimes of the combined bound.
struct BoundExponents {
    double caseI = 0.0;    ///< -(kappa1-2)/2
    double caseII = 0.0;   ///< -kappa_hat/2
    double caseIII = 0.0;  ///< -kappa_alpha/2
};
BoundExponents boundExponents(double alpha, double kappa1, double kappa2);

}  // namespace sfd
