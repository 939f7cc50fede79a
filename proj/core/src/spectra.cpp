#include "sfd/spectra.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "sfd/error.hpp"
#include "sfd/specfun.hpp"

namespace sfd {

namespace {

void requireAlpha(double alpha, const char* who) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError(std::string(who) + ": alpha must lie in (0,1], got " + std::to_string(alpha));
}

void requirePositiveTime(double t, const char* who) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError(std::string(who) + ": t must be positive, got " + std::to_string(t));
}

// lambda_L^{-1/alpha}
double criticalTime(int L, double alpha) { return std::pow(lambda(L), -1.0 / alpha); }

}  // namespace

void AlgebraicSpectrum::validate() const {
    if (!(head >= 0.0) || !(coeff >= 0.0) || !std::isfinite(head) || !std::isfinite(coeff))
        throw DomainError("spectrum: head and coeff must be finite and non-negative");
    if (!(kappa > 2.0) || !std::isfinite(kappa))
        throw DomainError("spectrum: kappa must exceed 2 for a summable spectrum, got " +
                          std::to_string(kappa));
}

double AlgebraicSpectrum::operator()(int ell) const {
    if (ell == 0) return head;
    if (ell == 1) return coeff;
    return coeff * std::pow(static_cast<double>(ell), -kappa);
}

Spectrum::Spectrum(const AlgebraicSpectrum& s) : algebraic_(s) {}

Spectrum Spectrum::tabulated(std::vector<double> values) {
    if (values.empty()) throw DomainError("spectrum: tabulated spectrum must not be empty");
    Spectrum s;
    s.table_ = std::move(values);
    return s;
}

double Spectrum::operator()(int ell) const {
    if (table_.empty()) return algebraic_(ell);
    return static_cast<std::size_t>(ell) < table_.size() ? table_[static_cast<std::size_t>(ell)] : 0.0;
}

const AlgebraicSpectrum& Spectrum::requireAlgebraic(const char* what) const {
    if (!table_.empty())
        throw DomainError(std::string(what) + " is only defined for algebraic spectra");
    return algebraic_;
}

bool Spectrum::isZero() const {
    if (table_.empty()) return algebraic_.isZero();
    for (double v : table_)
        if (v != 0.0) return false;
    return true;
}

void Spectrum::validate() const {
    if (table_.empty()) {
        algebraic_.validate();
        return;
    }
    for (double v : table_)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw DomainError("spectrum: tabulated values must be finite and non-negative");
}

double tailConstant(const AlgebraicSpectrum& s) {
    s.validate();
    return std::sqrt(s.coeff * (2.0 / (s.kappa - 2.0) + 1.0 / (s.kappa - 1.0)));
}

double mAlpha(double alpha) {
    requireAlpha(alpha, "mAlpha");
    if (alpha == 0.5) {
        const double g = gamma(1.5);
        return g * g;
    }
    const double g = gamma(1.0 + alpha);
    return g * g / std::abs(2.0 * alpha - 1.0);
}

double gammaAlphaKappa(double alpha, double kappa2) {
    requireAlpha(alpha, "gammaAlphaKappa");
    if (!(kappa2 > 2.0)) throw DomainError("gammaAlphaKappa: kappa2 must exceed 2");
    if (alpha < 0.5) return kappa2 + 2.0;
    if (alpha > 0.5) return kappa2 + 2.0 / alpha - 2.0;
    return kappa2;
}

double psiH(double alpha, double t) {
    requireAlpha(alpha, "psiH");
    requirePositiveTime(t, "psiH");
    return gamma(1.0 + alpha) * std::pow(t, -alpha);
}

double psiI(double alpha, double t) {
    requireAlpha(alpha, "psiI");
    requirePositiveTime(t, "psiI");
    const double m = mAlpha(alpha);
    if (alpha < 0.5) return std::sqrt(1.0 + m * std::pow(t, 1.0 - 2.0 * alpha));
    if (alpha > 0.5) return std::sqrt(1.0 + m);
    if (t > 1.0) return std::sqrt(1.0 + m * (2.0 + std::log(t)));
    return std::sqrt(1.0 + 2.0 * m);
}

double boundQH(int L, double t, double alpha, const AlgebraicSpectrum& specC) {
    if (L < 1) throw DomainError("boundQH: L must be at least 1");
    requireAlpha(alpha, "boundQH");
    requirePositiveTime(t, "boundQH");
    const double c = tailConstant(specC);
    const double Ld = static_cast<double>(L);
    if (t <= criticalTime(L, alpha)) return c * std::pow(Ld, -(specC.kappa - 2.0) / 2.0);
    return psiH(alpha, t) * c * std::pow(Ld, -(2.0 + specC.kappa) / 2.0);
}

double boundQI(int L, double t, double tau, double alpha, const AlgebraicSpectrum& specA) {
    if (L < 1) throw DomainError("boundQI: L must be at least 1");
    requireAlpha(alpha, "boundQI");
    if (!(tau > 0.0)) throw DomainError("boundQI: tau must be positive");
    if (!(t > tau)) throw DomainError("boundQI: requires t > tau");
    const double a = tailConstant(specA);
    const double Ld = static_cast<double>(L);
    if (t <= tau + criticalTime(L, alpha))
        return a * std::pow(Ld, -(specA.kappa + 2.0 / alpha - 2.0) / 2.0);
    return psiI(alpha, t - tau) * a * std::pow(Ld, -gammaAlphaKappa(alpha, specA.kappa) / 2.0);
}

std::string toString(BoundCase c) {
    switch (c) {
        case BoundCase::I: return "I";
        case BoundCase::II: return "II";
        case BoundCase::III: return "III";
    }
    return "?";
}

BoundExponents boundExponents(double alpha, double kappa1, double kappa2) {
    BoundExponents e;
    e.caseI = -(kappa1 - 2.0) / 2.0;
    e.caseII = -std::min(kappa1 + 2.0, kappa2 + 2.0 / alpha - 2.0) / 2.0;
    e.caseIII = -std::min(kappa1 + 2.0, gammaAlphaKappa(alpha, kappa2)) / 2.0;
    return e;
}

CombinedBound boundQCombined(int L, double t, double tau, double alpha,
                             const AlgebraicSpectrum& specC, const AlgebraicSpectrum& specA) {
    if (L < 1) throw DomainError("boundQCombined: L must be at least 1");
    requireAlpha(alpha, "boundQCombined");
    requirePositiveTime(t, "boundQCombined");
    if (!(tau > 0.0)) throw DomainError("boundQCombined: tau must be positive");
    const double cC = tailConstant(specC);
    const double cA = tailConstant(specA);
    const double tc = criticalTime(L, alpha);
    const double Ld = static_cast<double>(L);
    const BoundExponents ex = boundExponents(alpha, specC.kappa, specA.kappa);

    CombinedBound out;
    if (t <= tc) {
        if (!(tau >= tc))
            throw DomainError("boundQCombined: case I needs tau >= lambda_L^{-1/alpha} (L=" +
                              std::to_string(L) + ", tau=" + std::to_string(tau) +
                              ", lambda_L^{-1/alpha}=" + std::to_string(tc) + ")");
        out.regime = BoundCase::I;
        out.exponent = ex.caseI;
        out.value = cC * std::pow(Ld, ex.caseI);
        return out;
    }
    const double hTerm = psiH(alpha, t) * cC;
    if (t <= tau + tc) {
        out.regime = BoundCase::II;
        out.exponent = ex.caseII;
        out.value = std::sqrt(hTerm * hTerm + cA * cA) * std::pow(Ld, ex.caseII);
        return out;
    }
    const double iTerm = psiI(alpha, t - tau) * cA;
    out.regime = BoundCase::III;
    out.exponent = ex.caseIII;
    out.value = std::sqrt(hTerm * hTerm + iTerm * iTerm) * std::pow(Ld, ex.caseIII);
    return out;
}

double incrementBound(double t, double h, double tau, double alpha, const AlgebraicSpectrum& specC,
                      const AlgebraicSpectrum& specA, double c) {
    requireAlpha(alpha, "incrementBound");
    if (!(t > tau)) throw DomainError("incrementBound: requires t > tau");
    if (!(h > 0.0)) throw DomainError("incrementBound: requires h > 0");
    if (!(c > 0.0)) throw DomainError("incrementBound: constant c must be positive");
    const double cC = tailConstant(specC);
    const double cA = tailConstant(specA);
    const double q = std::sqrt(c * cC * cC / t + (1.0 + c) * cA * cA);
    return q * std::sqrt(h);
}

double measuredIncrementConstant(double alpha) {
    requireAlpha(alpha, "measuredIncrementConstant");
    static std::mutex mutex;
    static std::map<double, double> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        if (auto it = cache.find(alpha); it != cache.end()) return it->second;
    }
    constexpr int kPerDecade = 40;
    const MLParams p{alpha, alpha};
    double best = mlNeg(p, 0.0);  // x -> 0 limit: 1/Gamma(alpha)
    for (int i = 0; i <= 14 * kPerDecade; ++i) {
        const double x = std::pow(10.0, -6.0 + static_cast<double>(i) / kPerDecade);
        best = std::max(best, (1.0 + x) * mlNeg(p, x));
    }
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(alpha, best);
    return best;
}

namespace {

struct HolderSum {
    double partial = 0.0;
    double remainder = 0.0;
};

HolderSum holderSeries(const AlgebraicSpectrum& s, double betaStar, int lmax) {
    HolderSum out;
    if (s.coeff == 0.0) return out;
    const double p = 1.0 + 2.0 * betaStar - s.kappa;
    for (int ell = lmax; ell >= 1; --ell) out.partial += std::pow(static_cast<double>(ell), p);
    out.partial *= s.coeff;
    out.remainder = s.coeff * std::pow(static_cast<double>(lmax), p + 1.0) / (-(p + 1.0));
    return out;
}

}  // namespace

HolderConstant holderEnvelope(double betaStar, double t, double tau, const AlgebraicSpectrum& specC,
                              const AlgebraicSpectrum& specA, int lmax) {
    if (!(betaStar > 0.0 && betaStar <= 1.0))
        throw DomainError("holderEnvelope: beta* must lie in (0,1]");
    if (lmax < 1) throw DomainError("holderEnvelope: lmax must be at least 1");
    specC.validate();
    specA.validate();
    const double need = 2.0 * (1.0 + betaStar);
    if (specC.coeff > 0.0 && !(specC.kappa > need))
        throw DomainError("holderEnvelope: assumption kappa1 > 2(1+beta*) violated");
    if (specA.coeff > 0.0 && !(specA.kappa > need))
        throw DomainError("holderEnvelope: assumption kappa2 > 2(1+beta*) violated");

    const HolderSum s1 = holderSeries(specC, betaStar, lmax);
    const HolderSum s2 = holderSeries(specA, betaStar, lmax);
    HolderConstant out;
    out.remainder1 = s1.remainder;
    out.remainder2 = s2.remainder;
    out.k1 = s1.partial + s1.remainder;
    out.k2 = s2.partial + s2.remainder;
    const double noise = t > tau ? (t - tau) * out.k2 : 0.0;
    out.value = std::pow(2.0, 4.0 - betaStar) * (out.k1 + noise);
    return out;
}

}  // namespace sfd
