#include "sfd/stochastic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "sfd/error.hpp"
#include "sfd/quadrature.hpp"
#include "sfd/specfun.hpp"

namespace sfd {

void FractionalModel::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("alpha must lie in (0,1], got " + std::to_string(alpha));
    if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("tau must be positive, got " + std::to_string(tau));
    specC.validate();
    specA.validate();
}

namespace {

constexpr double kQuadRelTol = 1e-12;

struct SigmaKey {
    int ell;
    std::uint64_t s, h, alpha;
    bool operator==(const SigmaKey&) const = default;
};

struct SigmaKeyHash {
    std::size_t operator()(const SigmaKey& k) const {
        std::uint64_t x = static_cast<std::uint64_t>(k.ell) * 0x9E3779B97F4A7C15ull;
        for (std::uint64_t v : {k.s, k.h, k.alpha}) x = (x ^ v) * 0xBF58476D1CE4E5B9ull + (x >> 29);
        return static_cast<std::size_t>(x);
    }
};

class SigmaCache {
public:
    bool find(const SigmaKey& key, double& out) const {
        std::shared_lock lock(mutex_);
        const auto it = map_.find(key);
        if (it == map_.end()) return false;
        out = it->second;
        return true;
    }
    void insert(const SigmaKey& key, double value) {
        std::unique_lock lock(mutex_);
        if (map_.size() > 4'000'000) map_.clear();
        map_.emplace(key, value);
    }
    void clear() {
        std::unique_lock lock(mutex_);
        map_.clear();
    }

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<SigmaKey, double, SigmaKeyHash> map_;
};

SigmaCache& cache() {
    static SigmaCache c;
    return c;
}

SigmaKey makeKey(int ell, double s, double h, double alpha) {
    return {ell, std::bit_cast<std::uint64_t>(s), std::bit_cast<std::uint64_t>(h),
            std::bit_cast<std::uint64_t>(alpha)};
}

void requireAlpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1], got " + std::to_string(alpha));
}

// int_0^T g(s) ds for a kernel with steep decay at s = 0 and an algebraic tail.
// On [0, min(T,1)] the substitution s = u^{1/alpha} removes the r^alpha cusp;
// beyond that the range is cut into decades. `extra` adds breakpoints (in s).
double integrateScaled(const std::function<double(double)>& g, double T, double alpha,
                       std::vector<double> extra, const char* what) {
    double value = 0.0, error = 0.0, l1 = 0.0;
    const double head = std::min(T, 1.0);
    const double inv = 1.0 / alpha;

    std::vector<double> ubreaks{0.0};
    for (double e : extra)
        if (e > 0.0 && e < head) ubreaks.push_back(std::pow(e, alpha));
    ubreaks.push_back(std::pow(head, alpha));
    std::sort(ubreaks.begin(), ubreaks.end());
    const auto sub = [&](double u) {
        if (u <= 0.0) return alpha == 1.0 ? g(0.0) : 0.0;
        return inv * std::pow(u, inv - 1.0) * g(std::pow(u, inv));
    };
    QuadResult r = integratePanels(sub, ubreaks, kQuadRelTol);
    value += r.value;
    error += r.error;
    l1 += r.l1;

    if (T > 1.0) {
        std::vector<double> breaks;
        for (double b = 1.0; b < T; b *= 10.0) breaks.push_back(b);
        for (double e : extra)
            if (e > 1.0 && e < T) breaks.push_back(e);
        breaks.push_back(T);
        std::sort(breaks.begin(), breaks.end());
        r = integratePanels(g, breaks, kQuadRelTol);
        value += r.value;
        error += r.error;
        l1 += r.l1;
    }
    if (!std::isfinite(value) || error > 1e-9 * std::max(l1, 1e-300) + 1e-300)
        throw AccuracyError(std::string(what) + ": quadrature did not converge (error estimate " +
                            std::to_string(error) + ")");
    return value;
}

double computeSigma(int ell, double t, double alpha) {
    const double c = std::pow(lambda(ell), 1.0 / alpha);
    if (!std::isfinite(c)) throw AccuracyError("sigmaSquared: lambda^(1/alpha) overflows");
    const double T = c * t;
    const auto g = [alpha](double s) {
        const double e = mlNeg(alpha, std::pow(s, alpha));
        return e * e;
    };
    return integrateScaled(g, T, alpha, {}, "sigmaSquared") / c;
}

double computeCross(int ell, double s, double h, double alpha) {
    const double c = std::pow(lambda(ell), 1.0 / alpha);
    if (!std::isfinite(c)) throw AccuracyError("crossSigma: lambda^(1/alpha) overflows");
    const double S = c * s;
    const double H = c * h;
    const auto g = [alpha, H](double u) {
        return mlNeg(alpha, std::pow(u + H, alpha)) * mlNeg(alpha, std::pow(u, alpha));
    };
    return integrateScaled(g, S, alpha, {H, 10.0 * H}, "crossSigma") / c;
}

// sqrt(X/2) with the m = 0 entry using sqrt(X).
inline std::complex<double> gaussianPair(double sd, int m, std::pair<double, double> z) {
    if (m == 0) return {sd * z.first, 0.0};
    const double s = sd * (1.0 / std::numbers::sqrt2);
    return {s * z.first, -s * z.second};
}

}  // namespace

double sigmaSquared(int ell, double t, double alpha) {
    requireAlpha(alpha);
    if (ell < 0) throw DomainError("sigmaSquared: degree must be non-negative");
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("sigmaSquared: t must be non-negative");
    if (ell == 0 || t == 0.0) return t;
    const SigmaKey key = makeKey(ell, t, -1.0, alpha);
    double v;
    if (cache().find(key, v)) return v;
    v = std::min(computeSigma(ell, t, alpha), t);
    cache().insert(key, v);
    return v;
}

bool sigmaBoundApplies(int ell, double t, double alpha) {
    if (ell < 1 || !(t > 0.0)) return false;
    if (alpha == 0.5) return lambda(ell) * lambda(ell) * t > 1.0;
    return true;
}

double decayFactor(int ell, double t, double alpha) {
    requireAlpha(alpha);
    if (ell < 0) throw DomainError("decayFactor: degree must be non-negative");
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("decayFactor: t must be non-negative");
    if (ell == 0 || t == 0.0) return 1.0;
    const SigmaKey key = makeKey(ell, t, -2.0, alpha);
    double v;
    if (cache().find(key, v)) return v;
    v = mlNeg(alpha, lambda(ell) * std::pow(t, alpha));
    cache().insert(key, v);
    return v;
}

double sigmaSquaredBound(int ell, double t, double alpha) {
    requireAlpha(alpha);
    if (ell < 1) throw DomainError("sigmaSquaredBound: degree must be at least 1");
    if (!(t > 0.0)) throw DomainError("sigmaSquaredBound: t must be positive");
    const double lam = lambda(ell);
    const double m = mAlpha(alpha);
    if (alpha < 0.5) return std::pow(lam, -1.0 / alpha) + m * std::pow(t, 1.0 - 2.0 * alpha) / (lam * lam);
    if (alpha > 0.5) return std::pow(lam, -1.0 / alpha) * (1.0 + m);
    return (1.0 + m * std::log(lam * lam * t)) / (lam * lam);
}

double crossSigma(int ell, double s, double h, double alpha) {
    requireAlpha(alpha);
    if (ell < 0) throw DomainError("crossSigma: degree must be non-negative");
    if (!(s >= 0.0) || !(h >= 0.0)) throw DomainError("crossSigma: s and h must be non-negative");
    if (h == 0.0) return sigmaSquared(ell, s, alpha);
    if (ell == 0 || s == 0.0) return s;
    const SigmaKey key = makeKey(ell, s, h, alpha);
    double v;
    if (cache().find(key, v)) return v;
    v = std::max(computeCross(ell, s, h, alpha), 0.0);
    cache().insert(key, v);
    return v;
}

void clearSigmaCache() { cache().clear(); }

CoefficientSet sampleInitialCoefficients(const Spectrum& specC, int L, const RngStream& rng) {
    CoefficientSet out(L, 0.0);
    out.setOrigin(rng.seed(), rng.realization());
    for (int ell = 0; ell <= L; ++ell) {
        const double c = specC(ell);
        if (c == 0.0) continue;
        const double sd = std::sqrt(c);
        for (int m = 0; m <= ell; ++m) out(ell, m) = gaussianPair(sd, m, rng.normals(ell, m, DrawRole::Initial));
    }
    return out;
}

CoefficientSet evolveHomogeneous(const CoefficientSet& init, double t, double alpha) {
    requireAlpha(alpha);
    if (!(t >= 0.0)) throw DomainError("evolveHomogeneous: t must be non-negative");
    CoefficientSet out = init;
    out.setTime(t);
    if (t == 0.0) return out;
    for (int ell = 1; ell <= init.degree(); ++ell) {
        const double e = decayFactor(ell, t, alpha);
        for (int m = 0; m <= ell; ++m) out(ell, m) *= e;
    }
    return out;
}

CoefficientSet sampleInhomogeneous(const Spectrum& specA, int L, double t, double tau, double alpha,
                                   const RngStream& rng) {
    requireAlpha(alpha);
    if (!(tau > 0.0)) throw DomainError("sampleInhomogeneous: tau must be positive");
    CoefficientSet out(L, t);
    out.setOrigin(rng.seed(), rng.realization());
    if (t <= tau) return out;
    const double s = t - tau;
    for (int ell = 0; ell <= L; ++ell) {
        const double a = specA(ell);
        if (a == 0.0) continue;
        const double sd = std::sqrt(a * sigmaSquared(ell, s, alpha));
        for (int m = 0; m <= ell; ++m) out(ell, m) = gaussianPair(sd, m, rng.normals(ell, m, DrawRole::Noise));
    }
    return out;
}

CoefficientSet sampleCombined(const FractionalModel& model, int L, double t, const RngStream& rng) {
    if (!(t > 0.0)) throw DomainError("sampleCombined: t must be positive");
    CoefficientSet out = evolveHomogeneous(sampleInitialCoefficients(model.specC, L, rng), t, model.alpha);
    if (t > model.tau) out += sampleInhomogeneous(model.specA, L, t, model.tau, model.alpha, rng);
    return out;
}

std::pair<CoefficientSet, CoefficientSet> sampleCombinedPair(const FractionalModel& model, int L, double t,
                                                             double h, const RngStream& rng) {
    if (!(t > model.tau)) throw DomainError("sampleCombinedPair: t must exceed tau");
    if (!(h > 0.0)) throw DomainError("sampleCombinedPair: h must be positive");
    const double alpha = model.alpha;
    const CoefficientSet init = sampleInitialCoefficients(model.specC, L, rng);
    CoefficientSet first = evolveHomogeneous(init, t, alpha);
    CoefficientSet second = evolveHomogeneous(init, t + h, alpha);

    const double s = t - model.tau;
    for (int ell = 0; ell <= L; ++ell) {
        const double a = model.specA(ell);
        if (a == 0.0) continue;
        const double v1 = sigmaSquared(ell, s, alpha);
        const double v2 = sigmaSquared(ell, s + h, alpha);
        const double cov = crossSigma(ell, s, h, alpha);
        // Cholesky of [[v1, cov], [cov, v2]].
        const double l11 = std::sqrt(v1);
        const double l21 = l11 > 0.0 ? cov / l11 : 0.0;
        double rest = v2 - l21 * l21;
        if (rest < 0.0) {
            if (rest < -1e-12 * std::max(v2, 1e-300))
                throw AccuracyError("sampleCombinedPair: covariance not positive semidefinite at degree " +
                                    std::to_string(ell));
            rest = 0.0;
        }
        const double l22 = std::sqrt(rest);
        const double sa = std::sqrt(a);
        const double sd1 = std::sqrt(a * v1);  // same rounding as sampleInhomogeneous
        for (int m = 0; m <= ell; ++m) {
            const auto z = rng.normals(ell, m, DrawRole::Noise);
            const auto w = rng.normals(ell, m, DrawRole::NoiseSecond);
            first(ell, m) += gaussianPair(sd1, m, z);
            second(ell, m) += gaussianPair(sa, m, {l21 * z.first + l22 * w.first, l21 * z.second + l22 * w.second});
        }
    }
    first.setTime(t);
    second.setTime(t + h);
    first.setOrigin(rng.seed(), rng.realization());
    second.setOrigin(rng.seed(), rng.realization());
    return {std::move(first), std::move(second)};
}

double coefficientVariance(const FractionalModel& model, int ell, double t) {
    if (!(t > 0.0)) throw DomainError("coefficientVariance: t must be positive");
    const double e = mlNeg(model.alpha, lambda(ell) * std::pow(t, model.alpha));
    double v = model.specC(ell) * e * e;
    if (t > model.tau) {
        const double a = model.specA(ell);
        if (a != 0.0) v += a * sigmaSquared(ell, t - model.tau, model.alpha);
    }
    return v;
}

double covarianceFunction(const FractionalModel& model, double t, double cosAngle, int Lmax) {
    if (!(std::abs(cosAngle) <= 1.0)) throw DomainError("covarianceFunction: |cosAngle| must not exceed 1");
    double sum = 0.0;
    double pPrev = 0.0, p = 1.0;
    for (int ell = 0; ell <= Lmax; ++ell) {
        if (ell == 1) {
            pPrev = p;
            p = cosAngle;
        } else if (ell > 1) {
            const double next = ((2.0 * ell - 1.0) * cosAngle * p - (ell - 1.0) * pPrev) / ell;
            pPrev = p;
            p = next;
        }
        sum += (2.0 * ell + 1.0) * coefficientVariance(model, ell, t) * p;
    }
    return sum;
}

namespace {

// Upper bound on sum_{l > L} (2l+1) X_l.
double weightedTail(const Spectrum& spec, int L) {
    if (const AlgebraicSpectrum* a = spec.algebraic()) {
        if (a->coeff == 0.0) return 0.0;
        const double k = a->kappa;
        const double x = static_cast<double>(L);
        return a->coeff * (2.0 * std::pow(x, 2.0 - k) / (k - 2.0) + std::pow(x, 1.0 - k) / (k - 1.0));
    }
    double sum = 0.0;
    for (int ell = L + 1;; ++ell) {
        const double v = spec(ell);
        if (v == 0.0 && ell > L + 1 && spec(ell + 1) == 0.0) break;
        sum += (2.0 * ell + 1.0) * v;
        if (ell > L + 10'000'000) break;
    }
    return sum;
}

}  // namespace

SeriesValue fieldDifferenceVariance(const FractionalModel& model, double t, double theta, int Lmax) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw DomainError("fieldDifferenceVariance: theta outside [0,pi]");
    if (Lmax < 1) throw DomainError("fieldDifferenceVariance: Lmax must be at least 1");
    const double x = std::cos(theta);
    const double oneMinusX = 2.0 * std::sin(0.5 * theta) * std::sin(0.5 * theta);

    SeriesValue out;
    double dPrev = 0.0;     // D_{l-2}
    double d = oneMinusX;   // D_{l-1}, starting at D_1
    for (int ell = 1; ell <= Lmax; ++ell) {
        if (ell >= 2) {
            const double next = ((2.0 * ell - 1.0) * oneMinusX + (2.0 * ell - 1.0) * x * d - (ell - 1.0) * dPrev) / ell;
            dPrev = d;
            d = next;
        }
        out.value += 2.0 * (2.0 * ell + 1.0) * coefficientVariance(model, ell, t) * d;
    }
    // Var <= C_l + A_l (t - tau) and 1 - P_l <= 2.
    out.remainder = 4.0 * weightedTail(model.specC, Lmax);
    if (t > model.tau) out.remainder += 4.0 * (t - model.tau) * weightedTail(model.specA, Lmax);
    return out;
}

}  // namespace sfd
