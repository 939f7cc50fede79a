#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sfd/error.hpp"
#include "sfd/specfun.hpp"
#include "sfd/stochastic.hpp"

using namespace sfd;

namespace {

const AlgebraicSpectrum kInit{1.0, 1.0, 2.3};
const AlgebraicSpectrum kNoise{1e4, 1e4, 2.5};
constexpr double kTau = 1e-5;

FractionalModel model(double alpha) { return {alpha, kTau, kInit, kNoise}; }

double closedSigmaAlpha1(int ell, double t) {
    const double lam = lambda(ell);
    return -std::expm1(-2.0 * lam * t) / (2.0 * lam);
}

// Sample variance check: |mean(x^2) - v| within 5 standard errors (Gaussian x).
bool varianceMatches(double sumSq, int n, double v) {
    const double se = v * std::sqrt(2.0 / n);
    return std::abs(sumSq / n - v) <= 5.0 * se;
}

}  // namespace

TEST_CASE("sigma^2 reference values") {
    CHECK(sigmaSquared(0, 3.0, 0.4) == 3.0);
    CHECK(sigmaSquared(7, 0.0, 0.4) == 0.0);
    CHECK(sigmaSquared(1, 1.0, 1.0) == doctest::Approx(0.2454211).epsilon(1e-7));
    for (int l = 1; l <= 100; l += 9)
        for (double t : {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0})
            CHECK(std::abs(sigmaSquared(l, t, 1.0) / closedSigmaAlpha1(l, t) - 1.0) < 1e-9);
    CHECK_THROWS_AS(sigmaSquared(1, -1.0, 0.5), DomainError);
    CHECK_THROWS_AS(sigmaSquared(1, 1.0, 1.5), DomainError);
}

TEST_CASE("sigma^2 is monotone and below t") {
    for (double a : {0.3, 0.5, 0.75}) {
        for (int l : {1, 2, 10, 50, 200}) {
            double prev = 0.0;
            for (double t = 1e-6; t <= 10.0; t *= 10.0) {
                const double s = sigmaSquared(l, t, a);
                CHECK(s > prev);
                CHECK(s <= t);
                prev = s;
            }
        }
        for (double t : {1e-6, 1e-3, 1.0}) {
            double prev = t;
            for (int l = 0; l <= 200; l += 20) {
                const double s = sigmaSquared(l, t, a);
                CHECK(s <= prev * (1.0 + 1e-12));
                prev = s;
            }
        }
    }
}

TEST_CASE("sigma^2 bound") {
    CHECK(sigmaSquaredBound(1, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(sigmaSquaredBound(5, 10.0, 0.5) == doctest::Approx((1.0 + std::numbers::pi / 4.0 * std::log(9000.0)) / 900.0));
    for (double a : {0.3, 0.5, 0.75, 1.0})
        for (int l : {1, 3, 10, 40, 150})
            for (double t = 1e-5; t <= 10.0; t *= 10.0)
                if (sigmaBoundApplies(l, t, a)) CHECK(sigmaSquared(l, t, a) <= sigmaSquaredBound(l, t, a));
    CHECK_FALSE(sigmaBoundApplies(1, 0.01, 0.5));
}

TEST_CASE("cross covariance") {
    CHECK(crossSigma(3, 0.2, 0.0, 0.5) == sigmaSquared(3, 0.2, 0.5));
    CHECK(crossSigma(0, 0.7, 0.3, 0.5) == 0.7);
    // alpha = 1: e^{-lambda h} sigma^2
    CHECK(crossSigma(1, 1.0, 0.5, 1.0) == doctest::Approx(std::exp(-1.0) * closedSigmaAlpha1(1, 1.0)).epsilon(1e-10));
    for (int l : {1, 4, 20})
        for (double h : {1e-3, 0.1})
            CHECK(crossSigma(l, 0.3, h, 1.0) ==
                  doctest::Approx(std::exp(-lambda(l) * h) * closedSigmaAlpha1(l, 0.3)).epsilon(1e-9));
    // Cauchy-Schwarz
    for (double a : {0.5, 0.75})
        for (int l : {1, 10, 100})
            for (double h : {1e-6, 1e-5, 1e-3}) {
                const double c = crossSigma(l, 1e-6, h, a);
                CHECK(c >= 0.0);
                CHECK(c <= std::sqrt(sigmaSquared(l, 1e-6, a) * sigmaSquared(l, 1e-6 + h, a)) * (1 + 1e-10));
            }
}

TEST_CASE("initial coefficients") {
    const RngStream rng(5, 0);
    const CoefficientSet a = sampleInitialCoefficients(kInit, 30, rng);
    CHECK(a == sampleInitialCoefficients(kInit, 30, rng));
    for (int l = 0; l <= 30; ++l) CHECK(a(l, 0).imag() == 0.0);
    const CoefficientSet z = sampleInitialCoefficients(AlgebraicSpectrum{0.0, 0.0, 3.0}, 10, rng);
    for (auto v : z.values()) CHECK(v == std::complex<double>(0.0, 0.0));

    constexpr int kN = 10000;
    double s00 = 0, s50 = 0, s53 = 0, cross = 0;
    for (int j = 0; j < kN; ++j) {
        const CoefficientSet c = sampleInitialCoefficients(kInit, 5, RngStream(17, j));
        s00 += std::norm(c(0, 0));
        s50 += std::norm(c(5, 0));
        s53 += std::norm(c(5, 3));
        cross += c(5, 0).real() * c(5, 3).real();
    }
    CHECK(varianceMatches(s00, kN, kInit(0)));
    CHECK(varianceMatches(s50, kN, kInit(5)));
    // |V|^2 = (re^2 + im^2), each of variance C/2: chi-square with 2 dof scaled
    CHECK(std::abs(s53 / kN - kInit(5)) <= 5.0 * kInit(5) / std::sqrt(kN));
    CHECK(std::abs(cross / kN) / std::sqrt(kInit(5) * kInit(5) / 2.0) <= 5.0 / std::sqrt(kN));
}

TEST_CASE("homogeneous evolution") {
    const CoefficientSet init = sampleInitialCoefficients(kInit, 20, RngStream(1, 0));
    CHECK(evolveHomogeneous(init, 0.0, 0.5) == init);
    const CoefficientSet e = evolveHomogeneous(init, 1e-3, 0.5);
    CHECK(e(0, 0) == init(0, 0));
    for (int l = 1; l <= 20; ++l) {
        const double f = mlNeg(0.5, lambda(l) * std::sqrt(1e-3));
        for (int m = 0; m <= l; ++m) CHECK(std::abs(e(l, m) - f * init(l, m)) <= 1e-15 * std::abs(init(l, m)));
    }
}

TEST_CASE("inhomogeneous part") {
    const RngStream rng(3, 0);
    const CoefficientSet z = sampleInhomogeneous(kNoise, 10, kTau, kTau, 0.5, rng);
    for (auto v : z.values()) CHECK(v == std::complex<double>(0.0, 0.0));
    const CoefficientSet z2 = sampleInhomogeneous(AlgebraicSpectrum{0, 0, 3}, 10, 1.0, kTau, 0.5, rng);
    for (auto v : z2.values()) CHECK(v == std::complex<double>(0.0, 0.0));

    constexpr int kN = 10000;
    const double t = 10 * kTau;
    double s = 0;
    for (int j = 0; j < kN; ++j) s += std::norm(sampleInhomogeneous(kNoise, 4, t, kTau, 0.75, RngStream(8, j))(4, 0));
    CHECK(varianceMatches(s, kN, kNoise(4) * sigmaSquared(4, t - kTau, 0.75)));
}

TEST_CASE("combined sampler and analytic variance") {
    const FractionalModel m = model(0.5);
    CHECK(coefficientVariance(m, 0, kTau / 2) == doctest::Approx(kInit(0)));
    const FractionalModel noNoise{0.5, kTau, kInit, AlgebraicSpectrum{0, 0, 2.5}};
    const double e = mlNeg(0.5, lambda(10) * std::sqrt(1e-4));
    CHECK(coefficientVariance(noNoise, 10, 1e-4) == doctest::Approx(kInit(10) * e * e));

    // before tau only the initial field contributes
    const RngStream rng(4, 2);
    const CoefficientSet early = sampleCombined(m, 12, kTau / 2, rng);
    CHECK(early == evolveHomogeneous(sampleInitialCoefficients(kInit, 12, rng), kTau / 2, 0.5));

    const FractionalModel zero{0.5, kTau, AlgebraicSpectrum{0, 0, 2.5}, AlgebraicSpectrum{0, 0, 2.5}};
    const CoefficientSet zeroDraw = sampleCombined(zero, 8, 1.0, rng);
    for (auto v : zeroDraw.values()) CHECK(v == std::complex<double>(0.0, 0.0));

    // Monte Carlo against the analytic variance, 10^5 draws at l = 10
    constexpr int kN = 100000;
    const double t = 10 * kTau;
    double s = 0;
    for (int j = 0; j < kN; ++j) s += std::norm(sampleCombined(m, 10, t, RngStream(99, j))(10, 0));
    CHECK(varianceMatches(s, kN, coefficientVariance(m, 10, t)));
    CHECK_THROWS_AS(sampleCombined(m, 4, 0.0, rng), DomainError);
}

TEST_CASE("pair sampler") {
    const FractionalModel m = model(0.5);
    const double t = kTau + 1e-6;
    const RngStream rng(77, 5);
    auto [a, b] = sampleCombinedPair(m, 15, t, 3e-6, rng);
    CHECK(a == sampleCombined(m, 15, t, rng));
    CHECK(a.time() == t);
    CHECK(b.time() == t + 3e-6);
    CHECK_THROWS_AS(sampleCombinedPair(m, 5, kTau, 1e-6, rng), DomainError);
    CHECK_THROWS_AS(sampleCombinedPair(m, 5, t, 0.0, rng), DomainError);

    // E|V(t+h) - V(t)|^2 = C (dE)^2 + A (s1 + s2 - 2 cross)
    const int l = 3;
    const double h = 5e-6;
    const double s = t - kTau;
    const double dE = mlNeg(0.5, lambda(l) * std::sqrt(t + h)) - mlNeg(0.5, lambda(l) * std::sqrt(t));
    const double expect = kInit(l) * dE * dE +
                          kNoise(l) * (sigmaSquared(l, s, 0.5) + sigmaSquared(l, s + h, 0.5) - 2.0 * crossSigma(l, s, h, 0.5));
    constexpr int kN = 10000;
    double sumD = 0, sumB = 0;
    for (int j = 0; j < kN; ++j) {
        auto [x, y] = sampleCombinedPair(m, l, t, h, RngStream(12, j));
        sumD += std::norm(y(l, 0) - x(l, 0));
        sumB += std::norm(y(l, 0));
    }
    CHECK(varianceMatches(sumD, kN, expect));
    CHECK(varianceMatches(sumB, kN, coefficientVariance(m, l, t + h)));
}

TEST_CASE("pair sampler reduces to closed forms at alpha = 1") {
    const FractionalModel m{1.0, 0.5, AlgebraicSpectrum{0, 0, 2.5}, AlgebraicSpectrum{1.0, 1.0, 2.5}};
    const double t = 1.5, h = 0.5;
    const int l = 1;
    const double s = t - m.tau;
    const double lam = lambda(l);
    // Var[I(s+h) - I(s)] with I the OU-type integral
    const double v1 = closedSigmaAlpha1(l, s), v2 = closedSigmaAlpha1(l, s + h);
    const double expect = v1 + v2 - 2.0 * std::exp(-lam * h) * v1;
    constexpr int kN = 10000;
    double sum = 0;
    for (int j = 0; j < kN; ++j) {
        auto [x, y] = sampleCombinedPair(m, l, t, h, RngStream(21, j));
        sum += std::norm(y(l, 0) - x(l, 0));
    }
    CHECK(varianceMatches(sum, kN, expect));
}

TEST_CASE("covariance function and field differences") {
    const FractionalModel m = model(0.5);
    const FractionalModel initOnly{0.5, kTau, kInit, AlgebraicSpectrum{0, 0, 2.5}};
    double direct = 0;
    for (int l = 0; l <= 50; ++l) direct += (2 * l + 1) * kInit(l) * std::pow(mlNeg(0.5, lambda(l) * std::sqrt(1e-14)), 2);
    CHECK(covarianceFunction(initOnly, 1e-14, 1.0, 50) == doctest::Approx(direct));
    CHECK(covarianceFunction(initOnly, 1e-14, 1.0, 50) == doctest::Approx(1.0 + [] {
        double s = 0;
        for (int l = 1; l <= 50; ++l) s += (2 * l + 1) * std::pow(l, -2.3);
        return s;
    }()).epsilon(1e-4));

    for (double th : {0.05, 0.1, 1.0, 3.0}) {
        const double viaCov = 2.0 * (covarianceFunction(m, 1e-4, 1.0, 200) - covarianceFunction(m, 1e-4, std::cos(th), 200));
        const auto d = fieldDifferenceVariance(m, 1e-4, th, 200);
        CHECK(d.value == doctest::Approx(viaCov).epsilon(1e-8));
        CHECK(d.remainder > 0.0);
    }
    CHECK(fieldDifferenceVariance(m, 1e-4, 0.0, 50).value == 0.0);
}
