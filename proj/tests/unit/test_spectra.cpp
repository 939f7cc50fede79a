#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sfd/error.hpp"
#include "sfd/spectra.hpp"
#include "sfd/specfun.hpp"

using namespace sfd;

namespace {
const AlgebraicSpectrum kInit{1.0, 1.0, 2.3};
const AlgebraicSpectrum kNoise{1e4, 1e4, 2.5};
constexpr double kTau = 1e-5;
}  // namespace

TEST_CASE("spectrum values") {
    CHECK(kInit(0) == 1.0);
    CHECK(kNoise(10) == doctest::Approx(31.6227766));
    CHECK(kInit(1) == kInit.coeff);
    CHECK_THROWS_AS((AlgebraicSpectrum{1, 1, 2.0}.validate()), DomainError);
    CHECK_THROWS_AS((AlgebraicSpectrum{-1, 1, 3.0}.validate()), DomainError);

    const Spectrum tab = Spectrum::tabulated({1.0, 0.5, 0.25});
    CHECK(tab(1) == 0.5);
    CHECK(tab(7) == 0.0);
    CHECK(tab.algebraic() == nullptr);
    CHECK_THROWS_AS(tab.requireAlgebraic("bounds"), DomainError);
}

TEST_CASE("tail constants") {
    CHECK(tailConstant(kInit) == doctest::Approx(std::sqrt(2.0 / 0.3 + 1.0 / 1.3)));
    CHECK(tailConstant(kInit) == doctest::Approx(2.726885).epsilon(1e-6));
    CHECK(tailConstant(kNoise) == doctest::Approx(216.0246).epsilon(1e-6));
    CHECK(tailConstant({0.0, 0.0, 3.0}) == 0.0);
    CHECK_THROWS_AS(tailConstant({1.0, 1.0, 1.5}), DomainError);
}

TEST_CASE("tail constant dominates the weighted tail") {
    for (double kappa : {2.1, 2.3, 2.5, 3.0, 4.5}) {
        const AlgebraicSpectrum s{1.0, 1.0, kappa};
        const double c2 = tailConstant(s) * tailConstant(s);
        // sum_{l > L} up to a large cutoff, plus an integral for the remainder
        constexpr int kCut = 2'000'000;
        std::vector<double> suffix(502, 0.0);
        double tail = s.coeff * (2.0 * std::pow(kCut, 2.0 - kappa) / (kappa - 2.0));
        for (int l = kCut; l > 500; --l) tail += (2.0 * l + 1.0) * s(l);
        for (int L = 500; L >= 1; --L) {
            CHECK(tail <= c2 * std::pow(L, 2.0 - kappa));
            tail += (2.0 * L + 1.0) * s(L);
        }
    }
}

TEST_CASE("M_alpha and gamma_alpha") {
    CHECK(mAlpha(0.5) == doctest::Approx(std::numbers::pi / 4.0));
    CHECK(mAlpha(1.0) == doctest::Approx(1.0));
    CHECK(mAlpha(0.75) == doctest::Approx(2.0 * std::pow(std::tgamma(1.75), 2)));
    CHECK(mAlpha(0.75) == doctest::Approx(1.689352).epsilon(1e-6));
    CHECK(mAlpha(0.25) == doctest::Approx(std::pow(std::tgamma(1.25), 2) / 0.5));
    CHECK_THROWS_AS(mAlpha(0.0), DomainError);
    CHECK_THROWS_AS(mAlpha(1.2), DomainError);

    CHECK(gammaAlphaKappa(0.5, 2.5) == doctest::Approx(2.5));
    CHECK(gammaAlphaKappa(0.75, 2.5) == doctest::Approx(2.5 + 8.0 / 3.0 - 2.0));
    CHECK(gammaAlphaKappa(1.0, 3.3) == doctest::Approx(3.3));
    CHECK(gammaAlphaKappa(0.3, 2.5) == doctest::Approx(4.5));
    CHECK_THROWS_AS(gammaAlphaKappa(0.0, 2.5), DomainError);
}

TEST_CASE("psi functions") {
    CHECK(psiH(0.5, 1.0) == doctest::Approx(0.8862269255));
    CHECK(psiH(1.0, 2.0) == doctest::Approx(0.5));
    CHECK(psiH(0.75, 1e-4) == doctest::Approx(919.0625).epsilon(1e-6));
    CHECK_THROWS_AS(psiH(0.5, 0.0), DomainError);

    CHECK(psiI(0.75, 3.0) == doctest::Approx(1.639924).epsilon(1e-6));
    CHECK(psiI(0.5, 0.5) == doctest::Approx(std::sqrt(1.0 + std::numbers::pi / 2.0)));
    CHECK(psiI(0.5, std::exp(2.0)) == doctest::Approx(std::sqrt(1.0 + std::numbers::pi)));
    CHECK(psiI(0.25, 2.0) == doctest::Approx(std::sqrt(1.0 + mAlpha(0.25) * std::sqrt(2.0))));
    CHECK_THROWS_AS(psiI(0.5, -1.0), DomainError);
}

TEST_CASE("homogeneous and inhomogeneous truncation bounds") {
    CHECK(boundQH(100, 1e-12, 0.5, kInit) == doctest::Approx(2.726885 * std::pow(100.0, -0.15)).epsilon(1e-6));
    const double tc = std::pow(lambda(100), -2.0);
    CHECK(boundQH(100, tc, 0.5, kInit) == doctest::Approx(tailConstant(kInit) * std::pow(100.0, -0.15)));
    CHECK(boundQH(100, 1.0, 1.0, kInit) == doctest::Approx(tailConstant(kInit) * std::pow(100.0, -2.15)));

    CHECK(boundQI(100, kTau + tc, kTau, 0.5, kNoise) ==
          doctest::Approx(tailConstant(kNoise) * std::pow(100.0, -2.25)));
    CHECK(boundQI(100, 10 * kTau, kTau, 0.5, kNoise) ==
          doctest::Approx(psiI(0.5, 9e-5) * tailConstant(kNoise) * std::pow(100.0, -1.25)));
    CHECK(boundQI(100, 10 * kTau, kTau, 0.5, {0.0, 0.0, 2.5}) == 0.0);
    CHECK_THROWS_AS(boundQI(100, kTau, kTau, 0.5, kNoise), DomainError);
}

TEST_CASE("combined bound regimes and exponents") {
    auto b = boundQCombined(100, 10 * kTau, kTau, 0.5, kInit, kNoise);
    CHECK((b.regime == BoundCase::III));
    CHECK(b.exponent == doctest::Approx(-1.25));
    b = boundQCombined(100, 10 * kTau, kTau, 0.75, kInit, kNoise);
    CHECK(b.exponent == doctest::Approx(-3.16667 / 2).epsilon(1e-5));
    CHECK(boundExponents(0.5, 2.3, 2.5).caseII == doctest::Approx(-2.15));

    b = boundQCombined(100, 1e-12, kTau, 0.5, kInit, kNoise);
    CHECK((b.regime == BoundCase::I));
    CHECK(b.value == doctest::Approx(tailConstant(kInit) * std::pow(100.0, -0.15)));

    // case II: just past the critical time but before tau + critical time
    const double tc = std::pow(lambda(100), -2.0);
    b = boundQCombined(100, 2 * tc, kTau, 0.5, kInit, kNoise);
    CHECK((b.regime == BoundCase::II));
    // boundary point belongs to the earlier case
    CHECK((boundQCombined(100, tc, kTau, 0.5, kInit, kNoise).regime == BoundCase::I));
    CHECK((boundQCombined(100, kTau + tc, kTau, 0.5, kInit, kNoise).regime == BoundCase::II));

    // tau below the critical time while t is too: no case applies
    CHECK_THROWS_WITH_AS(boundQCombined(2, 1e-3, 1e-4, 0.5, kInit, kNoise), doctest::Contains("case I"), DomainError);
}

TEST_CASE("combined bound is non-increasing in L") {
    for (double alpha : {0.5, 0.75, 1.0})
        for (double t : {1e-12, 2e-5, 1e-4, 1.0}) {
            double prev = std::numeric_limits<double>::infinity();
            for (int L = 10; L <= 1000; L += 10) {
                double v;
                try {
                    v = boundQCombined(L, t, kTau, alpha, kInit, kNoise).value;
                } catch (const DomainError&) {
                    continue;
                }
                CHECK(v <= prev * (1.0 + 1e-12));
                prev = v;
            }
        }
}

TEST_CASE("increment bound") {
    const AlgebraicSpectrum none{0.0, 0.0, 2.3};
    CHECK(incrementBound(2e-5, 1e-6, kTau, 0.5, none, kNoise, 1.0) ==
          doctest::Approx(std::sqrt(2.0) * tailConstant(kNoise) * 1e-3));
    const double t = kTau + 1e-6;
    const double c2 = tailConstant(kInit) * tailConstant(kInit);
    const double a2 = tailConstant(kNoise) * tailConstant(kNoise);
    CHECK(incrementBound(t, 1e-6, kTau, 0.5, kInit, kNoise, 1.0) ==
          doctest::Approx(std::sqrt(c2 / t + 2.0 * a2) * 1e-3));
    CHECK(c2 == doctest::Approx(7.43590).epsilon(1e-5));
    CHECK(incrementBound(t, 4e-6, kTau, 0.5, kInit, kNoise, 0.7) /
              incrementBound(t, 1e-6, kTau, 0.5, kInit, kNoise, 0.7) ==
          doctest::Approx(2.0));
    CHECK_THROWS_AS(incrementBound(kTau, 1e-6, kTau, 0.5, kInit, kNoise, 1.0), DomainError);
}

TEST_CASE("measured increment constant") {
    for (double a : {0.5, 0.75, 1.0}) {
        const double c = measuredIncrementConstant(a);
        CHECK(c > 0.0);
        CHECK(c == measuredIncrementConstant(a));
        for (double x = 1e-6; x < 1e8; x *= 3.7) CHECK((1.0 + x) * mlNeg(MLParams{a, a}, x) <= c * (1.0 + 1e-3));
    }
    // alpha = 1: (1+x) e^{-x} peaks at x = 0
    CHECK(measuredIncrementConstant(1.0) == doctest::Approx(1.0));
}

TEST_CASE("Hoelder envelope") {
    const auto k = holderEnvelope(0.1, 5e-6, kTau, kInit, kNoise);
    CHECK(k.k1 > 0.0);
    CHECK(k.value == doctest::Approx(std::pow(2.0, 3.9) * k.k1));

    const auto k2 = holderEnvelope(0.1, 1e-4, kTau, kInit, kNoise);
    CHECK(k2.value == doctest::Approx(std::pow(2.0, 3.9) * (k2.k1 + 9e-5 * k2.k2)));

    // partial sums grow with lmax, the remainder-inclusive value does not grow
    const auto a = holderEnvelope(0.1, 5e-6, kTau, kInit, kNoise, 1000);
    const auto b = holderEnvelope(0.1, 5e-6, kTau, kInit, kNoise, 10000);
    CHECK(a.k1 - a.remainder1 < b.k1 - b.remainder1);
    CHECK(b.value <= a.value * (1.0 + 1e-12));

    const AlgebraicSpectrum smooth{1.0, 1.0, 4.5};
    const AlgebraicSpectrum none{0.0, 0.0, 2.5};
    const auto c = holderEnvelope(1.0, 1.0, kTau, smooth, none, 50);
    double direct = 0.0;
    for (int l = 1; l <= 50; ++l) direct += std::pow(l, 3.0) * smooth(l);
    CHECK(c.k1 - c.remainder1 == doctest::Approx(direct));
    CHECK(c.value == doctest::Approx(8.0 * c.k1));

    CHECK_THROWS_AS(holderEnvelope(0.2, 1.0, kTau, kInit, kNoise), DomainError);
}
