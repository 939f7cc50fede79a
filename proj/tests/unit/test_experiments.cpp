#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "sfd/error.hpp"
#include "sfd/experiments.hpp"
#include "sfd/parallel.hpp"
#include "sfd/specfun.hpp"

using namespace sfd;
namespace fs = std::filesystem;

namespace {

const AlgebraicSpectrum kInit{1.0, 1.0, 2.3};
const AlgebraicSpectrum kNoise{1e4, 1e4, 2.5};
const AlgebraicSpectrum kNone{0.0, 0.0, 2.5};
constexpr double kTau = 1e-5;

fs::path scratchDir(const char* name) {
    const char* base = std::getenv("SFD_TEST_TMP");
    fs::path p = base ? fs::path(base) : fs::temp_directory_path() / "sfd_tests";
    p /= name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ErrorCurve powerLaw(double slope, double noise, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n(0.0, noise);
    ErrorCurve c;
    for (double x = 10; x <= 1000; x *= 1.3) c.rows.push_back({x, 3.0 * std::pow(x, slope) * std::exp(n(gen)), 0, false, ""});
    return c;
}

}  // namespace

TEST_CASE("slope fit") {
    const ErrorCurve exact = powerLaw(-1.25, 0.0, 1);
    const SlopeFit f = fitLogLogSlope(exact, {0, 1e9});
    CHECK(f.slope == doctest::Approx(-1.25));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.0));

    ErrorCurve flat = powerLaw(0.0, 0.0, 1);
    CHECK(fitLogLogSlope(flat, {0, 1e9}).slope == doctest::Approx(0.0).epsilon(1e-12));

    for (std::uint64_t s = 0; s < 20; ++s) CHECK(std::abs(fitLogLogSlope(powerLaw(0.5, 0.02, s), {0, 1e9}).slope - 0.5) < 0.05);

    CHECK_THROWS_AS(fitLogLogSlope(exact, {10, 14}), InputError);
}

TEST_CASE("default fit window") {
    ErrorCurve c;
    for (int L : {10, 25, 50, 100, 150, 200, 300}) c.rows.push_back({double(L), 1.0 / L, 1.0, L == 10, ""});
    const FitWindow w = defaultFitWindow(c);
    CHECK(w.xmax == 300);
    CHECK(w.xmin == doctest::Approx(30));
    c.rows[5].flagged = true;
    const FitWindow w2 = defaultFitWindow(c);
    CHECK(w2.xmax == 300);
    CHECK(w2.xmin == 300);
}

TEST_CASE("truncation curve basics") {
    const FractionalModel zero{0.5, kTau, kNone, kNone};
    const ErrorCurve z = truncationErrorCurve(zero, 60, {10, 20, 40}, 1e-4, 4, 1);
    for (const auto& r : z.rows) CHECK(r.empirical == 0.0);

    const FractionalModel m{0.5, kTau, kInit, kNoise};
    const ErrorCurve c = truncationErrorCurve(m, 120, {10, 20, 40, 80}, 10 * kTau, 6, 7);
    for (std::size_t i = 1; i < c.rows.size(); ++i) CHECK(c.rows[i].empirical <= c.rows[i - 1].empirical);
    for (const auto& r : c.rows) {
        CHECK_FALSE(r.flagged);
        CHECK(r.note == "III");
        CHECK(r.bound > 0.0);
    }

    // the estimator is a tail sum of one shared draw per realization
    double tail = 0.0;
    for (int j = 0; j < 6; ++j) {
        const CoefficientSet s = sampleCombined(m, 120, 10 * kTau, RngStream(7, j));
        for (int l = 41; l <= 120; ++l) tail += s.degreeEnergy(l);
    }
    CHECK(c.rows[2].empirical == doctest::Approx(std::sqrt(tail / 6)).epsilon(1e-12));

    CHECK_THROWS_AS(truncationErrorCurve(m, 50, {10, 50}, 1e-4, 4, 1), InputError);
    CHECK_THROWS_AS(truncationErrorCurve(m, 50, {20, 10}, 1e-4, 4, 1), InputError);
    CHECK_THROWS_AS(truncationErrorCurve(m, 50, {10, 20}, 1e-4, 1, 1), InputError);
}

TEST_CASE("truncation rows outside every bound case are flagged") {
    const FractionalModel m{0.5, 1e-12, kInit, kNoise};
    const ErrorCurve c = truncationErrorCurve(m, 40, {2, 30}, 1e-6, 2, 1);
    CHECK(c.rows[0].flagged);
    CHECK(c.rows[0].note.find("case I") != std::string::npos);
}

TEST_CASE("truncation curve is reproducible across worker counts") {
    const FractionalModel m{0.75, kTau, kInit, kNoise};
    setWorkerCount(1);
    const ErrorCurve a = truncationErrorCurve(m, 80, {10, 20, 40}, 1e-4, 5, 3);
    setWorkerCount(8);
    const ErrorCurve b = truncationErrorCurve(m, 80, {10, 20, 40}, 1e-4, 5, 3);
    setWorkerCount(0);
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].empirical == b.rows[i].empirical);

    const fs::path dir = scratchDir("curves");
    writeCurveCsv(a, dir / "a.csv");
    writeCurveCsv(b, dir / "b.csv");
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(slurp(dir / "a.csv").rfind("x,empirical,bound,flag\n", 0) == 0);
    writeCurveJson(a, fitLogLogSlope(a, {0, 1e9}), dir / "a.json");
    CHECK(slurp(dir / "a.json").find("\"slope\"") != std::string::npos);
}

TEST_CASE("increment curve") {
    const FractionalModel zero{0.5, kTau, kNone, kNone};
    for (const auto& r : incrementCurve(zero, 10, 2 * kTau, {1e-6, 2e-6}, 3, 1).rows) CHECK(r.empirical == 0.0);

    // alpha = 1, one degree: closed-form increment variance
    const FractionalModel m{1.0, 0.5, AlgebraicSpectrum{0.0, 0.0, 2.5}, AlgebraicSpectrum{0.0, 1.0, 2.5}};
    const double t = 1.0, h = 0.25;
    const ErrorCurve c = incrementCurve(m, 1, t, {h}, 4000, 5);
    const double lam = 2.0, s = t - m.tau;
    const double v1 = -std::expm1(-2 * lam * s) / (2 * lam), v2 = -std::expm1(-2 * lam * (s + h)) / (2 * lam);
    const double perCoef = v1 + v2 - 2.0 * std::exp(-lam * h) * v1;
    const double expect = 3.0 * perCoef;  // degree 1: m = 0 plus twice m = 1
    // the mean of 3 chi-square(1)-like terms over 4000 draws
    CHECK(c.rows[0].empirical * c.rows[0].empirical == doctest::Approx(expect).epsilon(5.0 * std::sqrt(2.0 / (3 * 4000.0))));
    CHECK(c.incrementConstant == doctest::Approx(1.0));

    const FractionalModel paper{0.5, kTau, kInit, kNoise};
    const ErrorCurve d = incrementCurve(paper, 40, kTau + 1e-6, {1e-6, 4e-6}, 40, 9);
    const double ratio = d.rows[1].empirical / d.rows[0].empirical;
    CHECK(ratio > 1.7);
    CHECK(ratio < 2.3);
    CHECK_THROWS_AS(incrementCurve(paper, 10, kTau, {1e-6}, 3, 1), DomainError);
    CHECK_THROWS_AS(incrementCurve(paper, 10, 2 * kTau, {0.0}, 3, 1), InputError);
}

TEST_CASE("evolution snapshots") {
    const fs::path dir = scratchDir("snap");
    const FractionalModel m{0.5, kTau, kInit, AlgebraicSpectrum{0, 0, 2.5}};
    const GridSpec g = GridSpec::equiangular(9, 16);
    const auto maps = evolutionSnapshots(m, 8, {0.0, 1e-4, 1e-3}, g, 4, dir);
    REQUIRE(maps.size() == 3);
    for (const char* f : {"map_t0.ppm", "map_t0.csv", "map_t0.json", "map_t1e-04.ppm", "map_t0.001.csv"})
        CHECK(fs::exists(dir / f));

    const CoefficientSet init = sampleInitialCoefficients(m.specC, 8, RngStream(4, 0));
    const FieldMap direct = synthesize(init, g);
    for (std::size_t i = 0; i < direct.values.size(); ++i) CHECK(maps[0].values[i] == doctest::Approx(direct.values[i]));

    // ratio of shared-draw coefficients is exactly the Mittag-Leffler factor
    const CoefficientSet c1 = evolveHomogeneous(init, 1e-4, 0.5), c2 = evolveHomogeneous(init, 1e-3, 0.5);
    for (int l = 1; l <= 8; ++l) {
        const double expect = mlNeg(0.5, lambda(l) * std::sqrt(1e-3)) / mlNeg(0.5, lambda(l) * std::sqrt(1e-4));
        CHECK(std::abs(c2(l, 0)) / std::abs(c1(l, 0)) == doctest::Approx(expect).epsilon(1e-13));
    }
    CHECK_THROWS_AS(evolutionSnapshots(m, 8, {1e-3, 1e-4}, g, 4, dir), InputError);
}

TEST_CASE("pointwise variance of snapshots matches the covariance series") {
    const FractionalModel m{0.75, kTau, kInit, kNoise};
    const double t = 3e-5;
    const GridSpec g = GridSpec::equiangular(3, 4);
    constexpr int kN = 200;
    double sum = 0.0;
    for (int j = 0; j < kN; ++j) {
        const FieldMap f = synthesize(sampleCombined(m, 16, t, RngStream(31, j)), g);
        sum += f.at(1, 2) * f.at(1, 2);
    }
    const double v = covarianceFunction(m, t, 1.0, 16);
    CHECK(std::abs(sum / kN - v) <= 5.0 * v * std::sqrt(2.0 / kN));
}
