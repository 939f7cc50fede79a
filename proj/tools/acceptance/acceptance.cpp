#include "acceptance.hpp"

#include <algorithm>
#include <array>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>

#include "sfd/error.hpp"
#include "sfd/experiments.hpp"
#include "sfd/parallel.hpp"
#include "sfd/specfun.hpp"
#include "sfd/spectra.hpp"
#include "sfd/stochastic.hpp"
#include "sfd/synthesis.hpp"

namespace sfd::acceptance {

namespace {

namespace fs = std::filesystem;
using Big = boost::multiprecision::cpp_bin_float_50;

constexpr double kTau = 1e-5;
const AlgebraicSpectrum kSpecC{1.0, 1.0, 2.3};
const AlgebraicSpectrum kSpecA{1.0, 1.0, 2.5};

FractionalModel standardModel(double alpha) { return FractionalModel{alpha, kTau, kSpecC, kSpecA}; }

std::string sci(double v, int digits = 3) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double relErr(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// e^{x^2} erfc(x) in 50 digits; an asymptotic series once erfc itself would underflow.
double halfOrderOracle(double x) {
    const Big bx(x);
    if (x <= 25.0) return static_cast<double>(exp(bx * bx) * boost::math::erfc(bx));
    const Big q = 1 / (2 * bx * bx);
    Big term = 1, sum = 1;
    for (int n = 1; n < 400; ++n) {
        const Big next = -term * (2 * n - 1) * q;
        if (abs(next) >= abs(term) || abs(next) < Big("1e-45")) break;
        term = next;
        sum += term;
    }
    return static_cast<double>(sum / (bx * sqrt(boost::math::constants::pi<Big>())));
}

struct Check {
    bool ok = true;
    std::string detail;
};

// ---------------------------------------------------------------------------

Check additionTheorem(const Options& opt) {
    std::mt19937_64 gen(opt.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto point = [&] { return SphPoint{std::acos(1.0 - 2.0 * u(gen)), 2.0 * std::numbers::pi * u(gen)}; };
    double worst = 0.0;  // max over l of error / (2l+1)
    for (int pair = 0; pair < 200; ++pair) {
        const SphPoint x = point(), y = point();
        const double c = std::clamp(x.dot(y), -1.0, 1.0);
        for (int ell = 0; ell <= 60; ++ell) {
            std::complex<double> sum = 0.0;
            for (int m = -ell; m <= ell; ++m) sum += sphericalHarmonic(ell, m, x) * std::conj(sphericalHarmonic(ell, m, y));
            const double err = std::abs(sum - (2.0 * ell + 1.0) * legendreP(ell, c));
            worst = std::max(worst, err / (2.0 * ell + 1.0));
        }
    }
    return {worst <= 1e-9, "max |sum - (2l+1)P_l| / (2l+1) = " + sci(worst) + " (limit 1e-09)"};
}

Check mittagLeffler(const Options&) {
    double e1 = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = 0.05 * i;
        e1 = std::max(e1, relErr(mlNeg(1.0, x), std::exp(-x)));
    }
    double eHalf = 0.0;
    for (int i = 0; i <= 960; ++i) {
        const double x = i / 32.0;
        eHalf = std::max(eHalf, relErr(mlNeg(0.5, x), halfOrderOracle(x)));
    }
    int violations = 0;
    for (double a : {0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
        double prev = 1.0;
        const double g = std::tgamma(1.0 + a);
        for (double x = 1e-4; x <= 1e6; x *= 1.2) {
            const double e = mlNeg(a, x);
            if (e > prev + 1e-10 || e < 0.0 || e > 1.0 / (1.0 + x / g) + 1e-10) ++violations;
            prev = e;
        }
    }
    const bool ok = e1 <= 1e-12 && eHalf <= 1e-9 && violations == 0;
    return {ok, "E_1 rel err " + sci(e1) + " (1e-12), E_1/2 rel err " + sci(eHalf) +
                    " (1e-09), monotonicity/upper-bound violations " + std::to_string(violations)};
}

Check sigmaCorrectness(const Options&) {
    const double times[] = {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0};
    double closed = 0.0;
    for (int ell = 1; ell <= 100; ++ell)
        for (double t : times) {
            const double lam = lambda(ell);
            closed = std::max(closed, relErr(sigmaSquared(ell, t, 1.0), -std::expm1(-2.0 * lam * t) / (2.0 * lam)));
        }
    int aboveT = 0, aboveBound = 0, boundChecks = 0;
    for (double a : {0.25, 0.5, 0.75, 1.0})
        for (int ell : {1, 2, 3, 5, 8, 13, 21, 34, 55, 89})
            for (double t : times) {
                const double s = sigmaSquared(ell, t, a);
                if (s > t) ++aboveT;
                if (sigmaBoundApplies(ell, t, a)) {
                    ++boundChecks;
                    if (s > sigmaSquaredBound(ell, t, a)) ++aboveBound;
                }
            }
    const bool ok = closed <= 1e-9 && aboveT == 0 && aboveBound == 0;
    return {ok, "alpha=1 rel err " + sci(closed) + " (1e-09), sigma2 > t: " + std::to_string(aboveT) +
                    ", sigma2 > bound: " + std::to_string(aboveBound) + " of " + std::to_string(boundChecks)};
}

Check coefficientLaw(const Options& opt) {
    constexpr int kN = 10000;
    const std::pair<int, int> slots[] = {{0, 0}, {5, 0}, {5, 3}, {50, 17}};
    double worstZ = 0.0;
    std::string worstAt;
    int combo = 0;
    for (double a : {0.5, 0.75, 1.0})
        for (double t : {kTau / 2.0, 10.0 * kTau}) {
            const FractionalModel model = standardModel(a);
            std::vector<std::array<double, 4>> draws(kN);
            const std::uint64_t seed = opt.seed + 1000 + static_cast<std::uint64_t>(combo++);
            parallelFor(kN, [&](std::size_t j) {
                const CoefficientSet c = sampleCombined(model, 50, t, RngStream(seed, static_cast<std::uint32_t>(j)));
                for (std::size_t k = 0; k < 4; ++k) draws[j][k] = std::norm(c(slots[k].first, slots[k].second));
            });
            for (std::size_t k = 0; k < 4; ++k) {
                double mean = 0.0;
                for (const auto& d : draws) mean += d[k];
                mean /= kN;
                double var = 0.0;
                for (const auto& d : draws) var += (d[k] - mean) * (d[k] - mean);
                var /= (kN - 1);
                const double expect = coefficientVariance(model, slots[k].first, t);
                const double z = std::abs(mean - expect) / std::sqrt(var / kN);
                if (z > worstZ) {
                    worstZ = z;
                    worstAt = "(l,m)=(" + std::to_string(slots[k].first) + "," + std::to_string(slots[k].second) +
                              ") alpha=" + sci(a) + " t=" + sci(t);
                }
            }
        }
    return {worstZ <= 5.0, "max |mean - variance| / stderr = " + sci(worstZ) + " at " + worstAt + " (limit 5)"};
}

void writeCurve(const Options& opt, const ErrorCurve& curve, const SlopeFit& fit, const std::string& stem) {
    if (opt.outDir.empty()) return;
    fs::create_directories(opt.outDir);
    writeCurveCsv(curve, opt.outDir / (stem + ".csv"));
    writeCurveJson(curve, fit, opt.outDir / (stem + ".json"));
}

Check truncationSlopes(const Options& opt) {
    const std::vector<int> grid{50, 60, 70, 80, 90, 100, 120, 140, 160, 180, 200, 225, 250, 275, 300};
    struct Case {
        const char* name;
        double alpha, t, expected;
    };
    const Case cases[] = {
        {"case I alpha=0.5", 0.5, 1e-12, -0.15},
        {"case III alpha=0.5", 0.5, 10 * kTau, -1.25},
        {"case III alpha=0.75", 0.75, 10 * kTau, -1.583},
    };
    Check out;
    for (const Case& c : cases) {
        const ErrorCurve curve = truncationErrorCurve(standardModel(c.alpha), 400, grid, c.t, 50, opt.seed);
        const SlopeFit fit = fitLogLogSlope(curve, FitWindow{50, 300});
        writeCurve(opt, curve, fit, "trunc_" + formatNumberForName(c.alpha) + "_t" + formatNumberForName(c.t));
        const bool ok = std::abs(fit.slope - c.expected) <= 0.15;
        out.ok = out.ok && ok;
        if (!out.detail.empty()) out.detail += "; ";
        out.detail += std::string(c.name) + " slope " + sci(fit.slope, 4) + " vs " + sci(c.expected, 4) +
                      (ok ? "" : " [off]");
    }
    out.detail += " (tolerance 0.15)";
    return out;
}

Check incrementScaling(const Options& opt) {
    constexpr double kDelta = 1e-6;
    std::vector<double> hs;
    for (int k = 1; k <= 11; ++k) hs.push_back(k * kDelta);
    const ErrorCurve curve = incrementCurve(standardModel(0.5), 400, kTau + kDelta, hs, 50, opt.seed);
    const SlopeFit fit = fitLogLogSlope(curve, FitWindow{hs.front(), hs.back()});
    writeCurve(opt, curve, fit, "incr_0.5");
    int above = 0;
    for (const CurveRow& r : curve.rows)
        if (r.flagged || r.empirical > r.bound) ++above;
    const bool ok = fit.slope >= 0.4 && fit.slope <= 0.6 && above == 0;
    return {ok, "slope " + sci(fit.slope, 4) + " (window [0.4,0.6]), rows above q(t)sqrt(h) with C=" +
                    sci(curve.incrementConstant, 6) + ": " + std::to_string(above) + " of " +
                    std::to_string(curve.rows.size())};
}

Check holderEnvelopeCheck(const Options&) {
    constexpr double kBeta = 0.1;
    constexpr int kLmax = 500;
    int violations = 0, checks = 0;
    double worstRatio = 0.0;
    for (double a : {0.5, 0.75})
        for (double t : {kTau / 2.0, 10.0 * kTau}) {
            const FractionalModel model = standardModel(a);
            const double K = holderEnvelope(kBeta, t, kTau, kSpecC, kSpecA).value;
            for (int i = 0; i <= 40; ++i) {
                const double theta = i == 40 ? std::numbers::pi : 1e-3 * std::pow(std::numbers::pi / 1e-3, i / 40.0);
                const SeriesValue v = fieldDifferenceVariance(model, t, theta, kLmax);
                const double envelope = K * std::pow(theta, 2.0 * kBeta);
                const double ratio = (v.value + v.remainder) / envelope;
                worstRatio = std::max(worstRatio, ratio);
                ++checks;
                if (ratio > 1.0) ++violations;
            }
        }
    return {violations == 0, "max (series + tail bound) / (K theta^0.2) = " + sci(worstRatio) + " over " +
                                 std::to_string(checks) + " points, violations " + std::to_string(violations)};
}

Check synthesisOracle(const Options& opt) {
    constexpr int L = 64;
    std::mt19937_64 gen(opt.seed);
    std::normal_distribution<double> n01;
    CoefficientSet coeffs(L);
    for (int ell = 0; ell <= L; ++ell) {
        coeffs(ell, 0) = {n01(gen), 0.0};
        for (int m = 1; m <= ell; ++m) coeffs(ell, m) = {n01(gen), n01(gen)};
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);

    // Two grids of 512 points each: direct ring sums and the power-of-two transform.
    double worst = 0.0;
    for (auto [nLat, nLon] : {std::pair{16, 32}, std::pair{2, 256}}) {
        GridSpec g;
        g.kind = LatitudeKind::Custom;
        g.nLat = nLat;
        g.nLon = nLon;
        for (int j = 0; j < nLat; ++j) g.customTheta.push_back(std::acos(1.0 - 2.0 * u(gen)));
        std::sort(g.customTheta.begin(), g.customTheta.end());
        g.lonOffset = 2.0 * std::numbers::pi * u(gen);
        const FieldMap fast = synthesize(coeffs, g);
        double maxAbs = 0.0, maxDiff = 0.0;
        for (int j = 0; j < nLat; ++j)
            for (int k = 0; k < nLon; ++k) {
                const double ref = evaluateNaive(coeffs, SphPoint{g.customTheta[j], g.longitude(k)});
                maxAbs = std::max(maxAbs, std::abs(ref));
                maxDiff = std::max(maxDiff, std::abs(fast.at(j, k) - ref));
            }
        worst = std::max(worst, maxDiff / maxAbs);
    }

    double energy = 0.0;
    for (int ell = 0; ell <= L; ++ell) energy += coeffs.degreeEnergy(ell);
    double parseval = 0.0;
    for (int nLon : {132, 256}) {
        const GridSpec g = GridSpec::gaussLegendre(L + 2, nLon);
        const FieldMap f = synthesize(coeffs, g);
        const std::vector<double> w = g.latitudeWeights();
        double q = 0.0;
        for (int j = 0; j < g.nLat; ++j) {
            double ring = 0.0;
            for (int k = 0; k < nLon; ++k) ring += f.at(j, k) * f.at(j, k);
            q += w[j] * ring / nLon;
        }
        parseval = std::max(parseval, relErr(q, energy));
    }
    return {worst <= 1e-9 && parseval <= 1e-8, "fast vs naive max rel " + sci(worst) + " (1e-09), Parseval rel " +
                                                   sci(parseval) + " (1e-08)"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Relative paths of every regular file below dir, sorted.
std::vector<fs::path> listFiles(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) out.push_back(fs::relative(e.path(), dir));
    std::sort(out.begin(), out.end());
    return out;
}

std::string compareTrees(const fs::path& a, const fs::path& b) {
    const auto fa = listFiles(a), fb = listFiles(b);
    if (fa != fb) return "file lists differ between " + a.string() + " and " + b.string();
    for (const auto& f : fa)
        if (slurp(a / f) != slurp(b / f)) return "bytes differ in " + f.string() + " (" + b.filename().string() + ")";
    return {};
}

Check determinism(const Options& opt) {
    fs::path root = opt.outDir.empty() ? fs::temp_directory_path() / ("sfd_determinism_" + std::to_string(opt.seed) +
                                                                       "_" + std::to_string(std::random_device{}()))
                                       : opt.outDir / "determinism";
    const struct {
        const char* name;
        int workers;  // 0: default rule
    } runs[] = {{"run_a", 0}, {"run_b", 0}, {"workers_1", 1}, {"workers_8", 8}};
    std::size_t files = 0;
    for (const auto& r : runs) {
        clearSigmaCache();
        setWorkerCount(r.workers);
        fs::remove_all(root / r.name);
        try {
            files = writeDeterminismArtifacts(root / r.name, opt.seed).size();
        } catch (...) {
            setWorkerCount(0);
            throw;
        }
    }
    setWorkerCount(0);
    std::string diff;
    for (const char* other : {"run_b", "workers_1", "workers_8"}) {
        diff = compareTrees(root / "run_a", root / other);
        if (!diff.empty()) break;
    }
    if (opt.outDir.empty()) fs::remove_all(root);
    if (!diff.empty()) return {false, diff};
    return {true, std::to_string(files) + " files byte-identical across repeat, 1 worker and 8 workers"};
}

struct Entry {
    const char* title;
    double budget;
    Check (*fn)(const Options&);
};

const Entry kCriteria[] = {
    {"addition theorem", 5, additionTheorem},
    {"Mittag-Leffler accuracy", 10, mittagLeffler},
    {"sigma^2 correctness", 30, sigmaCorrectness},
    {"coefficient law", 120, coefficientLaw},
    {"truncation slopes", 600, truncationSlopes},
    {"increment scaling", 300, incrementScaling},
    {"Hoelder envelope", 60, holderEnvelopeCheck},
    {"synthesis oracle", 60, synthesisOracle},
    {"determinism", 120, determinism},
};

}  // namespace

std::vector<int> criterionIds() {
    std::vector<int> ids;
    for (int i = 1; i <= static_cast<int>(std::size(kCriteria)); ++i) ids.push_back(i);
    return ids;
}

Result runCriterion(int id, const Options& options) {
    if (id < 1 || id > static_cast<int>(std::size(kCriteria)))
        throw InputError("unknown acceptance criterion " + std::to_string(id));
    const Entry& e = kCriteria[id - 1];
    Result r;
    r.id = id;
    r.title = e.title;
    r.budgetSeconds = e.budget;
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
        c = e.fn(options);
    } catch (const std::exception& ex) {
        c = {false, std::string("error: ") + ex.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = c.ok && r.seconds < r.budgetSeconds;
    r.detail = c.detail;
    if (c.ok && !r.passed) r.detail += "; over runtime budget";
    return r;
}

std::string formatResult(const Result& r) {
    std::ostringstream os;
    os << "criterion " << r.id << (r.passed ? " [PASS] " : " [FAIL] ") << r.title << ": " << r.detail << " ("
       << sci(r.seconds, 3) << " s of " << r.budgetSeconds << " s)";
    return os.str();
}

std::vector<fs::path> writeDeterminismArtifacts(const fs::path& dir, std::uint64_t seed) {
    fs::create_directories(dir);
    const FractionalModel model = standardModel(0.5);
    std::vector<fs::path> written;

    const ErrorCurve trunc = truncationErrorCurve(model, 48, {8, 12, 16, 24, 32}, 10 * kTau, 6, seed);
    writeCurveCsv(trunc, dir / "trunc_0.5.csv");
    written.push_back(dir / "trunc_0.5.csv");

    const ErrorCurve incr = incrementCurve(model, 32, kTau + 1e-6, {1e-6, 2e-6, 3e-6, 4e-6}, 6, seed);
    writeCurveCsv(incr, dir / "incr_0.5.csv");
    written.push_back(dir / "incr_0.5.csv");

    SnapshotOptions snap;
    snap.image.png = false;
    evolutionSnapshots(model, 24, {0.0, 10 * kTau}, GridSpec::equiangular(16, 32), seed, dir, snap);
    for (const auto& f : listFiles(dir))
        if (f.extension() == ".csv" && f.filename().string().rfind("map_", 0) == 0) written.push_back(dir / f);
    return written;
}

}  // namespace sfd::acceptance
