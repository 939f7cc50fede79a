#include "sfd/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "sfd/error.hpp"
#include "sfd/parallel.hpp"
#include "text_io.hpp"

namespace sfd {

namespace {

void requireRealizations(int nReal) {
    if (nReal < 2) throw InputError("at least 2 realizations are required, got " + std::to_string(nReal));
}

const char* kindName(AbscissaKind k) { return k == AbscissaKind::Degree ? "degree" : "increment"; }

}  // namespace

ErrorCurve truncationErrorCurve(const FractionalModel& model, int Ltilde, const std::vector<int>& Lgrid, double t,
                                int nReal, std::uint64_t seed) {
    model.validate();
    requireRealizations(nReal);
    if (Lgrid.empty()) throw InputError("truncation: degree grid is empty");
    if (!std::is_sorted(Lgrid.begin(), Lgrid.end()) || std::adjacent_find(Lgrid.begin(), Lgrid.end()) != Lgrid.end())
        throw InputError("truncation: degree grid must be strictly ascending");
    if (Lgrid.front() < 1) throw InputError("truncation: degrees must be at least 1");
    if (Lgrid.back() >= Ltilde)
        throw InputError("truncation: largest degree " + std::to_string(Lgrid.back()) + " must be below Ltilde " +
                         std::to_string(Ltilde));
    if (!(t > 0.0)) throw DomainError("truncation: t must be positive");

    const std::size_t nL = Lgrid.size();
    std::vector<std::vector<double>> tails(static_cast<std::size_t>(nReal));
    parallelFor(tails.size(), [&](std::size_t j) {
        const CoefficientSet c = sampleCombined(model, Ltilde, t, RngStream(seed, static_cast<std::uint32_t>(j)));
        std::vector<double>& out = tails[j];
        out.assign(nL, 0.0);
        // suffix sum from Ltilde down, read off at each grid degree
        double acc = 0.0;
        std::size_t idx = nL;
        for (int ell = Ltilde; ell >= 1 && idx > 0; --ell) {
            while (idx > 0 && Lgrid[idx - 1] >= ell) {
                out[idx - 1] = acc;
                --idx;
            }
            acc += c.degreeEnergy(ell);
        }
    });

    ErrorCurve curve;
    curve.kind = AbscissaKind::Degree;
    curve.alpha = model.alpha;
    curve.tau = model.tau;
    curve.t = t;
    curve.degree = Ltilde;
    curve.realizations = nReal;
    curve.seed = seed;

    const AlgebraicSpectrum* ac = model.specC.algebraic();
    const AlgebraicSpectrum* aa = model.specA.algebraic();
    for (std::size_t i = 0; i < nL; ++i) {
        double mean = 0.0;
        for (const auto& tj : tails) mean += tj[i];
        mean /= nReal;
        CurveRow row;
        row.x = Lgrid[i];
        row.empirical = std::sqrt(mean);
        if (ac == nullptr || aa == nullptr) {
            row.flagged = true;
            row.note = "bound needs algebraic spectra";
        } else {
            try {
                const CombinedBound b = boundQCombined(Lgrid[i], t, model.tau, model.alpha, *ac, *aa);
                row.bound = b.value;
                row.note = toString(b.regime);
            } catch (const DomainError& e) {
                row.flagged = true;
                row.note = e.what();
            }
        }
        curve.rows.push_back(std::move(row));
    }
    return curve;
}

ErrorCurve incrementCurve(const FractionalModel& model, int L, double t, const std::vector<double>& hGrid, int nReal,
                          std::uint64_t seed, std::optional<double> incrementC) {
    model.validate();
    requireRealizations(nReal);
    if (L < 0) throw InputError("increments: L must be non-negative");
    if (!(t > model.tau)) throw DomainError("increments: t must exceed tau");
    if (hGrid.empty()) throw InputError("increments: h grid is empty");
    for (double h : hGrid)
        if (!(h > 0.0)) throw InputError("increments: every h must be positive");
    if (!std::is_sorted(hGrid.begin(), hGrid.end())) throw InputError("increments: h grid must be ascending");

    const std::size_t nH = hGrid.size();
    std::vector<std::vector<double>> sq(static_cast<std::size_t>(nReal), std::vector<double>(nH, 0.0));
    parallelFor(sq.size(), [&](std::size_t j) {
        const RngStream rng(seed, static_cast<std::uint32_t>(j));
        for (std::size_t i = 0; i < nH; ++i) {
            auto [a, b] = sampleCombinedPair(model, L, t, hGrid[i], rng);
            b -= a;
            double e = 0.0;
            for (int ell = 0; ell <= L; ++ell) e += b.degreeEnergy(ell);
            sq[j][i] = e;
        }
    });

    ErrorCurve curve;
    curve.kind = AbscissaKind::Increment;
    curve.alpha = model.alpha;
    curve.tau = model.tau;
    curve.t = t;
    curve.degree = L;
    curve.realizations = nReal;
    curve.seed = seed;

    const AlgebraicSpectrum* ac = model.specC.algebraic();
    const AlgebraicSpectrum* aa = model.specA.algebraic();
    const double c = incrementC.value_or(measuredIncrementConstant(model.alpha));
    curve.incrementConstant = c;
    for (std::size_t i = 0; i < nH; ++i) {
        double mean = 0.0;
        for (const auto& sj : sq) mean += sj[i];
        mean /= nReal;
        CurveRow row;
        row.x = hGrid[i];
        row.empirical = std::sqrt(mean);
        if (ac == nullptr || aa == nullptr) {
            row.flagged = true;
            row.note = "bound needs algebraic spectra";
        } else {
            row.bound = incrementBound(t, hGrid[i], model.tau, model.alpha, *ac, *aa, c);
            row.note = "measured C";
        }
        curve.rows.push_back(std::move(row));
    }
    return curve;
}

SlopeFit fitLogLogSlope(const ErrorCurve& curve, const FitWindow& window) {
    double sx = 0.0, sy = 0.0;
    std::vector<std::pair<double, double>> pts;
    for (const CurveRow& r : curve.rows) {
        if (r.x < window.xmin || r.x > window.xmax) continue;
        if (!(r.empirical > 0.0) || !(r.x > 0.0)) continue;
        pts.emplace_back(std::log(r.x), std::log(r.empirical));
    }
    if (pts.size() < 3)
        throw InputError("slope fit needs at least 3 rows with positive values in [" + io::formatDouble(window.xmin) +
                         ", " + io::formatDouble(window.xmax) + "], found " + std::to_string(pts.size()));
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
    }
    const double n = static_cast<double>(pts.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0.0) throw InputError("slope fit needs at least two distinct abscissae");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.xmin = std::exp(pts.front().first);
    fit.xmax = std::exp(pts.back().first);
    fit.points = static_cast<int>(pts.size());
    return fit;
}

FitWindow defaultFitWindow(const ErrorCurve& curve) {
    if (curve.rows.empty()) throw InputError("slope fit on an empty curve");
    auto usable = [](const CurveRow& r) { return !r.flagged && r.empirical > 0.0; };
    std::size_t end = curve.rows.size();
    while (end > 0 && !usable(curve.rows[end - 1])) --end;
    if (end == 0) throw InputError("slope fit: every row is flagged or zero");
    std::size_t begin = end - 1;
    while (begin > 0 && usable(curve.rows[begin - 1])) --begin;
    const double xmax = curve.rows[end - 1].x;
    const double xmin = std::max(curve.rows[begin].x, xmax / 10.0 * (1.0 - 1e-12));
    return {xmin, xmax};
}

std::string formatNumberForName(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<FieldMap> evolutionSnapshots(const FractionalModel& model, int L, const std::vector<double>& times,
                                         const GridSpec& grid, std::uint64_t seed, const std::filesystem::path& outDir,
                                         const SnapshotOptions& options) {
    model.validate();
    grid.validate();
    if (L < 1) throw InputError("snapshots: L must be at least 1");
    if (times.empty()) throw InputError("snapshots: no times given");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0)) throw InputError("snapshots: times must be non-negative");
        if (i > 0 && !(times[i] > times[i - 1])) throw InputError("snapshots: times must be strictly ascending");
    }
    std::error_code ec;
    std::filesystem::create_directories(outDir, ec);
    if (ec) throw IoError("cannot create output directory '" + outDir.string() + "'");

    const RngStream rng(seed, 0);
    const CoefficientSet init = sampleInitialCoefficients(model.specC, L, rng);
    std::vector<FieldMap> maps;
    for (double t : times) {
        CoefficientSet c = evolveHomogeneous(init, t, model.alpha);
        if (t > model.tau) c += sampleInhomogeneous(model.specA, L, t, model.tau, model.alpha, rng);
        c.setOrigin(seed, 0);
        FieldMap map = synthesize(c, grid);
        const std::string stem = "map_t" + formatNumberForName(t);
        writeMapImage(map, outDir / (stem + ".ppm"), options.image);
        if (options.writeCsv) writeMapCsv(map, outDir / (stem + ".csv"));
        maps.push_back(std::move(map));
    }
    return maps;
}

void writeCurveCsv(const ErrorCurve& curve, const std::filesystem::path& path) {
    std::string out = "x,empirical,bound,flag\n";
    for (const CurveRow& r : curve.rows) {
        out += io::formatDouble(r.x) + ',' + io::formatDouble(r.empirical) + ',' + io::formatDouble(r.bound) + ',' +
               (r.flagged ? "1" : "0") + '\n';
    }
    io::writeFileAtomically(path, out);
}

void writeCurveJson(const ErrorCurve& curve, const std::optional<SlopeFit>& fit, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["kind"] = kindName(curve.kind);
    j["alpha"] = curve.alpha;
    j["tau"] = curve.tau;
    j["t"] = curve.t;
    j[curve.kind == AbscissaKind::Degree ? "Ltilde" : "L"] = curve.degree;
    j["realizations"] = curve.realizations;
    j["seed"] = curve.seed;
    if (curve.kind == AbscissaKind::Increment) {
        j["increment_c"] = curve.incrementConstant;
        j["bound_note"] = "upper bound evaluated with the measured constant C";
    }
    auto rows = nlohmann::ordered_json::array();
    for (const CurveRow& r : curve.rows) {
        nlohmann::ordered_json row;
        row["x"] = r.x;
        row["empirical"] = r.empirical;
        row["bound"] = r.bound;
        row["flag"] = r.flagged;
        row["note"] = r.note;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    if (fit) {
        j["fit"] = {{"slope", fit->slope}, {"intercept", fit->intercept}, {"r2", fit->r2},
                    {"xmin", fit->xmin},   {"xmax", fit->xmax},           {"points", fit->points}};
    }
    io::writeFileAtomically(path, j.dump(2) + "\n");
}

}  // namespace sfd
