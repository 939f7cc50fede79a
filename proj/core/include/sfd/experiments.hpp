#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sfd/stochastic.hpp"
#include "sfd/synthesis.hpp"

namespace sfd {

enum class AbscissaKind { Degree, Increment };

struct CurveRow {
    double x = 0.0;
    double empirical = 0.0;
    double bound = 0.0;
    bool flagged = false;  ///< bound undefined or its assumptions fail at this row
    std::string note;      ///< bound regime ("I", "II", "III") or the reason for the flag
};

/// Empirical error against its theoretical bound, one row per abscissa.
struct ErrorCurve {
    AbscissaKind kind = AbscissaKind::Degree;
    std::vector<CurveRow> rows;

    // run metadata
    double alpha = 0.0;
    double tau = 0.0;
    double t = 0.0;
    int degree = 0;  ///< Ltilde for truncation curves, L for increment curves
    int realizations = 0;
    std::uint64_t seed = 0;
    double incrementConstant = 0.0;  ///< constant used in the increment bound (0 if unused)
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double xmin = 0.0;
    double xmax = 0.0;
    int points = 0;
};

struct FitWindow {
    double xmin = 0.0;
    double xmax = 0.0;
};

/// Q_{L,Ltilde}(t) for every L in Lgrid from nReal shared draws at degree Ltilde.
/// Rows whose bound case cannot be decided are kept and flagged.
ErrorCurve truncationErrorCurve(const FractionalModel& model, int Ltilde, const std::vector<int>& Lgrid, double t,
                                int nReal, std::uint64_t seed);

/// J_{h,L}(t) for every h in hGrid from jointly sampled pairs. `incrementC`
/// overrides the measured constant of the increment bound.
ErrorCurve incrementCurve(const FractionalModel& model, int L, double t, const std::vector<double>& hGrid, int nReal,
                          std::uint64_t seed, std::optional<double> incrementC = std::nullopt);

/// Ordinary least squares on (ln x, ln empirical) over rows in the window with
/// positive empirical values. Throws InputError with fewer than 3 such rows.
SlopeFit fitLogLogSlope(const ErrorCurve& curve, const FitWindow& window);

/// Largest decade [xmax/10, xmax] inside the last unbroken run of unflagged rows.
FitWindow defaultFitWindow(const ErrorCurve& curve);

/// File-name friendly form of a number: shortest round-trip decimal.
std::string formatNumberForName(double v);

struct SnapshotOptions {
    ImageOptions image;
    bool writeCsv = true;
};

/// One realization evaluated at every time: shared initial draw and shared noise
/// stream. Writes map_t{time}.ppm (+ .png/.json) and map_t{time}.csv to outDir.
std::vector<FieldMap> evolutionSnapshots(const FractionalModel& model, int L, const std::vector<double>& times,
                                         const GridSpec& grid, std::uint64_t seed, const std::filesystem::path& outDir,
                                         const SnapshotOptions& options = {});

/// CSV with header `x,empirical,bound,flag`.
void writeCurveCsv(const ErrorCurve& curve, const std::filesystem::path& path);
/// JSON with metadata, rows and (when given) the slope fit.
void writeCurveJson(const ErrorCurve& curve, const std::optional<SlopeFit>& fit, const std::filesystem::path& path);

}  // namespace sfd
