// sfdiff: command-line front end of the sphere fractional diffusion library.
//
// Exit codes: 0 success, 1 selftest criteria failed, 2 usage/config/domain error,
// 3 accuracy error, 4 I/O error.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "acceptance.hpp"
#include "config.hpp"
#include "sfd/error.hpp"
#include "sfd/experiments.hpp"
#include "sfd/specfun.hpp"
#include "sfd/spectra.hpp"
#include "sfd/stochastic.hpp"
#include "sfd/synthesis.hpp"

#ifndef SFD_VERSION
#define SFD_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using sfdiff::json;
using sfdiff::RunConfig;

namespace {

const std::vector<std::string> kModelKeys{"alpha", "tau", "C_head", "C_coeff", "kappa1", "A_head", "A_coeff", "kappa2"};

std::vector<std::string> withModel(std::initializer_list<const char*> extra) {
    std::vector<std::string> keys = kModelKeys;
    keys.insert(keys.end(), extra.begin(), extra.end());
    return keys;
}

const std::vector<std::string> kBoundsKeys = withModel({"t", "Lgrid", "beta_star", "out"});
const std::vector<std::string> kSimulateKeys =
    withModel({"L", "times", "nlat", "nlon", "grid", "colormap", "vmin", "vmax", "png", "csv", "seed", "out"});
const std::vector<std::string> kTruncationKeys =
    withModel({"Ltilde", "Lgrid", "realizations", "t", "seed", "out", "fit_xmin", "fit_xmax"});
const std::vector<std::string> kIncrementKeys =
    withModel({"L", "t", "hgrid", "realizations", "seed", "out", "fit_xmin", "fit_xmax", "increment_c"});

// A subcommand driven by a config file plus per-key overrides.
struct ConfigCommand {
    CLI::App* app = nullptr;
    std::vector<std::string> keys;
    std::string configPath;
    std::map<std::string, std::string> raw;

    RunConfig resolve() const {
        RunConfig cfg;
        if (!configPath.empty()) sfdiff::loadConfigFile(cfg, configPath);
        for (const std::string& k : keys)
            if (app->get_option("--" + k)->count() > 0) sfdiff::applyFlag(cfg, k, raw.at(k));
        return cfg;
    }
};

ConfigCommand& addConfigCommand(CLI::App& root, std::vector<ConfigCommand>& store, const char* name, const char* desc,
                                const std::vector<std::string>& keys) {
    ConfigCommand& cmd = store.emplace_back();
    cmd.app = root.add_subcommand(name, desc);
    cmd.keys = keys;
    cmd.app->add_option("--config", cmd.configPath, "flat JSON file with any of the keys below [path]")
        ->type_name("PATH");
    for (const std::string& k : keys) {
        cmd.raw[k];
        const auto& spec = sfdiff::keySpec(k);
        cmd.app->add_option("--" + k, cmd.raw[k], spec.help)->type_name(spec.typeName);
    }
    return cmd;
}

void ensureDir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw sfd::IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

void writeText(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw sfd::IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.close();
    if (!out) throw sfd::IoError("write to '" + path.string() + "' failed");
}

void writeManifest(const fs::path& dir, const std::string& command, const RunConfig& cfg,
                   const std::vector<std::string>& keys, const std::vector<fs::path>& outputs) {
    json j;
    j["tool"] = "sfdiff";
    j["version"] = SFD_VERSION;
    j["command"] = command;
    j["config"] = sfdiff::toJson(cfg, keys);
    j["outputs"] = json::array();
    for (const auto& p : outputs) j["outputs"].push_back(p.filename().string());
    writeText(dir / "manifest.json", j.dump(2) + "\n");
}

// --- subcommands -------------------------------------------------------------

int runMl(double alpha, double beta, const std::vector<double>& xs) {
    const sfd::MLParams p{alpha, beta};
    json j;
    j["alpha"] = alpha;
    j["beta"] = beta;
    if (xs.size() == 1) {
        j["x"] = xs.front();
        j["value"] = sfd::mlNeg(p, xs.front());
    } else {
        json values = json::array();
        for (double x : xs) values.push_back(sfd::mlNeg(p, x));
        j["x"] = xs;
        j["value"] = values;
    }
    std::cout << j.dump() << "\n";
    return 0;
}

int runSigma(int ell, double t, double alpha, std::optional<double> h) {
    json j;
    j["ell"] = ell;
    j["t"] = t;
    j["alpha"] = alpha;
    j["sigma2"] = sfd::sigmaSquared(ell, t, alpha);
    if (ell >= 1 && t > 0.0) {
        const bool applies = sfd::sigmaBoundApplies(ell, t, alpha);
        j["bound"] = applies ? json(sfd::sigmaSquaredBound(ell, t, alpha)) : json(nullptr);
        j["bound_applies"] = applies;
    }
    if (h) {
        j["lag"] = *h;
        j["cross"] = sfd::crossSigma(ell, t, *h, alpha);
    }
    std::cout << j.dump() << "\n";
    return 0;
}

int runBounds(RunConfig cfg) {
    if (!cfg.t) cfg.t = 10.0 * cfg.tau;
    sfdiff::validateKeys(cfg, kBoundsKeys);
    const sfd::FractionalModel m = cfg.model();
    m.validate();
    const double t = *cfg.t;
    const auto& C = *m.specC.algebraic();
    const auto& A = *m.specA.algebraic();

    json j;
    j["c_tail_C"] = sfd::tailConstant(C);
    j["c_tail_A"] = sfd::tailConstant(A);
    j["m_alpha"] = sfd::mAlpha(cfg.alpha);
    j["gamma_alpha"] = sfd::gammaAlphaKappa(cfg.alpha, cfg.kappa2);
    j["increment_c"] = sfd::measuredIncrementConstant(cfg.alpha);
    const auto ex = sfd::boundExponents(cfg.alpha, cfg.kappa1, cfg.kappa2);
    j["exponents"] = {{"case_I", ex.caseI}, {"case_II", ex.caseII}, {"case_III", ex.caseIII}};
    j["t"] = t;
    j["psi_H"] = sfd::psiH(cfg.alpha, t);
    if (t > cfg.tau) {
        j["psi_I"] = sfd::psiI(cfg.alpha, t - cfg.tau);
        j["increment_q"] = sfd::incrementBound(t, 1.0, cfg.tau, cfg.alpha, C, A, sfd::measuredIncrementConstant(cfg.alpha));
    }
    try {
        const auto K = sfd::holderEnvelope(cfg.beta_star, t, cfg.tau, C, A);
        j["holder_K"] = K.value;
    } catch (const sfd::DomainError& e) {
        j["holder_K"] = nullptr;
        j["holder_note"] = e.what();
    }
    json rows = json::array();
    for (int L : cfg.Lgrid) {
        json r{{"L", L}};
        try {
            const auto b = sfd::boundQCombined(L, t, cfg.tau, cfg.alpha, C, A);
            r["bound"] = b.value;
            r["case"] = sfd::toString(b.regime);
            r["exponent"] = b.exponent;
        } catch (const sfd::DomainError& e) {
            r["bound"] = nullptr;
            r["note"] = e.what();
        }
        rows.push_back(r);
    }
    j["truncation_bounds"] = rows;

    const fs::path dir = cfg.out;
    ensureDir(dir);
    writeText(dir / "bounds.json", j.dump(2) + "\n");
    writeManifest(dir, "bounds", cfg, kBoundsKeys, {dir / "bounds.json"});
    std::cout << j.dump(2) << "\n";
    return 0;
}

int runSimulate(RunConfig cfg) {
    if (!cfg.L) cfg.L = 600;
    if (cfg.times.empty()) cfg.times = {0.0, cfg.tau, 10.0 * cfg.tau};
    sfdiff::validateKeys(cfg, kSimulateKeys);
    const sfd::GridSpec grid = cfg.grid == "gauss-legendre" ? sfd::GridSpec::gaussLegendre(cfg.nlat, cfg.nlon)
                                                            : sfd::GridSpec::equiangular(cfg.nlat, cfg.nlon);
    sfd::SnapshotOptions opt;
    opt.image.colormap = sfd::colormapFromString(cfg.colormap);
    opt.image.vmin = cfg.vmin;
    opt.image.vmax = cfg.vmax;
    opt.image.png = cfg.png;
    opt.writeCsv = cfg.csv;

    const fs::path dir = cfg.out;
    ensureDir(dir);
    const auto maps = sfd::evolutionSnapshots(cfg.model(), *cfg.L, cfg.times, grid, cfg.seed, dir, opt);
    std::vector<fs::path> outputs;
    json summary = json::array();
    for (const auto& map : maps) {
        const std::string stem = "map_t" + sfd::formatNumberForName(map.time);
        for (const char* ext : {".ppm", ".png", ".json", ".csv"})
            if (fs::exists(dir / (stem + ext))) outputs.push_back(dir / (stem + ext));
        const auto [lo, hi] = std::minmax_element(map.values.begin(), map.values.end());
        summary.push_back({{"time", map.time}, {"image", stem + ".ppm"}, {"min", *lo}, {"max", *hi}});
    }
    writeManifest(dir, "simulate", cfg, kSimulateKeys, outputs);
    std::cout << json{{"maps", summary}}.dump(2) << "\n";
    return 0;
}

json fitJson(const sfd::ErrorCurve& curve, const RunConfig& cfg, std::optional<sfd::SlopeFit>& fit) {
    sfd::FitWindow w = sfd::defaultFitWindow(curve);
    if (cfg.fit_xmin) w.xmin = *cfg.fit_xmin;
    if (cfg.fit_xmax) w.xmax = *cfg.fit_xmax;
    try {
        fit = sfd::fitLogLogSlope(curve, w);
        return {{"slope", fit->slope}, {"intercept", fit->intercept}, {"r2", fit->r2},
                {"xmin", fit->xmin},   {"xmax", fit->xmax},           {"points", fit->points}};
    } catch (const sfd::InputError& e) {
        return {{"slope", nullptr}, {"note", e.what()}};
    }
}

int writeCurveOutputs(const sfd::ErrorCurve& curve, const RunConfig& cfg, const std::string& command,
                      const std::string& stem, const std::vector<std::string>& keys) {
    const fs::path dir = cfg.out;
    ensureDir(dir);
    std::optional<sfd::SlopeFit> fit;
    json summary;
    summary["fit"] = fitJson(curve, cfg, fit);
    sfd::writeCurveCsv(curve, dir / (stem + ".csv"));
    sfd::writeCurveJson(curve, fit, dir / (stem + ".json"));
    writeManifest(dir, command, cfg, keys, {dir / (stem + ".csv"), dir / (stem + ".json")});
    int flagged = 0;
    for (const auto& r : curve.rows) flagged += r.flagged ? 1 : 0;
    summary["csv"] = (dir / (stem + ".csv")).string();
    summary["rows"] = curve.rows.size();
    summary["flagged"] = flagged;
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int runTruncation(RunConfig cfg) {
    if (!cfg.t) cfg.t = 10.0 * cfg.tau;
    sfdiff::validateKeys(cfg, kTruncationKeys);
    const auto curve = sfd::truncationErrorCurve(cfg.model(), cfg.Ltilde, cfg.Lgrid, *cfg.t, cfg.realizations, cfg.seed);
    return writeCurveOutputs(curve, cfg, "truncation", "trunc_" + sfd::formatNumberForName(cfg.alpha), kTruncationKeys);
}

int runIncrements(RunConfig cfg) {
    if (!cfg.L) cfg.L = 400;
    if (!cfg.t) cfg.t = cfg.tau + 1e-6;
    if (cfg.hgrid.empty())
        for (int k = 1; k <= 11; ++k) cfg.hgrid.push_back(k * 1e-6);
    sfdiff::validateKeys(cfg, kIncrementKeys);
    if (!(*cfg.t > cfg.tau)) throw sfd::InputError("t: must exceed tau for increment curves");
    const auto curve = sfd::incrementCurve(cfg.model(), *cfg.L, *cfg.t, cfg.hgrid, cfg.realizations, cfg.seed, cfg.increment_c);
    return writeCurveOutputs(curve, cfg, "increments", "incr_" + sfd::formatNumberForName(cfg.alpha), kIncrementKeys);
}

int runSelftest(std::vector<int> ids, std::uint64_t seed, const std::string& out) {
    sfd::acceptance::Options opt;
    opt.seed = seed;
    opt.outDir = out;
    ensureDir(opt.outDir);
    if (ids.empty()) ids = sfd::acceptance::criterionIds();
    bool all = true;
    json results = json::array();
    for (int id : ids) {
        const auto r = sfd::acceptance::runCriterion(id, opt);
        std::cout << sfd::acceptance::formatResult(r) << std::endl;
        all = all && r.passed;
        results.push_back({{"criterion", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail},
                           {"seconds", r.seconds}});
    }
    writeText(opt.outDir / "selftest.json", json{{"seed", seed}, {"results", results}}.dump(2) + "\n");
    json manifest{{"tool", "sfdiff"}, {"version", SFD_VERSION}, {"command", "selftest"}, {"seed", seed},
                  {"criteria", ids}};
    writeText(opt.outDir / "manifest.json", manifest.dump(2) + "\n");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation of the time-fractional stochastic diffusion equation on the unit sphere", "sfdiff"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SFD_VERSION);

    double mlAlpha = 1.0, mlBeta = 1.0;
    std::vector<double> mlX;
    auto* ml = app.add_subcommand("ml", "evaluate E_{alpha,beta}(-x) and print JSON");
    ml->add_option("--alpha", mlAlpha, "order alpha in (0,1] [dimensionless]")->required();
    ml->add_option("--beta", mlBeta, "second parameter beta > 0 [dimensionless]")->capture_default_str();
    ml->add_option("--x", mlX, "one or more arguments x >= 0 [dimensionless]")->required();

    int sgEll = 1;
    double sgT = 0.0, sgAlpha = 0.5;
    std::optional<double> sgH;
    auto* sigma = app.add_subcommand("sigma", "sigma^2_{ell,t,alpha} with its closed-form bound, as JSON");
    sigma->add_option("--ell", sgEll, "degree ell >= 0 [degree]")->required();
    sigma->add_option("--t", sgT, "upper integration limit t >= 0 [time]")->required();
    sigma->add_option("--alpha", sgAlpha, "order alpha in (0,1] [dimensionless]")->required();
    sigma->add_option("--lag", sgH, "also report the cross term at lag h >= 0 [time]");

    std::vector<ConfigCommand> cmds;
    cmds.reserve(4);
    auto& bounds = addConfigCommand(app, cmds, "bounds", "all error-bound constants for a configuration, as JSON", kBoundsKeys);
    auto& simulate = addConfigCommand(app, cmds, "simulate", "snapshot maps of one realization (images + CSV)", kSimulateKeys);
    auto& truncation =
        addConfigCommand(app, cmds, "truncation", "truncation-error curve with bound overlay and slope fit", kTruncationKeys);
    auto& increments =
        addConfigCommand(app, cmds, "increments", "temporal-increment curve with bound overlay and slope fit", kIncrementKeys);

    std::vector<int> stIds;
    std::uint64_t stSeed = sfd::acceptance::kDefaultSeed;
    std::string stOut = "selftest_out";
    auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria, one line per criterion");
    selftest->add_option("--criterion", stIds, "criterion number 1-9, repeatable; default all")->check(CLI::Range(1, 9));
    selftest->add_option("--seed", stSeed, "master seed [integer]")->capture_default_str();
    selftest->add_option("--out", stOut, "directory for curve CSV/JSON [path]")->capture_default_str();

    if (argc > 1 && argv[1][0] != '-' && app.get_subcommand_no_throw(argv[1]) == nullptr) {
        std::cerr << "sfdiff: unknown subcommand '" << argv[1] << "'\n\n" << app.help();
        return 2;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "sfdiff: " << e.what() << "\n\n";
        const CLI::App* failing = &app;
        for (const auto* sub : app.get_subcommands()) failing = sub;
        std::cerr << failing->help();
        return 2;
    }

    try {
        if (ml->parsed()) return runMl(mlAlpha, mlBeta, mlX);
        if (sigma->parsed()) return runSigma(sgEll, sgT, sgAlpha, sgH);
        if (bounds.app->parsed()) return runBounds(bounds.resolve());
        if (simulate.app->parsed()) return runSimulate(simulate.resolve());
        if (truncation.app->parsed()) return runTruncation(truncation.resolve());
        if (increments.app->parsed()) return runIncrements(increments.resolve());
        if (selftest->parsed()) return runSelftest(stIds, stSeed, stOut);
    } catch (const sfd::AccuracyError& e) {
        std::cerr << "sfdiff: accuracy error: " << e.what() << "\n";
        return 3;
    } catch (const sfd::IoError& e) {
        std::cerr << "sfdiff: I/O error: " << e.what() << "\n";
        return 4;
    } catch (const sfd::Error& e) {
        std::cerr << "sfdiff: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "sfdiff: I/O error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
