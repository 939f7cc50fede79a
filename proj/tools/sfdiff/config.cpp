#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sfd/error.hpp"

namespace sfdiff {

using sfd::InputError;

sfd::FractionalModel RunConfig::model() const {
    return {alpha, tau, sfd::AlgebraicSpectrum{C_head, C_coeff, kappa1}, sfd::AlgebraicSpectrum{A_head, A_coeff, kappa2}};
}

namespace {

[[noreturn]] void typeError(const std::string& key, const char* expected, const json& j) {
    throw InputError(key + ": expected " + expected + ", got " + j.dump());
}

double asDouble(const std::string& key, const json& j) {
    if (!j.is_number()) typeError(key, "a number", j);
    return j.get<double>();
}

long long asInteger(const std::string& key, const json& j) {
    if (j.is_number_integer()) return j.get<long long>();
    if (j.is_number_float()) {
        const double d = j.get<double>();
        if (d == std::floor(d) && std::abs(d) < 1e15) return static_cast<long long>(d);
    }
    typeError(key, "an integer", j);
}

int asInt(const std::string& key, const json& j) {
    const long long v = asInteger(key, j);
    if (v < -2147483647LL || v > 2147483647LL) typeError(key, "a 32-bit integer", j);
    return static_cast<int>(v);
}

template <typename T, typename F>
std::vector<T> asList(const std::string& key, const json& j, F element) {
    if (j.is_number()) return {element(key, j)};
    if (!j.is_array()) typeError(key, "a list of numbers", j);
    std::vector<T> out;
    for (const json& e : j) out.push_back(element(key, e));
    return out;
}

template <typename T>
json optionalJson(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

std::vector<KeySpec> buildKeys() {
    std::vector<KeySpec> k;
    auto number = [&](const char* name, const char* help, double RunConfig::*field) {
        k.push_back({name, help, [name, field](RunConfig& c, const json& j) { c.*field = asDouble(name, j); },
                     [field](const RunConfig& c) { return json(c.*field); }, "NUM"});
    };
    auto optNumber = [&](const char* name, const char* help, std::optional<double> RunConfig::*field) {
        k.push_back({name, help,
                     [name, field](RunConfig& c, const json& j) {
                         c.*field = j.is_null() ? std::nullopt : std::optional<double>(asDouble(name, j));
                     },
                     [field](const RunConfig& c) { return optionalJson(c.*field); }, "NUM"});
    };
    auto integer = [&](const char* name, const char* help, int RunConfig::*field) {
        k.push_back({name, help, [name, field](RunConfig& c, const json& j) { c.*field = asInt(name, j); },
                     [field](const RunConfig& c) { return json(c.*field); }, "INT"});
    };
    auto text = [&](const char* name, const char* help, std::string RunConfig::*field) {
        k.push_back({name, help,
                     [name, field](RunConfig& c, const json& j) {
                         if (!j.is_string()) typeError(name, "a string", j);
                         c.*field = j.get<std::string>();
                     },
                     [field](const RunConfig& c) { return json(c.*field); }, "TEXT"});
    };
    auto flag = [&](const char* name, const char* help, bool RunConfig::*field) {
        k.push_back({name, help,
                     [name, field](RunConfig& c, const json& j) {
                         if (!j.is_boolean()) typeError(name, "true or false", j);
                         c.*field = j.get<bool>();
                     },
                     [field](const RunConfig& c) { return json(c.*field); }, "BOOL"});
    };

    number("alpha", "fractional order alpha in (0,1] [dimensionless]", &RunConfig::alpha);
    number("tau", "noise onset time tau > 0 [time]", &RunConfig::tau);
    number("C_head", "initial spectrum C_0 [variance]", &RunConfig::C_head);
    number("C_coeff", "initial spectrum amplitude, C_l = C_coeff l^-kappa1 [variance]", &RunConfig::C_coeff);
    number("kappa1", "initial spectrum decay exponent > 2 [dimensionless]", &RunConfig::kappa1);
    number("A_head", "noise spectrum A_0 [variance per time]", &RunConfig::A_head);
    number("A_coeff", "noise spectrum amplitude, A_l = A_coeff l^-kappa2 [variance per time]", &RunConfig::A_coeff);
    number("kappa2", "noise spectrum decay exponent > 2 [dimensionless]", &RunConfig::kappa2);
    k.push_back({"seed", "master seed of the counter-based generator [integer]",
                 [](RunConfig& c, const json& j) {
                     if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
                         typeError("seed", "a non-negative integer", j);
                     c.seed = j.get<std::uint64_t>();
                 },
                 [](const RunConfig& c) { return json(c.seed); }, "INT"});
    text("out", "output directory [path]", &RunConfig::out);
    k.push_back({"L", "truncation degree of the simulated field [degree]",
                 [](RunConfig& c, const json& j) { c.L = j.is_null() ? std::nullopt : std::optional<int>(asInt("L", j)); },
                 [](const RunConfig& c) { return optionalJson(c.L); }, "INT"});
    integer("Ltilde", "reference degree standing in for the exact solution [degree]", &RunConfig::Ltilde);
    k.push_back({"Lgrid", "ascending truncation degrees below Ltilde [degree list]",
                 [](RunConfig& c, const json& j) { c.Lgrid = asList<int>("Lgrid", j, asInt); },
                 [](const RunConfig& c) { return json(c.Lgrid); }, "LIST"});
    integer("realizations", "number of independent realizations N [count]", &RunConfig::realizations);
    optNumber("t", "evaluation time [time]", &RunConfig::t);
    k.push_back({"times", "ascending snapshot times, default 0, tau, 10 tau [time list]",
                 [](RunConfig& c, const json& j) { c.times = asList<double>("times", j, asDouble); },
                 [](const RunConfig& c) { return json(c.times); }, "LIST"});
    k.push_back({"hgrid", "time increments h, default k*1e-6 for k = 1..11 [time list]",
                 [](RunConfig& c, const json& j) { c.hgrid = asList<double>("hgrid", j, asDouble); },
                 [](const RunConfig& c) { return json(c.hgrid); }, "LIST"});
    integer("nlat", "latitude rings of the map grid [count]", &RunConfig::nlat);
    integer("nlon", "longitudes per ring [count]", &RunConfig::nlon);
    text("grid", "latitude layout: equiangular or gauss-legendre", &RunConfig::grid);
    text("colormap", "image colormap: gray, viridis or diverging", &RunConfig::colormap);
    optNumber("vmin", "lower end of the colour scale, default map minimum [field units]", &RunConfig::vmin);
    optNumber("vmax", "upper end of the colour scale, default map maximum [field units]", &RunConfig::vmax);
    flag("png", "also write PNG images when available [true/false]", &RunConfig::png);
    flag("csv", "also write map CSV files [true/false]", &RunConfig::csv);
    optNumber("fit_xmin", "lower end of the slope-fit window, default automatic [degree or time]", &RunConfig::fit_xmin);
    optNumber("fit_xmax", "upper end of the slope-fit window, default automatic [degree or time]", &RunConfig::fit_xmax);
    optNumber("increment_c", "constant c of the increment bound, default measured [dimensionless]",
              &RunConfig::increment_c);
    number("beta_star", "Hoelder exponent beta* of the envelope [dimensionless]", &RunConfig::beta_star);
    return k;
}

bool isListKey(const std::string& key) { return key == "Lgrid" || key == "times" || key == "hgrid"; }

}  // namespace

const std::vector<KeySpec>& allKeys() {
    static const std::vector<KeySpec> keys = buildKeys();
    return keys;
}

const KeySpec& keySpec(const std::string& name) {
    for (const KeySpec& k : allKeys())
        if (k.name == name) return k;
    throw InputError(name + ": unknown configuration key");
}

void loadConfigFile(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sfd::IoError("cannot open config file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw InputError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw InputError("config '" + path.string() + "' must hold a JSON object");
    for (const auto& [key, value] : j.items()) keySpec(key).set(cfg, value);
}

void applyFlag(RunConfig& cfg, const std::string& key, const std::string& raw) {
    const KeySpec& spec = keySpec(key);
    json value;
    const std::string text = isListKey(key) && !raw.empty() && raw.front() != '[' ? "[" + raw + "]" : raw;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = raw;  // bare strings such as --grid gauss-legendre
    }
    spec.set(cfg, value);
}

namespace {

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw InputError(key + ": " + what);
}

std::string show(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

void validateKeys(const RunConfig& c, const std::vector<std::string>& keys) {
    auto has = [&](const char* k) { return std::find(keys.begin(), keys.end(), k) != keys.end(); };
    if (has("alpha")) require(c.alpha > 0.0 && c.alpha <= 1.0, "alpha", "must lie in (0,1], got " + show(c.alpha));
    if (has("tau")) require(c.tau > 0.0 && std::isfinite(c.tau), "tau", "must be positive, got " + show(c.tau));
    for (auto [name, v] : {std::pair{"C_head", c.C_head}, {"C_coeff", c.C_coeff}, {"A_head", c.A_head},
                           {"A_coeff", c.A_coeff}})
        if (has(name)) require(v >= 0.0 && std::isfinite(v), name, "must be non-negative, got " + show(v));
    for (auto [name, v] : {std::pair{"kappa1", c.kappa1}, {"kappa2", c.kappa2}})
        if (has(name)) require(v > 2.0 && std::isfinite(v), name, "must exceed 2, got " + show(v));
    if (has("L") && c.L) require(*c.L >= 1, "L", "must be at least 1, got " + std::to_string(*c.L));
    if (has("Lgrid")) {
        require(!c.Lgrid.empty(), "Lgrid", "must not be empty");
        require(std::is_sorted(c.Lgrid.begin(), c.Lgrid.end()) &&
                    std::adjacent_find(c.Lgrid.begin(), c.Lgrid.end()) == c.Lgrid.end(),
                "Lgrid", "must be strictly ascending");
        require(c.Lgrid.front() >= 1, "Lgrid", "degrees must be at least 1");
    }
    if (has("Ltilde") && has("Lgrid") && !c.Lgrid.empty())
        require(c.Ltilde > c.Lgrid.back(), "Ltilde",
                "must exceed max(Lgrid) = " + std::to_string(c.Lgrid.back()) + ", got " + std::to_string(c.Ltilde));
    if (has("realizations"))
        require(c.realizations >= 2, "realizations", "must be at least 2, got " + std::to_string(c.realizations));
    if (has("t") && c.t) require(*c.t > 0.0 && std::isfinite(*c.t), "t", "must be positive, got " + show(*c.t));
    if (has("times")) {
        require(std::is_sorted(c.times.begin(), c.times.end()), "times", "must be ascending");
        for (double v : c.times) require(v >= 0.0 && std::isfinite(v), "times", "must be non-negative, got " + show(v));
    }
    if (has("hgrid"))
        for (double v : c.hgrid) require(v > 0.0 && std::isfinite(v), "hgrid", "must be positive, got " + show(v));
    if (has("nlat")) require(c.nlat >= 2, "nlat", "must be at least 2, got " + std::to_string(c.nlat));
    if (has("nlon")) require(c.nlon >= 1, "nlon", "must be at least 1, got " + std::to_string(c.nlon));
    if (has("grid"))
        require(c.grid == "equiangular" || c.grid == "gauss-legendre", "grid",
                "must be 'equiangular' or 'gauss-legendre', got '" + c.grid + "'");
    if (has("colormap")) {
        try {
            sfd::colormapFromString(c.colormap);
        } catch (const sfd::Error&) {
            throw InputError("colormap: must be gray, viridis or diverging, got '" + c.colormap + "'");
        }
    }
    if (has("vmin") && has("vmax") && c.vmin && c.vmax) require(*c.vmin < *c.vmax, "vmin", "must be below vmax");
    if (has("fit_xmin") && has("fit_xmax") && c.fit_xmin && c.fit_xmax)
        require(*c.fit_xmin < *c.fit_xmax, "fit_xmin", "must be below fit_xmax");
    if (has("increment_c") && c.increment_c)
        require(*c.increment_c > 0.0, "increment_c", "must be positive, got " + show(*c.increment_c));
    if (has("beta_star"))
        require(c.beta_star > 0.0 && c.beta_star < 1.0, "beta_star", "must lie in (0,1), got " + show(c.beta_star));
    if (has("out")) require(!c.out.empty(), "out", "must not be empty");
}

json toJson(const RunConfig& cfg, const std::vector<std::string>& keys) {
    json j = json::object();
    for (const std::string& k : keys) j[k] = keySpec(k).get(cfg);
    return j;
}

}  // namespace sfdiff
