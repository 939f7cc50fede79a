#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "sfd/stochastic.hpp"
#include "sfd/synthesis.hpp"

namespace sfdiff {

using nlohmann::json;

/// Everything a run can be configured with. Optional fields get a
/// command-specific default when left unset.
struct RunConfig {
    double alpha = 0.5;
    double tau = 1e-5;
    double C_head = 1.0, C_coeff = 1.0, kappa1 = 2.3;
    double A_head = 1.0, A_coeff = 1.0, kappa2 = 2.5;
    std::uint64_t seed = 20240917;
    std::string out = "out";

    std::optional<int> L;
    int Ltilde = 400;
    std::vector<int> Lgrid{25, 50, 100, 150, 200, 300};
    int realizations = 50;
    std::optional<double> t;
    std::vector<double> times;  ///< empty: {0, tau, 10 tau}
    std::vector<double> hgrid;  ///< empty: k * 1e-6, k = 1..11

    int nlat = 512, nlon = 1024;
    std::string grid = "equiangular";
    std::string colormap = "viridis";
    std::optional<double> vmin, vmax;
    bool png = true;
    bool csv = true;

    std::optional<double> fit_xmin, fit_xmax;
    std::optional<double> increment_c;
    double beta_star = 0.1;

    sfd::FractionalModel model() const;
};

/// One configurable key: JSON type handling plus the help text shown for its flag.
struct KeySpec {
    std::string name;
    std::string help;  ///< includes the unit in brackets
    std::function<void(RunConfig&, const json&)> set;
    std::function<json(const RunConfig&)> get;
    std::string typeName = "VALUE";  ///< placeholder shown in --help
};

const std::vector<KeySpec>& allKeys();
const KeySpec& keySpec(const std::string& name);

/// Reads a flat JSON object; unknown keys and type mismatches throw InputError
/// naming the key. A missing or unreadable file throws IoError with the path.
void loadConfigFile(RunConfig& cfg, const std::filesystem::path& path);

/// Applies a command-line value: JSON literal, or a comma list for list keys,
/// or a bare string.
void applyFlag(RunConfig& cfg, const std::string& key, const std::string& raw);

/// Checks the listed keys against the preconditions of the library; the message
/// of the InputError starts with the offending key.
void validateKeys(const RunConfig& cfg, const std::vector<std::string>& keys);

json toJson(const RunConfig& cfg, const std::vector<std::string>& keys);

}  // namespace sfdiff
