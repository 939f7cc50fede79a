#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sfd::acceptance {

constexpr std::uint64_t kDefaultSeed = 20240917;

struct Options {
    std::uint64_t seed = kDefaultSeed;
    /// When set, criteria that produce curves write their CSV/JSON here.
    std::filesystem::path outDir;
};

struct Result {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double budgetSeconds = 0.0;
};

/// Criteria 1..9 in order.
std::vector<int> criterionIds();

/// Runs one criterion. Library errors are caught and reported as a failure.
Result runCriterion(int id, const Options& options);

/// `criterion N [PASS] title: detail (1.2 s of 30 s)`
std::string formatResult(const Result& r);

/// The small fixed workload behind the determinism criterion: a truncation curve,
/// an increment curve and one snapshot map, all as CSV. Returns the files written.
std::vector<std::filesystem::path> writeDeterminismArtifacts(const std::filesystem::path& dir, std::uint64_t seed);

}  // namespace sfd::acceptance
