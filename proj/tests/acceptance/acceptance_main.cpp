// One line per criterion; exit status 0 only when every selected criterion passes.
#include <CLI11.hpp>
#include <iostream>

#include "acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria for the sphere fractional diffusion library"};
    std::vector<int> ids;
    sfd::acceptance::Options opt;
    std::string out;
    app.add_option("--criterion", ids, "criterion number (1-9), repeatable; default all")->check(CLI::Range(1, 9));
    app.add_option("--seed", opt.seed, "master seed")->capture_default_str();
    app.add_option("--out", out, "directory for curve CSV/JSON");
    CLI11_PARSE(app, argc, argv);
    if (!out.empty()) opt.outDir = out;
    if (ids.empty()) ids = sfd::acceptance::criterionIds();

    bool all = true;
    for (int id : ids) {
        const auto r = sfd::acceptance::runCriterion(id, opt);
        std::cout << sfd::acceptance::formatResult(r) << std::endl;
        all = all && r.passed;
    }
    return all ? 0 : 1;
}
