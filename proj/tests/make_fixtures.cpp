// Regenerates the frozen oracle fixtures in tests/fixtures. Not run by ctest;
// the tests compare live results against the committed files.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "cegbma/oracle.hpp"
#include "support/fixtures.hpp"

using namespace cegbma;
using Json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kSyntheticSeeds = 100;

Json f1_exact_window() {
    const auto t = fixtures::f1_tree();
    const auto ctx = make_context(t, propagate_prior(t, 4.0), default_hyperstage(t), 1);
    const auto e = exact_window(ctx, 20.0);
    Json j;
    j["alpha_bar"] = 4.0;
    j["beta"] = 20.0;
    j["enumerated"] = e.models.size();
    j["well_performing"] = Json::array();
    for (const auto* m : e.well_performing())
        j["well_performing"].push_back(
            {{"staging", m->staging.to_string()}, {"log_score", m->log_score}, {"retained_weight", m->retained_weight}});
    return j;
}

Json greedy_optimal() {
    Json seeds = Json::array();
    for (std::uint64_t seed = 0; seed < kSyntheticSeeds; ++seed) {
        const auto ctx = fixtures::synthetic_hyperset(seed);
        const auto greedy = hac(ctx);
        const auto all = enumerate_stagings(ctx);
        const ScoredStaging* best = &all.front();
        for (const auto& s : all)
            if (s.log_score > best->log_score) best = &s;
        if (greedy.staging == best->staging) seeds.push_back(seed);
    }
    return {{"generator", "synthetic_hyperset"}, {"checked_seeds", kSyntheticSeeds}, {"greedy_optimal_seeds", seeds}};
}

bool write(const std::string& path, const Json& j) {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
    if (!out) {
        std::cerr << "cannot write " << path << "\n";
        return false;
    }
    std::cout << path << "\n";
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : CEGBMA_FIXTURE_DIR;
    const bool ok = write(dir + "/f1_exact_window.json", f1_exact_window()) &&
                    write(dir + "/greedy_optimal.json", greedy_optimal());
    return ok ? 0 : 1;
}
