#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cegbma/ensemble.hpp"
#include "cegbma/event_tree.hpp"
#include "cegbma/oracle.hpp"
#include "cegbma/search.hpp"

namespace cegbma {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

// Everything that determines a run. Thread count is deliberately absent:
// reports do not depend on it.
struct Manifest {
    std::string command;  // fit | average | enumerate
    std::string data;     // CSV path
    bool header = true;
    std::string tree_spec;
    std::string hyperstage;
    double alpha_bar = 0.0;
    double beta = 20.0;
    unsigned k = 100;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::size_t max_combined_models = 100000;
    bool global_window = false;
    CandidatePool pool = CandidatePool::Improving;
    std::size_t hyperset = 0;  // enumerate only
    std::string run_id;
};

std::string manifest_json(const Manifest& manifest);
Manifest parse_manifest(const std::string& json_text);

struct Inputs {
    EventTree tree;
    Hyperstage hyperstage;
};

// Reads the tree from CSV data and/or a tree spec, then the hyperstage
// (default when no path). Throws Validation when the hyperstage is invalid.
Inputs load_inputs(const Manifest& manifest);

// Named text outputs, e.g. {"report.json", ...}, {"ceg.dot", ...}.
using Artifacts = std::vector<std::pair<std::string, std::string>>;

// HAC per hyperset; report plus staged-tree and CEG DOT.
Artifacts run_fit(const Inputs& inputs, const Manifest& manifest);

// w-HAC ensembles, window and razor, combination, summaries, and the HAC baseline.
Artifacts run_average(const Inputs& inputs, const Manifest& manifest, unsigned threads);

// CSV of every staging of one hyperset with exact weights and window flags.
Artifacts run_enumerate(const Inputs& inputs, const Manifest& manifest);

// Dispatches on manifest.command; also emits "manifest.json" with a timestamp.
Artifacts run_manifest(const Manifest& manifest, unsigned threads);

// Rebuilds DOT files from a fit or average report.
Artifacts run_export(const std::string& report_json);

// CSV text of n simulated records.
std::string run_simulate(const std::string& model_json, std::size_t n, std::uint64_t seed);

}  // namespace cegbma
