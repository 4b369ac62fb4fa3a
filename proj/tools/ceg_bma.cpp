// ceg_bma: staged-tree structure learning with Bayesian model averaging.
//
// Exit codes: 0 success, 1 usage or argument error, 2 unreadable or invalid
// input, 3 hyperstage validation failure, 4 combined-model cap exceeded,
// 5 internal error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cegbma/cegbma.h"
#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Common {
    std::string data;
    std::string tree_spec;
    std::string hyperstage;
    std::string manifest;
    std::string out_dir = ".";
    std::string run_id;
    bool header = true;
    double alpha_bar = 0.0;
    double beta = 20.0;
    unsigned k = 100;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::size_t max_combined_models = 100000;
    bool global_window = false;
    bool all_pairs = false;
    unsigned threads = 0;
    std::size_t hyperset = 0;
};

int report_failure(ceg_status status) {
    std::cerr << "error: " << ceg_last_error() << "\n";
    return static_cast<int>(status);
}

bool read_file(const std::string& path, std::string& text) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    return true;
}

int write_artifacts(const ceg_result* result, const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    for (std::size_t i = 0; i < ceg_result_count(result); ++i) {
        const fs::path path = fs::path(out_dir) / ceg_result_name(result, i);
        std::ofstream out(path, std::ios::binary);
        out << ceg_result_text(result, i);
        if (!out) {
            std::cerr << "error: cannot write " << path.string() << "\n";
            return 2;
        }
        std::cout << path.string() << "\n";
    }
    return 0;
}

void add_inputs(CLI::App* cmd, Common& c) {
    cmd->add_option("--data", c.data, "CSV of observed paths, one row per observation");
    cmd->add_option("--tree-spec", c.tree_spec, "JSON tree structure (and optional counts)");
    cmd->add_option("--hyperstage", c.hyperstage, "JSON hyperstage; defaults to grouping by edge labels");
    cmd->add_flag("--header,!--no-header", c.header, "CSV has a header row (default on)");
    cmd->add_option("--alpha-bar", c.alpha_bar, "Effective sample size of the Dirichlet prior (4 is a common choice)");
    cmd->add_option("--epsilon", c.epsilon, "Minimum log Bayes factor for a merge")->capture_default_str();
    cmd->add_option("--out-dir", c.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--run-id", c.run_id, "Prefix for output files (default: command name)");
    cmd->add_option("--manifest", c.manifest, "Rerun a saved manifest; other run options are ignored");
}

std::string build_manifest(const std::string& command, const Common& c) {
    Json j;
    j["command"] = command;
    j["run_id"] = c.run_id;
    j["data"] = c.data;
    j["header"] = c.header;
    j["tree_spec"] = c.tree_spec;
    j["hyperstage"] = c.hyperstage;
    j["alpha_bar"] = c.alpha_bar;
    j["beta"] = c.beta;
    j["k"] = c.k;
    j["epsilon"] = c.epsilon;
    j["seed"] = c.seed;
    j["max_combined_models"] = c.max_combined_models;
    j["global_window"] = c.global_window;
    j["candidate_pool"] = c.all_pairs ? "all-pairs" : "improving";
    j["hyperset"] = c.hyperset;
    return j.dump();
}

int run_workflow(const std::string& command, const Common& c) {
    std::string manifest;
    if (!c.manifest.empty()) {
        if (!read_file(c.manifest, manifest)) {
            std::cerr << "error: cannot open " << c.manifest << "\n";
            return 2;
        }
    } else {
        manifest = build_manifest(command, c);
    }
    ceg_result* result = nullptr;
    if (auto status = ceg_run_manifest(manifest.c_str(), c.threads, &result); status != CEG_OK)
        return report_failure(status);
    const int rc = write_artifacts(result, c.out_dir);
    if (rc == 0 && command == "enumerate") std::cout << ceg_result_find(result, "stagings.csv");
    ceg_result_free(result);
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian model averaging over staged trees / chain event graphs"};
    app.set_version_flag("--version", std::string(ceg_version()));
    app.require_subcommand(1);
    Common c;

    auto* fit = app.add_subcommand("fit", "Greedy HAC MAP staging per hyperset");
    add_inputs(fit, c);

    auto* average = app.add_subcommand("average", "Sample stagings with w-HAC and build the model average");
    add_inputs(average, c);
    average->add_option("--beta", c.beta, "Occam's window ratio")->capture_default_str();
    average->add_option("--k", c.k, "Runs per hyperset element")->capture_default_str();
    average->add_option("--seed", c.seed, "Base seed; run r uses seed + r")->capture_default_str();
    average->add_option("--max-combined-models", c.max_combined_models, "Cap on the combined model count")
        ->capture_default_str();
    average->add_flag("--global-window", c.global_window, "Apply a second window and razor after combining");
    average->add_flag("--all-pairs-pool", c.all_pairs, "Normalize merge probabilities over all pairs");
    average->add_option("--threads", c.threads, "Worker threads (0: hardware; capped by CEG_ENSEMBLE_THREADS)");

    auto* enumerate = app.add_subcommand("enumerate", "Exhaustively score every staging of one hyperset");
    add_inputs(enumerate, c);
    enumerate->add_option("--hyperset", c.hyperset, "Hyperset index")->capture_default_str();
    enumerate->add_option("--beta", c.beta, "Occam's window ratio")->capture_default_str();

    std::string model_path;
    std::string out_path;
    std::size_t n = 0;
    std::uint64_t sim_seed = 0;
    auto* simulate = app.add_subcommand("simulate", "Draw paths from a generating model");
    simulate->add_option("--model", model_path, "Generating model JSON")->required();
    simulate->add_option("--n", n, "Number of records")->required();
    simulate->add_option("--seed", sim_seed, "Seed")->capture_default_str();
    simulate->add_option("--out", out_path, "Output CSV (default: stdout)");

    std::string report_path;
    std::string export_dir = ".";
    auto* export_cmd = app.add_subcommand("export", "Write DOT files from a fit or average report");
    export_cmd->add_option("--report", report_path, "Report JSON")->required();
    export_cmd->add_option("--out-dir", export_dir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (fit->parsed()) return run_workflow("fit", c);
    if (average->parsed()) return run_workflow("average", c);
    if (enumerate->parsed()) return run_workflow("enumerate", c);

    if (simulate->parsed()) {
        std::string model;
        if (!read_file(model_path, model)) {
            std::cerr << "error: cannot open " << model_path << "\n";
            return 2;
        }
        ceg_result* result = nullptr;
        if (auto status = ceg_simulate(model.c_str(), n, sim_seed, &result); status != CEG_OK)
            return report_failure(status);
        const char* csv = ceg_result_text(result, 0);
        int rc = 0;
        if (out_path.empty()) {
            std::cout << csv;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            out << csv;
            if (!out) {
                std::cerr << "error: cannot write " << out_path << "\n";
                rc = 2;
            }
        }
        ceg_result_free(result);
        return rc;
    }

    if (export_cmd->parsed()) {
        std::string report;
        if (!read_file(report_path, report)) {
            std::cerr << "error: cannot open " << report_path << "\n";
            return 2;
        }
        ceg_result* result = nullptr;
        if (auto status = ceg_export(report.c_str(), &result); status != CEG_OK) return report_failure(status);
        const int rc = write_artifacts(result, export_dir);
        ceg_result_free(result);
        return rc;
    }
    return 1;
}
