#include "cegbma/cegbma.h"

#include <cstdlib>
#include <memory>
#include <string>
#include <thread>

#include "cegbma/error.hpp"
#include "cegbma/io.hpp"
#include "cegbma/oracle.hpp"
#include "cegbma/scoring.hpp"
#include "cegbma/workflow.hpp"

struct ceg_tree {
    cegbma::EventTree tree;
};

struct ceg_hyperstage {
    cegbma::Hyperstage hyperstage;
    std::string violations;
};

struct ceg_result {
    cegbma::Artifacts artifacts;
};

namespace {

thread_local std::string last_error;

ceg_status set_error(ceg_status status, const std::string& message) {
    last_error = message;
    return status;
}

template <class F>
ceg_status guard(F&& f) {
    try {
        f();
        return CEG_OK;
    } catch (const cegbma::Error& e) {
        return set_error(static_cast<ceg_status>(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(CEG_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(CEG_ERR_INTERNAL, e.what());
    }
}

void need(const void* p, const char* what) {
    if (!p) cegbma::fail(cegbma::ErrorKind::InvalidArgument, std::string(what) + " is null");
}

unsigned resolve_threads(unsigned requested) {
    unsigned threads = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CEG_ENSEMBLE_THREADS")) {
        char* end = nullptr;
        const unsigned long cap = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && cap > 0) threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
    }
    return threads;
}

cegbma::Manifest to_manifest(const ceg_options& o, const char* command) {
    cegbma::Manifest m;
    m.command = command;
    m.alpha_bar = o.alpha_bar;
    m.beta = o.beta;
    m.k = o.k;
    m.epsilon = o.epsilon;
    m.seed = o.seed;
    m.max_combined_models = o.max_combined_models;
    m.global_window = o.global_window != 0;
    m.pool = o.all_pairs_pool ? cegbma::CandidatePool::AllPairs : cegbma::CandidatePool::Improving;
    m.hyperset = o.hyperset;
    m.run_id = o.run_id ? o.run_id : "";
    m.data = o.data_path ? o.data_path : "";
    m.tree_spec = o.tree_spec_path ? o.tree_spec_path : "";
    m.hyperstage = o.hyperstage_path ? o.hyperstage_path : "";
    m.header = o.has_header != 0;
    return m;
}

cegbma::Inputs checked_inputs(const ceg_tree* tree, const ceg_hyperstage* hyperstage) {
    need(tree, "tree");
    need(hyperstage, "hyperstage");
    auto report = cegbma::validate_hyperstage(tree->tree, hyperstage->hyperstage);
    if (!report.ok()) cegbma::fail(cegbma::ErrorKind::Validation, "invalid hyperstage: " + report.violations.front());
    return {tree->tree, hyperstage->hyperstage};
}

template <class F>
ceg_status produce(ceg_result** out, F&& make) {
    return guard([&] {
        need(out, "out");
        *out = nullptr;
        auto result = std::make_unique<ceg_result>();
        result->artifacts = make();
        *out = result.release();
    });
}

}  // namespace

extern "C" {

const char* ceg_version(void) { return cegbma::kToolVersion; }
const char* ceg_last_error(void) { return last_error.c_str(); }

ceg_status ceg_tree_from_records(const char* const* labels, const size_t* lengths, size_t n_records, ceg_tree** out) {
    return guard([&] {
        need(out, "out");
        if (n_records) {
            need(labels, "labels");
            need(lengths, "lengths");
        }
        std::vector<cegbma::PathRecord> records(n_records);
        std::size_t offset = 0;
        for (std::size_t r = 0; r < n_records; ++r)
            for (std::size_t i = 0; i < lengths[r]; ++i, ++offset) {
                need(labels[offset], "label");
                records[r].emplace_back(labels[offset]);
            }
        *out = new ceg_tree{cegbma::EventTree::from_records(records)};
    });
}

ceg_status ceg_tree_from_csv(const char* path, int has_header, ceg_tree** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        const auto records = cegbma::read_csv_records(path, has_header != 0);
        *out = new ceg_tree{cegbma::EventTree::from_records(records)};
    });
}

ceg_status ceg_tree_from_spec(const char* spec_path, const char* data_path, int has_header, ceg_tree** out) {
    return guard([&] {
        need(spec_path, "spec_path");
        need(out, "out");
        cegbma::Manifest m;
        m.tree_spec = spec_path;
        m.data = data_path ? data_path : "";
        m.header = has_header != 0;
        *out = new ceg_tree{cegbma::load_inputs(m).tree};
    });
}

void ceg_tree_free(ceg_tree* tree) { delete tree; }

size_t ceg_tree_vertex_count(const ceg_tree* tree) { return tree ? tree->tree.vertex_count() : 0; }
size_t ceg_tree_situation_count(const ceg_tree* tree) { return tree ? tree->tree.situations().size() : 0; }
uint64_t ceg_tree_total_count(const ceg_tree* tree) { return tree ? tree->tree.total_count() : 0; }

size_t ceg_tree_out_degree(const ceg_tree* tree, size_t vertex) {
    if (!tree || vertex >= tree->tree.vertex_count()) return 0;
    return tree->tree.out_degree(vertex);
}

ceg_status ceg_tree_edge(const ceg_tree* tree, size_t vertex, size_t edge, const char** label, size_t* head,
                         uint64_t* count) {
    return guard([&] {
        need(tree, "tree");
        if (vertex >= tree->tree.vertex_count() || edge >= tree->tree.out_degree(vertex))
            cegbma::fail(cegbma::ErrorKind::InvalidArgument, "edge index out of range");
        const auto& e = tree->tree.out_edges(vertex)[edge];
        if (label) *label = e.label.c_str();
        if (head) *head = e.head;
        if (count) *count = e.count;
    });
}

ceg_status ceg_hyperstage_default(const ceg_tree* tree, ceg_hyperstage** out) {
    return guard([&] {
        need(tree, "tree");
        need(out, "out");
        *out = new ceg_hyperstage{cegbma::default_hyperstage(tree->tree), {}};
    });
}

ceg_status ceg_hyperstage_from_file(const ceg_tree* tree, const char* path, ceg_hyperstage** out) {
    return guard([&] {
        need(tree, "tree");
        need(path, "path");
        need(out, "out");
        *out = new ceg_hyperstage{cegbma::parse_hyperstage(cegbma::read_text_file(path), tree->tree), {}};
    });
}

void ceg_hyperstage_free(ceg_hyperstage* hyperstage) { delete hyperstage; }

size_t ceg_hyperstage_block_count(const ceg_hyperstage* hyperstage) {
    return hyperstage ? hyperstage->hyperstage.size() : 0;
}

size_t ceg_hyperstage_block_size(const ceg_hyperstage* hyperstage, size_t block) {
    if (!hyperstage || block >= hyperstage->hyperstage.size()) return 0;
    return hyperstage->hyperstage.block(block).members.size();
}

ceg_status ceg_hyperstage_validate(const ceg_tree* tree, ceg_hyperstage* hyperstage, const char** violations) {
    bool valid = true;
    auto status = guard([&] {
        need(tree, "tree");
        need(hyperstage, "hyperstage");
        const auto report = cegbma::validate_hyperstage(tree->tree, hyperstage->hyperstage);
        hyperstage->violations.clear();
        for (const auto& v : report.violations) hyperstage->violations += v + "\n";
        if (violations) *violations = hyperstage->violations.c_str();
        valid = report.ok();
    });
    if (status != CEG_OK) return status;
    return valid ? CEG_OK : set_error(CEG_ERR_VALIDATION, hyperstage->violations);
}

ceg_status ceg_model_space_size(const ceg_hyperstage* hyperstage, uint64_t* out) {
    return guard([&] {
        need(hyperstage, "hyperstage");
        need(out, "out");
        *out = cegbma::model_space_size(hyperstage->hyperstage);
    });
}

ceg_status ceg_stage_log_score(const double* alpha, const uint64_t* counts, size_t dim, double* out) {
    return guard([&] {
        need(alpha, "alpha");
        need(counts, "counts");
        need(out, "out");
        cegbma::StageData s{{0}, {alpha, alpha + dim}, {counts, counts + dim}};
        for (double a : s.alpha)
            if (!(a > 0.0)) cegbma::fail(cegbma::ErrorKind::InvalidArgument, "Dirichlet parameters must be positive");
        *out = cegbma::stage_log_score(s);
    });
}

ceg_status ceg_merge_log_bf(const double* alpha_a, const uint64_t* counts_a, const double* alpha_b,
                            const uint64_t* counts_b, size_t dim, double* out) {
    return guard([&] {
        need(alpha_a, "alpha_a");
        need(alpha_b, "alpha_b");
        need(counts_a, "counts_a");
        need(counts_b, "counts_b");
        need(out, "out");
        cegbma::StageData a{{0}, {alpha_a, alpha_a + dim}, {counts_a, counts_a + dim}};
        cegbma::StageData b{{1}, {alpha_b, alpha_b + dim}, {counts_b, counts_b + dim}};
        for (double x : a.alpha) if (!(x > 0.0)) cegbma::fail(cegbma::ErrorKind::InvalidArgument, "Dirichlet parameters must be positive");
        for (double x : b.alpha) if (!(x > 0.0)) cegbma::fail(cegbma::ErrorKind::InvalidArgument, "Dirichlet parameters must be positive");
        *out = cegbma::merge_log_bf(a, b);
    });
}

ceg_status ceg_bell(unsigned n, uint64_t* out) {
    return guard([&] {
        need(out, "out");
        *out = cegbma::bell(n);
    });
}

void ceg_options_init(ceg_options* o) {
    if (!o) return;
    *o = ceg_options{};
    o->beta = 20.0;
    o->k = 100;
    o->max_combined_models = 100000;
    o->has_header = 1;
}

ceg_status ceg_fit(const ceg_tree* tree, const ceg_hyperstage* hyperstage, const ceg_options* options,
                   ceg_result** out) {
    return produce(out, [&] {
        need(options, "options");
        return cegbma::run_fit(checked_inputs(tree, hyperstage), to_manifest(*options, "fit"));
    });
}

ceg_status ceg_average(const ceg_tree* tree, const ceg_hyperstage* hyperstage, const ceg_options* options,
                       ceg_result** out) {
    return produce(out, [&] {
        need(options, "options");
        return cegbma::run_average(checked_inputs(tree, hyperstage), to_manifest(*options, "average"),
                                   resolve_threads(options->threads));
    });
}

ceg_status ceg_enumerate(const ceg_tree* tree, const ceg_hyperstage* hyperstage, const ceg_options* options,
                         ceg_result** out) {
    return produce(out, [&] {
        need(options, "options");
        return cegbma::run_enumerate(checked_inputs(tree, hyperstage), to_manifest(*options, "enumerate"));
    });
}

ceg_status ceg_run_manifest(const char* manifest_json, unsigned threads, ceg_result** out) {
    return produce(out, [&] {
        need(manifest_json, "manifest_json");
        return cegbma::run_manifest(cegbma::parse_manifest(manifest_json), resolve_threads(threads));
    });
}

ceg_status ceg_simulate(const char* model_json, size_t n, uint64_t seed, ceg_result** out) {
    return produce(out, [&] {
        need(model_json, "model_json");
        return cegbma::Artifacts{{"simulated.csv", cegbma::run_simulate(model_json, n, seed)}};
    });
}

ceg_status ceg_export(const char* report_json, ceg_result** out) {
    return produce(out, [&] {
        need(report_json, "report_json");
        return cegbma::run_export(report_json);
    });
}

size_t ceg_result_count(const ceg_result* result) { return result ? result->artifacts.size() : 0; }

const char* ceg_result_name(const ceg_result* result, size_t index) {
    if (!result || index >= result->artifacts.size()) return nullptr;
    return result->artifacts[index].first.c_str();
}

const char* ceg_result_text(const ceg_result* result, size_t index) {
    if (!result || index >= result->artifacts.size()) return nullptr;
    return result->artifacts[index].second.c_str();
}

const char* ceg_result_find(const ceg_result* result, const char* suffix) {
    if (!result || !suffix) return nullptr;
    const std::string want(suffix);
    for (const auto& [name, text] : result->artifacts)
        if (name.size() >= want.size() && name.compare(name.size() - want.size(), want.size(), want) == 0)
            return text.c_str();
    return nullptr;
}

void ceg_result_free(ceg_result* result) { delete result; }

}  // extern "C"
