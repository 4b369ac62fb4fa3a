#include "cegbma/workflow.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <map>
#include <set>
#include <sstream>

#include "cegbma/error.hpp"
#include "cegbma/graph_export.hpp"
#include "cegbma/io.hpp"
#include "json_util.hpp"

namespace cegbma {

using detail::Json;

namespace {

Json staging_json(const Staging& staging) {
    Json blocks = Json::array();
    for (const auto& b : staging.blocks()) {
        Json block = Json::array();
        for (VertexId s : b) block.push_back(EventTree::name(s));
        blocks.push_back(std::move(block));
    }
    return blocks;
}

Json names_json(const std::vector<VertexId>& vertices) {
    Json out = Json::array();
    for (VertexId v : vertices) out.push_back(EventTree::name(v));
    return out;
}

Json probs_json(const EventTree& tree, const ProbabilityTable& probs) {
    Json out = Json::object();
    for (VertexId s : tree.situations()) {
        Json row = Json::object();
        const auto edges = tree.out_edges(s);
        for (std::size_t e = 0; e < edges.size(); ++e) row[edges[e].label] = probs[s][e];
        out[EventTree::name(s)] = std::move(row);
    }
    return out;
}

Json manifest_to(const Manifest& m) {
    Json j;
    j["command"] = m.command;
    j["run_id"] = m.run_id;
    j["data"] = m.data;
    j["header"] = m.header;
    j["tree_spec"] = m.tree_spec;
    j["hyperstage"] = m.hyperstage;
    j["alpha_bar"] = m.alpha_bar;
    j["beta"] = m.beta;
    j["k"] = m.k;
    j["epsilon"] = m.epsilon;
    j["seed"] = m.seed;
    j["max_combined_models"] = m.max_combined_models;
    j["global_window"] = m.global_window;
    j["candidate_pool"] = m.pool == CandidatePool::Improving ? "improving" : "all-pairs";
    if (m.command == "enumerate") j["hyperset"] = m.hyperset;
    j["tool_version"] = kToolVersion;
    return j;
}

Json tree_json(const EventTree& tree) {
    const auto spec = tree.to_spec();
    Json j;
    j["edges"] = Json::array();
    for (const auto& e : spec.edges)
        j["edges"].push_back({{"path", PathRecord(e.begin(), e.end() - 1)}, {"label", e.back()}});
    j["counts"] = Json::array();
    for (const auto& [path, n] : spec.counts) j["counts"].push_back({{"path", path}, {"n", n}});
    return j;
}

Json report_header(const Inputs& inputs, const Manifest& manifest) {
    Json r;
    r["schema_version"] = kReportSchemaVersion;
    r["command"] = manifest.command;
    r["manifest"] = manifest_to(manifest);
    r["tree"] = tree_json(inputs.tree);
    r["warnings"] = inputs.tree.warnings();
    r["hyperstage"] = detail::parse_json(hyperstage_json(inputs.hyperstage), "hyperstage");
    return r;
}

Json full_staging_json(const FullStaging& staging) {
    Json out = Json::array();
    for (const auto& s : staging) out.push_back(staging_json(s));
    return out;
}

std::string artifact(const Manifest& m, const std::string& name) {
    return (m.run_id.empty() ? m.command : m.run_id) + "." + name;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<SearchResult> hac_all(const Inputs& in, const PriorAssignment& prior, double epsilon) {
    std::vector<SearchResult> out;
    for (std::size_t h = 0; h < in.hyperstage.size(); ++h)
        out.push_back(hac(make_context(in.tree, prior, in.hyperstage, h), epsilon));
    return out;
}

void check_options(const Manifest& m) {
    if (!(m.alpha_bar > 0.0)) fail(ErrorKind::InvalidArgument, "--alpha-bar is required and must be positive");
    if (!(m.beta > 1.0)) fail(ErrorKind::InvalidArgument, "--beta must exceed 1");
    if (m.k == 0) fail(ErrorKind::InvalidArgument, "--k must be at least 1");
    if (!(m.epsilon >= 0.0)) fail(ErrorKind::InvalidArgument, "--epsilon must be non-negative");
}

}  // namespace

std::string manifest_json(const Manifest& manifest) { return manifest_to(manifest).dump(2); }

Manifest parse_manifest(const std::string& json_text) {
    const Json j = detail::parse_json(json_text, "manifest");
    try {
        Manifest m;
        m.command = j.at("command").get<std::string>();
        m.run_id = j.value("run_id", "");
        m.data = j.value("data", "");
        m.header = j.value("header", true);
        m.tree_spec = j.value("tree_spec", "");
        m.hyperstage = j.value("hyperstage", "");
        m.alpha_bar = j.at("alpha_bar").get<double>();
        m.beta = j.value("beta", 20.0);
        m.k = j.value("k", 100u);
        m.epsilon = j.value("epsilon", 0.0);
        m.seed = j.value("seed", std::uint64_t{0});
        m.max_combined_models = j.value("max_combined_models", std::size_t{100000});
        m.global_window = j.value("global_window", false);
        const auto pool = j.value("candidate_pool", std::string("improving"));
        if (pool != "improving" && pool != "all-pairs")
            fail(ErrorKind::InvalidInput, "manifest: unknown candidate_pool '" + pool + "'");
        m.pool = pool == "improving" ? CandidatePool::Improving : CandidatePool::AllPairs;
        m.hyperset = j.value("hyperset", std::size_t{0});
        return m;
    } catch (const Json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("manifest: ") + e.what());
    }
}

Inputs load_inputs(const Manifest& m) {
    if (m.data.empty() && m.tree_spec.empty()) fail(ErrorKind::InvalidInput, "either --data or --tree-spec is required");
    auto tree = [&] {
        if (m.tree_spec.empty()) {
            const auto records = read_csv_records(m.data, m.header);
            return EventTree::from_records(records);
        }
        auto spec = parse_tree_spec(read_text_file(m.tree_spec));
        if (!m.data.empty()) {
            std::map<PathRecord, std::uint64_t> counted;
            const auto records = read_csv_records(m.data, m.header);
            if (records.empty()) fail(ErrorKind::InvalidInput, "empty record list");
            for (const auto& r : records) ++counted[r];
            spec.counts.assign(counted.begin(), counted.end());
        }
        return EventTree::from_spec(spec);
    }();
    auto hyperstage =
        m.hyperstage.empty() ? default_hyperstage(tree) : parse_hyperstage(read_text_file(m.hyperstage), tree);
    if (auto report = validate_hyperstage(tree, hyperstage); !report.ok()) {
        std::string msg = "invalid hyperstage:";
        for (const auto& v : report.violations) msg += "\n  " + v;
        fail(ErrorKind::Validation, msg);
    }
    return {std::move(tree), std::move(hyperstage)};
}

Artifacts run_fit(const Inputs& in, const Manifest& m) {
    check_options(m);
    const auto prior = propagate_prior(in.tree, m.alpha_bar);
    const auto results = hac_all(in, prior, m.epsilon);

    Json report = report_header(in, m);
    FullStaging map;
    double total = 0.0;
    report["hypersets"] = Json::array();
    for (std::size_t h = 0; h < results.size(); ++h) {
        report["hypersets"].push_back({{"index", h},
                                       {"situations", names_json(in.hyperstage.block(h).members)},
                                       {"staging", staging_json(results[h].staging)},
                                       {"log_score", results[h].log_score}});
        map.push_back(results[h].staging);
        total += results[h].log_score;
    }
    const auto means = posterior_mean_probs(in.tree, prior, in.hyperstage, map);
    report["map"] = {{"stagings", full_staging_json(map)}, {"log_score", total}};
    report["posterior_means"] = probs_json(in.tree, means);

    return {{artifact(m, "report.json"), report.dump(2) + "\n"},
            {artifact(m, "staged_tree.dot"), staged_tree_dot(in.tree, map)},
            {artifact(m, "ceg.dot"), ceg_dot(in.tree, in.hyperstage, map, means)}};
}

Artifacts run_average(const Inputs& in, const Manifest& m, unsigned threads) {
    check_options(m);
    const auto prior = propagate_prior(in.tree, m.alpha_bar);
    const RunConfig config{m.seed, m.k, m.epsilon, m.pool, threads};

    std::vector<HypersetEnsemble> ensembles;
    std::vector<std::size_t> runs;
    for (std::size_t h = 0; h < in.hyperstage.size(); ++h) {
        const auto ctx = make_context(in.tree, prior, in.hyperstage, h);
        const auto sampled = whac_ensemble(ctx, config);
        ensembles.push_back(build_hyperset_ensemble(h, sampled, m.beta));
        runs.push_back(static_cast<std::size_t>(m.k) * ctx.florets.size());
    }
    const auto baseline = hac_all(in, prior, m.epsilon);
    auto average = combine(ensembles, m.beta, m.max_combined_models);
    if (m.global_window) average = global_window(average, m.beta);

    Json report = report_header(in, m);
    report["hypersets"] = Json::array();
    FullStaging hac_map;
    double hac_total = 0.0;
    FullStaging intersection;
    for (std::size_t h = 0; h < ensembles.size(); ++h) {
        const auto& ens = ensembles[h];
        Json stagings = Json::array();
        std::size_t well = 0;
        for (const auto& w : ens.models) {
            stagings.push_back({{"staging", staging_json(w.staging)},
                                {"log_score", w.log_score},
                                {"hits", w.hits},
                                {"weight", w.weight},
                                {"in_window", w.in_window},
                                {"well_performing", w.well_performing},
                                {"retained_weight", w.retained_weight}});
            well += w.well_performing ? 1 : 0;
        }
        // Lattice summaries over the stagings that survive into the average.
        std::set<Staging> present;
        for (const auto& model : average.models) present.insert(model.stagings[h]);
        const std::vector<Staging> kept(present.begin(), present.end());
        const auto meet = staging_intersection(kept);
        const auto join = staging_union(kept);
        intersection.push_back(meet);

        const auto& members = in.hyperstage.block(h).members;
        Json lower = Json::array();
        for (std::size_t i = 0; i < members.size(); ++i) {
            Json row = Json::array();
            for (std::size_t j = 0; j < i; ++j)
                row.push_back(same_stage_probability(average, in.hyperstage, members[i], members[j]).probability);
            lower.push_back(std::move(row));
        }
        const bool hac_sampled = std::any_of(ens.models.begin(), ens.models.end(),
                                             [&](const WeightedStaging& w) { return w.staging == baseline[h].staging; });
        report["hypersets"].push_back({{"index", h},
                                       {"situations", names_json(members)},
                                       {"runs", runs[h]},
                                       {"unique_stagings", ens.models.size()},
                                       {"well_performing_count", well},
                                       {"stagings", std::move(stagings)},
                                       {"intersection", staging_json(meet)},
                                       {"union", staging_json(join)},
                                       {"same_stage_probability", {{"situations", names_json(members)},
                                                                   {"lower_triangle", std::move(lower)}}},
                                       {"hac", {{"staging", staging_json(baseline[h].staging)},
                                                {"log_score", baseline[h].log_score},
                                                {"sampled", hac_sampled}}}});
        hac_map.push_back(baseline[h].staging);
        hac_total += baseline[h].log_score;
    }

    report["model_count"] = average.models.size();
    report["models"] = Json::array();
    for (const auto& model : average.models)
        report["models"].push_back({{"picks", model.picks}, {"log_score", model.log_score}, {"weight", model.weight}});
    const auto& top = average.models.front();
    report["top_model"] = {{"stagings", full_staging_json(top.stagings)},
                           {"log_score", top.log_score},
                           {"weight", top.weight}};
    report["hac_map"] = {{"stagings", full_staging_json(hac_map)},
                         {"log_score", hac_total},
                         {"equals_top_model", hac_map == top.stagings}};

    const auto predictive = averaged_predictive(average, in.tree, prior, in.hyperstage);
    const auto top_means = posterior_mean_probs(in.tree, prior, in.hyperstage, top.stagings);
    Json leaves = Json::object();
    for (std::size_t l = 0; l < in.tree.leaves().size(); ++l)
        leaves[EventTree::name(in.tree.leaves()[l])] = predictive.leaf_probs[l];
    report["averaged_predictive"] = {{"edges", probs_json(in.tree, predictive.edge_probs)}, {"leaves", leaves}};
    report["top_model_posterior_means"] = probs_json(in.tree, top_means);

    return {{artifact(m, "report.json"), report.dump(2) + "\n"},
            {artifact(m, "staged_tree.dot"), staged_tree_dot(in.tree, top.stagings)},
            {artifact(m, "intersection.staged_tree.dot"), staged_tree_dot(in.tree, intersection)},
            {artifact(m, "hac.staged_tree.dot"), staged_tree_dot(in.tree, hac_map)},
            {artifact(m, "ceg_map.dot"), ceg_dot(in.tree, in.hyperstage, top.stagings, top_means)},
            {artifact(m, "ceg_averaged.dot"),
             ceg_dot(in.tree, in.hyperstage, top.stagings, predictive.edge_probs)}};
}

Artifacts run_enumerate(const Inputs& in, const Manifest& m) {
    check_options(m);
    if (m.hyperset >= in.hyperstage.size())
        fail(ErrorKind::InvalidArgument, "hyperset index " + std::to_string(m.hyperset) + " out of range");
    const auto prior = propagate_prior(in.tree, m.alpha_bar);
    const auto exact = exact_window(make_context(in.tree, prior, in.hyperstage, m.hyperset), m.beta);
    std::ostringstream out;
    out.precision(17);
    out << "staging,log_score,weight,in_window,well_performing\n";
    for (const auto& w : exact.models)
        out << '"' << w.staging.to_string() << "\"," << w.log_score << ',' << w.weight << ','
            << (w.in_window ? 1 : 0) << ',' << (w.well_performing ? 1 : 0) << '\n';
    return {{artifact(m, "stagings.csv"), out.str()}};
}

Artifacts run_manifest(const Manifest& m, unsigned threads) {
    Artifacts out;
    if (m.command == "fit")
        out = run_fit(load_inputs(m), m);
    else if (m.command == "average")
        out = run_average(load_inputs(m), m, threads);
    else if (m.command == "enumerate")
        out = run_enumerate(load_inputs(m), m);
    else
        fail(ErrorKind::InvalidArgument, "unknown command '" + m.command + "'");
    Json manifest = manifest_to(m);
    manifest["created_at"] = utc_now();
    out.emplace_back(artifact(m, "manifest.json"), manifest.dump(2) + "\n");
    return out;
}

Artifacts run_export(const std::string& report_json) {
    const Json report = detail::parse_json(report_json, "report");
    try {
        if (report.at("schema_version").get<int>() != kReportSchemaVersion)
            fail(ErrorKind::InvalidInput, "unsupported report schema_version");
        const auto manifest = parse_manifest(report.at("manifest").dump());
        const auto tree = EventTree::from_spec(parse_tree_spec(report.at("tree").dump()));
        const auto hyperstage = parse_hyperstage(report.at("hyperstage").dump(), tree);
        const auto prior = propagate_prior(tree, manifest.alpha_bar);
        const Json& chosen = report.at(manifest.command == "fit" ? "map" : "top_model").at("stagings");
        FullStaging staging;
        for (std::size_t h = 0; h < chosen.size(); ++h) {
            std::vector<std::vector<VertexId>> blocks;
            for (const auto& b : chosen[h]) {
                blocks.emplace_back();
                for (const auto& name : b) blocks.back().push_back(tree.lookup(name.get<std::string>()));
            }
            staging.emplace_back(h, std::move(blocks));
        }
        const auto means = posterior_mean_probs(tree, prior, hyperstage, staging);
        return {{artifact(manifest, "staged_tree.dot"), staged_tree_dot(tree, staging)},
                {artifact(manifest, "ceg.dot"), ceg_dot(tree, hyperstage, staging, means)}};
    } catch (const Json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("report: ") + e.what());
    }
}

std::string run_simulate(const std::string& model_json, std::size_t n, std::uint64_t seed) {
    const auto model = parse_generating_model(model_json);
    std::size_t width = 0;
    for (VertexId l : model.tree.leaves()) width = std::max(width, model.tree.path_to(l).size());
    const auto records = simulate(model, n, seed);
    return format_csv_records(records, width);
}

}  // namespace cegbma
