#include "cegbma/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "cegbma/error.hpp"

namespace cegbma {

std::vector<double> normalize_weights(std::span<const double> log_scores) {
    if (log_scores.empty()) fail(ErrorKind::InvalidArgument, "cannot normalize an empty score list");
    double top = -std::numeric_limits<double>::infinity();
    for (double s : log_scores) {
        if (!std::isfinite(s)) fail(ErrorKind::InvalidArgument, "log score is not finite");
        top = std::max(top, s);
    }
    std::vector<double> w(log_scores.size());
    double total = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) total += (w[k] = std::exp(log_scores[k] - top));
    for (double& x : w) x /= total;
    return w;
}

std::vector<std::size_t> occams_window(std::span<const double> log_scores, double beta) {
    if (!(beta > 1.0)) fail(ErrorKind::InvalidArgument, "beta must exceed 1");
    if (log_scores.empty()) return {};
    const double top = *std::max_element(log_scores.begin(), log_scores.end());
    const double cut = std::log(beta);
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < log_scores.size(); ++k)
        if (top - log_scores[k] < cut) kept.push_back(k);
    return kept;
}

bool is_nested(const Staging& coarse, const Staging& fine) {
    if (coarse.hyperset() != fine.hyperset() || coarse.members() != fine.members())
        fail(ErrorKind::InvalidArgument, "stagings belong to different hypersets");
    if (coarse == fine) return false;
    for (const auto& block : fine.blocks()) {
        const auto target = coarse.block_of(block.front());
        const auto& cb = coarse.blocks()[target];
        for (VertexId s : block)
            if (!std::binary_search(cb.begin(), cb.end(), s)) return false;
    }
    return true;
}

std::vector<std::size_t> razor_filter(std::span<const Staging> stagings, std::span<const double> log_scores) {
    if (stagings.size() != log_scores.size()) fail(ErrorKind::InvalidArgument, "stagings and scores differ in length");
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < stagings.size(); ++k) {
        bool dominated = false;
        for (std::size_t l = 0; l < stagings.size() && !dominated; ++l)
            dominated = l != k && log_scores[k] < log_scores[l] && is_nested(stagings[l], stagings[k]);
        if (!dominated) kept.push_back(k);
    }
    return kept;
}

std::vector<const WeightedStaging*> HypersetEnsemble::well_performing() const {
    std::vector<const WeightedStaging*> out;
    for (const auto& m : models)
        if (m.well_performing) out.push_back(&m);
    return out;
}

HypersetEnsemble build_hyperset_ensemble(std::size_t hyperset, std::span<const SampledStaging> sampled, double beta) {
    if (sampled.empty()) fail(ErrorKind::InvalidArgument, "hyperset " + std::to_string(hyperset) + " has no stagings");
    // Collapse duplicates so no model is counted twice.
    std::map<Staging, std::size_t> index;
    HypersetEnsemble ens{hyperset, {}};
    for (const auto& s : sampled) {
        auto [it, inserted] = index.emplace(s.staging, ens.models.size());
        if (inserted)
            ens.models.push_back({s.staging, s.log_score, s.hits});
        else
            ens.models[it->second].hits += s.hits;
    }
    std::stable_sort(ens.models.begin(), ens.models.end(),
                     [](const WeightedStaging& a, const WeightedStaging& b) { return a.log_score > b.log_score; });

    std::vector<double> scores;
    for (const auto& m : ens.models) scores.push_back(m.log_score);
    const auto w = normalize_weights(scores);
    for (std::size_t k = 0; k < w.size(); ++k) ens.models[k].weight = w[k];

    const auto window = occams_window(scores, beta);
    std::vector<Staging> windowed;
    std::vector<double> windowed_scores;
    for (std::size_t k : window) {
        ens.models[k].in_window = true;
        windowed.push_back(ens.models[k].staging);
        windowed_scores.push_back(scores[k]);
    }
    std::vector<double> kept_scores;
    std::vector<std::size_t> kept;
    for (std::size_t r : razor_filter(windowed, windowed_scores)) {
        kept.push_back(window[r]);
        kept_scores.push_back(windowed_scores[r]);
    }
    const auto rw = normalize_weights(kept_scores);
    for (std::size_t i = 0; i < kept.size(); ++i) {
        ens.models[kept[i]].well_performing = true;
        ens.models[kept[i]].retained_weight = rw[i];
    }
    return ens;
}

ModelAverage combine(std::span<const HypersetEnsemble> ensembles, double beta, std::size_t max_models) {
    std::vector<std::vector<const WeightedStaging*>> choices;
    std::size_t total = 1;
    std::string sizes;
    bool over = false;
    for (const auto& e : ensembles) {
        choices.push_back(e.well_performing());
        if (choices.back().empty())
            fail(ErrorKind::InvalidArgument, "hyperset " + std::to_string(e.hyperset) + " has no well-performing staging");
        const std::size_t n = choices.back().size();
        sizes += (sizes.empty() ? "" : " x ") + std::to_string(n);
        if (total > max_models / n) over = true;
        if (!over) total *= n;
    }
    if (over || total > max_models)
        fail(ErrorKind::Capacity, "combined model count " + sizes + " exceeds the cap of " + std::to_string(max_models));

    ModelAverage avg;
    avg.beta = beta;
    std::vector<std::size_t> pick(choices.size(), 0);
    for (std::size_t m = 0; m < total; ++m) {
        ScoredModel model;
        for (std::size_t h = 0; h < choices.size(); ++h) {
            model.stagings.push_back(choices[h][pick[h]]->staging);
            model.picks.push_back(pick[h]);
            model.log_score += choices[h][pick[h]]->log_score;
        }
        avg.models.push_back(std::move(model));
        // Odometer, last hyperset fastest.
        for (std::size_t h = choices.size(); h-- > 0;) {
            if (++pick[h] < choices[h].size()) break;
            pick[h] = 0;
        }
    }
    std::stable_sort(avg.models.begin(), avg.models.end(),
                     [](const ScoredModel& a, const ScoredModel& b) { return a.log_score > b.log_score; });
    std::vector<double> scores;
    for (const auto& m : avg.models) scores.push_back(m.log_score);
    const auto w = normalize_weights(scores);
    for (std::size_t k = 0; k < w.size(); ++k) avg.models[k].weight = w[k];
    return avg;
}

bool is_nested(const FullStaging& coarse, const FullStaging& fine) {
    if (coarse.size() != fine.size()) fail(ErrorKind::InvalidArgument, "models have different hyperstages");
    bool proper = false;
    for (std::size_t h = 0; h < coarse.size(); ++h) {
        if (coarse[h] == fine[h]) continue;
        if (!is_nested(coarse[h], fine[h])) return false;
        proper = true;
    }
    return proper;
}

ModelAverage global_window(const ModelAverage& average, double beta) {
    std::vector<double> scores;
    for (const auto& m : average.models) scores.push_back(m.log_score);
    const auto window = occams_window(scores, beta);
    std::vector<std::size_t> kept;
    for (std::size_t k : window) {
        bool dominated = false;
        for (std::size_t l : window) {
            if (l == k || !(scores[k] < scores[l])) continue;
            if (is_nested(average.models[l].stagings, average.models[k].stagings)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) kept.push_back(k);
    }
    ModelAverage out;
    out.beta = beta;
    std::vector<double> kept_scores;
    for (std::size_t k : kept) {
        out.models.push_back(average.models[k]);
        kept_scores.push_back(scores[k]);
    }
    const auto w = normalize_weights(kept_scores);
    for (std::size_t k = 0; k < w.size(); ++k) out.models[k].weight = w[k];
    return out;
}

namespace {

void check_same_hyperset(std::span<const Staging> stagings) {
    if (stagings.empty()) fail(ErrorKind::InvalidArgument, "no stagings given");
    const auto members = stagings.front().members();
    for (const auto& s : stagings)
        if (s.hyperset() != stagings.front().hyperset() || s.members() != members)
            fail(ErrorKind::InvalidArgument, "stagings belong to different hypersets");
}

}  // namespace

Staging staging_intersection(std::span<const Staging> stagings) {
    check_same_hyperset(stagings);
    std::map<std::vector<std::size_t>, std::vector<VertexId>> groups;
    for (VertexId s : stagings.front().members()) {
        std::vector<std::size_t> signature;
        for (const auto& p : stagings) signature.push_back(p.block_of(s));
        groups[signature].push_back(s);
    }
    std::vector<std::vector<VertexId>> blocks;
    for (auto& [sig, members] : groups) blocks.push_back(std::move(members));
    return Staging(stagings.front().hyperset(), std::move(blocks));
}

Staging staging_union(std::span<const Staging> stagings) {
    check_same_hyperset(stagings);
    const auto members = stagings.front().members();
    std::vector<std::size_t> root(members.size());
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](std::size_t x) {
        while (root[x] != x) x = root[x] = root[root[x]];
        return x;
    };
    auto pos = [&](VertexId s) {
        return static_cast<std::size_t>(std::lower_bound(members.begin(), members.end(), s) - members.begin());
    };
    for (const auto& p : stagings)
        for (const auto& block : p.blocks())
            for (VertexId s : block) {
                const auto a = find(pos(block.front()));
                const auto b = find(pos(s));
                root[std::max(a, b)] = std::min(a, b);
            }
    std::map<std::size_t, std::vector<VertexId>> groups;
    for (std::size_t i = 0; i < members.size(); ++i) groups[find(i)].push_back(members[i]);
    std::vector<std::vector<VertexId>> blocks;
    for (auto& [r, b] : groups) blocks.push_back(std::move(b));
    return Staging(stagings.front().hyperset(), std::move(blocks));
}

SameStage same_stage_probability(const ModelAverage& average, const Hyperstage& hyperstage, VertexId s, VertexId t) {
    const auto bs = hyperstage.block_of(s);
    const auto bt = hyperstage.block_of(t);
    if (!bs || !bt) fail(ErrorKind::InvalidArgument, "situation outside the hyperstage");
    if (*bs != *bt) return {0.0, true};
    double p = 0.0;
    bool every = true;
    for (const auto& m : average.models) {
        if (m.stagings.at(*bs).co_staged(s, t))
            p += m.weight;
        else
            every = false;
    }
    // Summed weights can fall a rounding error short of 1.
    if (every && !average.models.empty()) return {1.0, false};
    return {std::min(p, 1.0), false};
}

ProbabilityTable posterior_mean_probs(const EventTree& tree, const PriorAssignment& prior,
                                      const Hyperstage& hyperstage, const FullStaging& staging) {
    ProbabilityTable table(tree.vertex_count());
    for (const auto& stage : all_stages(staging)) {
        const auto data = aggregate_stage(tree, prior, hyperstage, stage);
        double total = 0.0;
        std::vector<double> mean(data.alpha.size());
        for (std::size_t j = 0; j < mean.size(); ++j) total += (mean[j] = data.alpha[j] + static_cast<double>(data.counts[j]));
        for (double& x : mean) x /= total;
        for (VertexId s : stage) {
            const auto order = hyperstage.aligned_edges(tree, s);
            auto& row = table[s];
            row.assign(order.size(), 0.0);
            for (std::size_t a = 0; a < order.size(); ++a) row[order[a]] = mean[a];
        }
    }
    for (VertexId s : tree.situations())
        if (table[s].empty()) fail(ErrorKind::InvalidArgument, "staging does not cover " + EventTree::name(s));
    return table;
}

std::vector<double> leaf_probabilities(const EventTree& tree, const ProbabilityTable& edge_probs) {
    std::vector<double> reach(tree.vertex_count(), 0.0);
    reach[tree.root()] = 1.0;
    for (VertexId v : tree.situations()) {
        const auto out = tree.out_edges(v);
        for (std::size_t e = 0; e < out.size(); ++e) reach[out[e].head] = reach[v] * edge_probs[v][e];
    }
    std::vector<double> leaves;
    for (VertexId l : tree.leaves()) leaves.push_back(reach[l]);
    return leaves;
}

Predictive averaged_predictive(const ModelAverage& average, const EventTree& tree, const PriorAssignment& prior,
                               const Hyperstage& hyperstage) {
    Predictive out;
    out.edge_probs.resize(tree.vertex_count());
    for (VertexId s : tree.situations()) out.edge_probs[s].assign(tree.out_degree(s), 0.0);
    out.leaf_probs.assign(tree.leaves().size(), 0.0);
    for (const auto& m : average.models) {
        const auto probs = posterior_mean_probs(tree, prior, hyperstage, m.stagings);
        for (VertexId s : tree.situations())
            for (std::size_t e = 0; e < probs[s].size(); ++e) out.edge_probs[s][e] += m.weight * probs[s][e];
        const auto leaves = leaf_probabilities(tree, probs);
        for (std::size_t l = 0; l < leaves.size(); ++l) out.leaf_probs[l] += m.weight * leaves[l];
    }
    return out;
}

}  // namespace cegbma
