#include "cegbma/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cegbma/error.hpp"

namespace cegbma {

PriorAssignment propagate_prior(const EventTree& tree, double alpha_bar, PriorRule rule) {
    if (!(alpha_bar > 0.0) || !std::isfinite(alpha_bar))
        fail(ErrorKind::InvalidArgument, "alpha_bar must be a positive finite number");
    PriorAssignment prior;
    prior.alpha_bar = alpha_bar;
    prior.rule = rule;
    prior.arriving_mass.assign(tree.vertex_count(), 0.0);
    prior.alpha.resize(tree.vertex_count());
    prior.arriving_mass[tree.root()] = alpha_bar;
    // Breadth-first ids: parents precede children.
    for (VertexId v = 0; v < tree.vertex_count(); ++v) {
        const auto out = tree.out_edges(v);
        if (out.empty()) continue;
        const double mass = rule == PriorRule::MassPropagation ? prior.arriving_mass[v] : alpha_bar;
        const double each = mass / static_cast<double>(out.size());
        prior.alpha[v].assign(out.size(), each);
        for (const auto& e : out) prior.arriving_mass[e.head] = each;
    }
    return prior;
}

StageData merge(const StageData& a, const StageData& b) {
    if (a.alpha.size() != b.alpha.size() || a.counts.size() != b.counts.size())
        fail(ErrorKind::InvalidArgument, "cannot merge stages with different out-degrees");
    StageData out;
    std::merge(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
               std::back_inserter(out.members));
    out.alpha.resize(a.alpha.size());
    out.counts.resize(a.counts.size());
    for (std::size_t j = 0; j < a.alpha.size(); ++j) {
        out.alpha[j] = a.alpha[j] + b.alpha[j];
        out.counts[j] = a.counts[j] + b.counts[j];
    }
    return out;
}

StageData floret_stage(const EventTree& tree, const PriorAssignment& prior, const Hyperstage& hyperstage,
                       VertexId s) {
    if (!tree.is_situation(s)) fail(ErrorKind::InvalidArgument, EventTree::name(s) + " is not a situation");
    const auto order = hyperstage.aligned_edges(tree, s);
    const auto out = tree.out_edges(s);
    StageData stage{{s}, {}, {}};
    for (std::size_t idx : order) {
        stage.alpha.push_back(prior.alpha.at(s).at(idx));
        stage.counts.push_back(out[idx].count);
    }
    return stage;
}

StageData aggregate_stage(const EventTree& tree, const PriorAssignment& prior, const Hyperstage& hyperstage,
                          std::span<const VertexId> members) {
    if (members.empty()) fail(ErrorKind::InvalidArgument, "stage has no members");
    StageData stage = floret_stage(tree, prior, hyperstage, members.front());
    for (std::size_t i = 1; i < members.size(); ++i)
        stage = merge(stage, floret_stage(tree, prior, hyperstage, members[i]));
    return stage;
}

double stage_log_score(const StageData& stage) {
    double alpha_sum = 0.0;
    double post_sum = 0.0;
    double score = 0.0;
    for (std::size_t j = 0; j < stage.alpha.size(); ++j) {
        const double a = stage.alpha[j];
        const double post = a + static_cast<double>(stage.counts[j]);
        alpha_sum += a;
        post_sum += post;
        if (stage.counts[j] != 0) score += std::lgamma(post) - std::lgamma(a);
    }
    if (post_sum == alpha_sum) return 0.0;
    return score + std::lgamma(alpha_sum) - std::lgamma(post_sum);
}

double merge_log_bf(const StageData& a, const StageData& b) {
    return stage_log_score(merge(a, b)) - stage_log_score(a) - stage_log_score(b);
}

double staging_log_score(const EventTree& tree, const PriorAssignment& prior, const Hyperstage& hyperstage,
                         std::span<const std::vector<VertexId>> stages) {
    std::set<VertexId> covered;
    double total = 0.0;
    for (const auto& stage : stages) {
        if (stage.empty()) fail(ErrorKind::InvalidArgument, "empty stage");
        const auto block = hyperstage.block_of(stage.front());
        for (VertexId s : stage) {
            if (!tree.is_situation(s)) fail(ErrorKind::InvalidArgument, EventTree::name(s) + " is not a situation");
            if (hyperstage.block_of(s) != block)
                fail(ErrorKind::Validation, "stage spans two hypersets: " + EventTree::name(stage.front()) + " and " +
                                                EventTree::name(s));
            if (!covered.insert(s).second)
                fail(ErrorKind::InvalidArgument, EventTree::name(s) + " appears in two stages");
        }
        total += stage_log_score(aggregate_stage(tree, prior, hyperstage, stage));
    }
    if (covered.size() != tree.situations().size())
        fail(ErrorKind::InvalidArgument, "staging does not cover every situation");
    return total;
}

}  // namespace cegbma
