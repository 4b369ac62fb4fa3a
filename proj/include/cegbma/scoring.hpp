#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cegbma/event_tree.hpp"

namespace cegbma {

enum class PriorRule {
    // Root receives alpha_bar; every floret splits its arriving mass evenly and
    // each child inherits the parameter on its incoming edge.
    MassPropagation,
    // Every floret gets alpha_bar / out-degree regardless of depth.
    FlatPerFloret,
};

// Dirichlet parameters for every situation, aligned to the tree's edge order.
struct PriorAssignment {
    double alpha_bar = 0.0;
    PriorRule rule = PriorRule::MassPropagation;
    std::vector<double> arriving_mass;       // per vertex
    std::vector<std::vector<double>> alpha;  // per vertex, empty for leaves
};

PriorAssignment propagate_prior(const EventTree& tree, double alpha_bar,
                                PriorRule rule = PriorRule::MassPropagation);

// Aggregated prior and counts of a set of situations sharing one distribution.
struct StageData {
    std::vector<VertexId> members;  // sorted
    std::vector<double> alpha;
    std::vector<std::uint64_t> counts;
};

// Componentwise sum; members are merged.
StageData merge(const StageData& a, const StageData& b);

// Singleton stage for situation s, vectors in the hyperstage's aligned order.
StageData floret_stage(const EventTree& tree, const PriorAssignment& prior, const Hyperstage& hyperstage,
                       VertexId s);

// Aggregates several situations of one hyperset into one stage.
StageData aggregate_stage(const EventTree& tree, const PriorAssignment& prior, const Hyperstage& hyperstage,
                          std::span<const VertexId> members);

// Log Dirichlet-Multinomial marginal likelihood of the stage's pooled data:
//   lnG(sum a) - lnG(sum a+n) + sum_j [lnG(a_j+n_j) - lnG(a_j)]
double stage_log_score(const StageData& stage);

// Log Bayes factor of merging two stages against keeping them apart.
double merge_log_bf(const StageData& a, const StageData& b);

// Sum of stage scores. Each stage must lie inside a single hyperset and the
// stages must cover every situation exactly once.
double staging_log_score(const EventTree& tree, const PriorAssignment& prior, const Hyperstage& hyperstage,
                         std::span<const std::vector<VertexId>> stages);

}  // namespace cegbma
