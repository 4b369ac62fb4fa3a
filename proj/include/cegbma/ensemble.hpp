#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cegbma/scoring.hpp"
#include "cegbma/search.hpp"
#include "cegbma/staging.hpp"

namespace cegbma {

// Posterior weights under a uniform model prior: exp(score - logsumexp(scores)).
std::vector<double> normalize_weights(std::span<const double> log_scores);

// Indices kept by Occam's window: best / model < beta, strictly. Works on log
// scores, which makes the comparison exact at the boundary.
std::vector<std::size_t> occams_window(std::span<const double> log_scores, double beta);

// True iff `coarse` is a proper coarsening of `fine` (a submodel of it).
bool is_nested(const Staging& coarse, const Staging& fine);

// Indices surviving the razor: model k is dropped when some other model l in
// the input is nested in it and strictly more probable.
std::vector<std::size_t> razor_filter(std::span<const Staging> stagings, std::span<const double> log_scores);

struct WeightedStaging {
    Staging staging;
    double log_score = 0.0;
    std::size_t hits = 0;
    double weight = 0.0;           // over every sampled staging
    bool in_window = false;
    bool well_performing = false;
    double retained_weight = 0.0;  // renormalized over the well-performing set
};

// Sampled stagings of one hyperset, descending score.
struct HypersetEnsemble {
    std::size_t hyperset = 0;
    std::vector<WeightedStaging> models;

    std::vector<const WeightedStaging*> well_performing() const;
};

// Deduplicates, weights, and applies window and razor.
HypersetEnsemble build_hyperset_ensemble(std::size_t hyperset, std::span<const SampledStaging> sampled,
                                         double beta);

struct ScoredModel {
    FullStaging stagings;           // one per hyperset
    std::vector<std::size_t> picks;  // index into each hyperset's well-performing list
    double log_score = 0.0;
    double weight = 0.0;
};

struct ModelAverage {
    std::vector<ScoredModel> models;  // descending score
    double beta = 0.0;
};

// Cartesian product of the well-performing stagings of every hyperset.
// Throws Capacity when the product would exceed max_models.
ModelAverage combine(std::span<const HypersetEnsemble> ensembles, double beta, std::size_t max_models);

// Product-model nesting: nested-or-equal in every hyperset, proper in one.
bool is_nested(const FullStaging& coarse, const FullStaging& fine);

// Optional second window and razor pass over the combined models.
ModelAverage global_window(const ModelAverage& average, double beta);

// Partition meet: s, t share a block iff they do in every input.
Staging staging_intersection(std::span<const Staging> stagings);
// Partition join: transitive closure of co-staging in any input.
Staging staging_union(std::span<const Staging> stagings);

struct SameStage {
    double probability = 0.0;
    bool cross_hyperset = false;
};

SameStage same_stage_probability(const ModelAverage& average, const Hyperstage& hyperstage, VertexId s, VertexId t);

// Per-vertex edge probability vectors in tree edge order; empty for leaves.
using ProbabilityTable = std::vector<std::vector<double>>;

ProbabilityTable posterior_mean_probs(const EventTree& tree, const PriorAssignment& prior,
                                      const Hyperstage& hyperstage, const FullStaging& staging);

struct Predictive {
    ProbabilityTable edge_probs;
    std::vector<double> leaf_probs;  // aligned with tree.leaves()
};

// Probability of each root-to-leaf path under one set of edge probabilities.
std::vector<double> leaf_probabilities(const EventTree& tree, const ProbabilityTable& edge_probs);

// Model-level average: edge vectors and leaf atoms are each averaged over
// models with the model weights.
Predictive averaged_predictive(const ModelAverage& average, const EventTree& tree, const PriorAssignment& prior,
                               const Hyperstage& hyperstage);

}  // namespace cegbma
