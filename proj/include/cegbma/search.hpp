#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cegbma/scoring.hpp"
#include "cegbma/staging.hpp"

namespace cegbma {

// Everything the search needs for one hyperset: the singleton stage of each
// member, in ascending member order.
struct HypersetContext {
    std::size_t hyperset = 0;
    std::vector<StageData> florets;

    std::vector<VertexId> members() const;
};

HypersetContext make_context(const EventTree& tree, const PriorAssignment& prior, const Hyperstage& hyperstage,
                             std::size_t hyperset);

// Exact log score of a staging of ctx's hyperset. Stage vectors are summed in
// ascending member order so equal partitions get bit-identical scores.
double score_staging(const HypersetContext& ctx, const Staging& staging);

struct MergeCandidate {
    std::size_t i = 0;  // stage indices in canonical order, i < j
    std::size_t j = 0;
    double log_bf = 0.0;
};

// Which candidates enter the merge-probability normalization.
enum class CandidatePool {
    Improving,  // only merges with log BF > epsilon
    AllPairs,   // every pair, once some merge improves
};

struct SearchResult {
    Staging staging;
    double log_score = 0.0;
};

// Agglomeration state over one hyperset. Starts from singletons; pairwise log
// Bayes factors are cached and only pairs touching a merged stage are rescored.
class Agglomeration {
public:
    explicit Agglomeration(const HypersetContext& ctx);

    std::size_t stage_count() const noexcept { return stages_.size(); }
    std::span<const StageData> stages() const noexcept { return stages_; }
    double log_bf(std::size_t i, std::size_t j) const { return bf_[i][j]; }

    // All pairs (i < j), lexicographic.
    std::vector<MergeCandidate> candidates() const;
    bool can_improve(double epsilon) const;

    void apply(std::size_t i, std::size_t j);
    Staging staging() const;

private:
    std::size_t hyperset_;
    std::vector<StageData> stages_;
    std::vector<std::vector<double>> bf_;  // upper triangle used
};

// Greedy agglomeration: merge the best candidate while its log BF > epsilon.
// Ties go to the lexicographically smallest pair.
SearchResult hac(const HypersetContext& ctx, double epsilon = 0.0);

// Merge probabilities aligned with `candidates`: proportional to exp(log_bf)
// over the pool, zero outside it. Throws when no candidate has log BF > epsilon.
std::vector<double> merge_distribution(std::span<const MergeCandidate> candidates, double epsilon = 0.0,
                                       CandidatePool pool = CandidatePool::Improving);

// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Index of one candidate sampled from merge_distribution.
std::size_t draw_merge(std::span<const MergeCandidate> candidates, double epsilon, CandidatePool pool,
                       std::mt19937_64& rng);

struct RunConfig {
    std::uint64_t base_seed = 0;
    unsigned k = 100;
    double epsilon = 0.0;
    CandidatePool pool = CandidatePool::Improving;
    unsigned threads = 1;
};

// One randomized agglomeration (w-HAC) seeded with std::mt19937_64(seed).
SearchResult whac_run(const HypersetContext& ctx, std::uint64_t seed, double epsilon = 0.0,
                      CandidatePool pool = CandidatePool::Improving);

struct SampledStaging {
    Staging staging;
    double log_score = 0.0;
    std::size_t hits = 0;
};

// k * |hyperset| runs with seeds base_seed + run. Results deduplicated by
// staging, sorted by descending score then staging order.
std::vector<SampledStaging> whac_ensemble(const HypersetContext& ctx, const RunConfig& config);

}  // namespace cegbma
