#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cegbma/ensemble.hpp"
#include "cegbma/event_tree.hpp"
#include "cegbma/search.hpp"
#include "cegbma/staging.hpp"

namespace cegbma {

// Bell number by the Bell triangle; exact for 0 <= n <= 25.
std::uint64_t bell(unsigned n);

// Product of Bell numbers of the block sizes. Throws Capacity on overflow.
std::uint64_t model_space_size(const Hyperstage& hyperstage);

// Set partitions of {0..n-1} as restricted-growth strings, each exactly once.
class PartitionEnumerator {
public:
    explicit PartitionEnumerator(std::size_t n);

    // Labels of the current partition: rgs()[i] is the block of element i.
    const std::vector<std::size_t>& rgs() const noexcept { return rgs_; }
    // Advances; false once every partition has been visited.
    bool next();

private:
    std::vector<std::size_t> rgs_;
    std::vector<std::size_t> max_;  // max_[i] = max(rgs_[0..i])
};

inline constexpr std::size_t kDefaultEnumerationCap = 12;

struct ScoredStaging {
    Staging staging;
    double log_score = 0.0;
};

// Visits every staging of the hyperset with its exact score.
void enumerate_stagings(const HypersetContext& ctx, const std::function<void(const ScoredStaging&)>& visit,
                        std::size_t cap = kDefaultEnumerationCap);
std::vector<ScoredStaging> enumerate_stagings(const HypersetContext& ctx, std::size_t cap = kDefaultEnumerationCap);

// Window and razor applied to the full enumeration.
HypersetEnsemble exact_window(const HypersetContext& ctx, double beta, std::size_t cap = kDefaultEnumerationCap);

// Event tree with true stage probabilities, used to simulate data.
struct GeneratingModel {
    EventTree tree;
    Hyperstage hyperstage;
    FullStaging staging;
    ProbabilityTable probs;  // per vertex, tree edge order
};

// Validates that probs are positive-or-zero, sum to 1, and are shared within stages.
void check_generating_model(const GeneratingModel& model);

std::vector<PathRecord> simulate(const GeneratingModel& model, std::size_t n, std::uint64_t seed);

}  // namespace cegbma
