#pragma once

#include <random>
#include <string>
#include <vector>

#include "cegbma/event_tree.hpp"
#include "cegbma/scoring.hpp"
#include "cegbma/search.hpp"

namespace fixtures {

using cegbma::HypersetContext;
using cegbma::StageData;
using cegbma::VertexId;

// Hyperset of situations 1..n with the given per-situation prior and counts.
inline HypersetContext context(const std::vector<std::vector<double>>& alpha,
                               const std::vector<std::vector<std::uint64_t>>& counts, std::size_t hyperset = 0) {
    HypersetContext ctx;
    ctx.hyperset = hyperset;
    for (std::size_t i = 0; i < counts.size(); ++i) ctx.florets.push_back(StageData{{i + 1}, alpha[i], counts[i]});
    return ctx;
}

inline HypersetContext context(double alpha_each, const std::vector<std::vector<std::uint64_t>>& counts) {
    std::vector<std::vector<double>> alpha;
    for (const auto& c : counts) alpha.emplace_back(c.size(), alpha_each);
    return context(alpha, counts);
}

inline std::vector<double> random_probs(std::size_t dim, std::mt19937_64& rng) {
    std::gamma_distribution<double> g(1.0, 1.0);
    std::vector<double> p(dim);
    double total = 0.0;
    for (double& x : p) total += (x = g(rng));
    for (double& x : p) x /= total;
    return p;
}

inline std::vector<std::uint64_t> multinomial(std::uint64_t n, const std::vector<double>& p, std::mt19937_64& rng) {
    std::discrete_distribution<std::size_t> d(p.begin(), p.end());
    std::vector<std::uint64_t> out(p.size(), 0);
    for (std::uint64_t i = 0; i < n; ++i) ++out[d(rng)];
    return out;
}

// Synthetic hyperset of 3..6 situations drawn from 1..3 latent stages.
// Each situation gets prior mass 1 split evenly over its edges.
inline HypersetContext synthetic_hyperset(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t size = 3 + rng() % 4;
    const std::size_t dim = 2 + rng() % 2;
    const std::size_t stages = 1 + rng() % 3;
    std::vector<std::vector<double>> truth;
    for (std::size_t k = 0; k < stages; ++k) truth.push_back(random_probs(dim, rng));
    std::vector<std::vector<std::uint64_t>> counts;
    for (std::size_t i = 0; i < size; ++i) counts.push_back(multinomial(5 + rng() % 56, truth[rng() % stages], rng));
    return context(1.0 / static_cast<double>(dim), counts);
}

// Root with edges a..d, each leading to a binary (x, y) situation s1..s4.
inline cegbma::EventTree four_binary_tree(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& counts) {
    cegbma::TreeSpec spec;
    const std::vector<std::string> heads{"a", "b", "c", "d"};
    for (std::size_t i = 0; i < heads.size(); ++i) {
        spec.edges.push_back({heads[i]});
        spec.edges.push_back({heads[i], "x"});
        spec.edges.push_back({heads[i], "y"});
        spec.counts.push_back({{heads[i], "x"}, counts[i].first});
        spec.counts.push_back({{heads[i], "y"}, counts[i].second});
    }
    return cegbma::EventTree::from_spec(spec);
}

// Fixture F1: s1..s4 with counts (20,0), (20,0), (0,20), (0,20) under alpha_bar = 4.
inline cegbma::EventTree f1_tree() { return four_binary_tree({{20, 0}, {20, 0}, {0, 20}, {0, 20}}); }

}  // namespace fixtures
