#include "cegbma/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "cegbma/error.hpp"

namespace cegbma {

std::vector<VertexId> HypersetContext::members() const {
    std::vector<VertexId> out;
    for (const auto& f : florets) out.push_back(f.members.front());
    return out;
}

HypersetContext make_context(const EventTree& tree, const PriorAssignment& prior, const Hyperstage& hyperstage,
                             std::size_t hyperset) {
    HypersetContext ctx;
    ctx.hyperset = hyperset;
    for (VertexId s : hyperstage.block(hyperset).members)
        ctx.florets.push_back(floret_stage(tree, prior, hyperstage, s));
    return ctx;
}

double score_staging(const HypersetContext& ctx, const Staging& staging) {
    const auto members = ctx.members();
    double total = 0.0;
    for (const auto& block : staging.blocks()) {
        StageData stage;
        for (VertexId s : block) {
            auto it = std::lower_bound(members.begin(), members.end(), s);
            if (it == members.end() || *it != s)
                fail(ErrorKind::InvalidArgument, EventTree::name(s) + " is not in hyperset " +
                                                     std::to_string(ctx.hyperset));
            const auto& floret = ctx.florets[static_cast<std::size_t>(it - members.begin())];
            stage = stage.members.empty() ? floret : merge(stage, floret);
        }
        total += stage_log_score(stage);
    }
    return total;
}

Agglomeration::Agglomeration(const HypersetContext& ctx) : hyperset_(ctx.hyperset), stages_(ctx.florets) {
    const std::size_t m = stages_.size();
    bf_.assign(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) bf_[i][j] = merge_log_bf(stages_[i], stages_[j]);
}

std::vector<MergeCandidate> Agglomeration::candidates() const {
    std::vector<MergeCandidate> out;
    for (std::size_t i = 0; i < stages_.size(); ++i)
        for (std::size_t j = i + 1; j < stages_.size(); ++j) out.push_back({i, j, bf_[i][j]});
    return out;
}

bool Agglomeration::can_improve(double epsilon) const {
    for (std::size_t i = 0; i < stages_.size(); ++i)
        for (std::size_t j = i + 1; j < stages_.size(); ++j)
            if (bf_[i][j] > epsilon) return true;
    return false;
}

void Agglomeration::apply(std::size_t i, std::size_t j) {
    if (i >= j || j >= stages_.size()) fail(ErrorKind::InvalidArgument, "invalid merge pair");
    // Stage i keeps the smaller first member, so canonical order is preserved.
    stages_[i] = merge(stages_[i], stages_[j]);
    stages_.erase(stages_.begin() + static_cast<std::ptrdiff_t>(j));
    bf_.erase(bf_.begin() + static_cast<std::ptrdiff_t>(j));
    for (auto& row : bf_) row.erase(row.begin() + static_cast<std::ptrdiff_t>(j));
    for (std::size_t k = 0; k < stages_.size(); ++k) {
        if (k == i) continue;
        const auto [lo, hi] = std::minmax(i, k);
        bf_[lo][hi] = merge_log_bf(stages_[lo], stages_[hi]);
    }
}

Staging Agglomeration::staging() const {
    std::vector<std::vector<VertexId>> blocks;
    for (const auto& s : stages_) blocks.push_back(s.members);
    return Staging(hyperset_, std::move(blocks));
}

SearchResult hac(const HypersetContext& ctx, double epsilon) {
    Agglomeration state(ctx);
    while (state.stage_count() > 1) {
        MergeCandidate best{0, 0, -std::numeric_limits<double>::infinity()};
        for (const auto& c : state.candidates())
            if (c.log_bf > best.log_bf) best = c;
        if (!(best.log_bf > epsilon)) break;
        state.apply(best.i, best.j);
    }
    auto staging = state.staging();
    const double score = score_staging(ctx, staging);
    return {std::move(staging), score};
}

std::vector<double> merge_distribution(std::span<const MergeCandidate> candidates, double epsilon,
                                       CandidatePool pool) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) top = std::max(top, c.log_bf);
    if (!(top > epsilon)) fail(ErrorKind::InvalidArgument, "no merge candidate improves the score");
    auto in_pool = [&](const MergeCandidate& c) { return pool == CandidatePool::AllPairs || c.log_bf > epsilon; };
    std::vector<double> p(candidates.size(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        if (!in_pool(candidates[k])) continue;
        p[k] = std::exp(candidates[k].log_bf - top);
        total += p[k];
    }
    for (double& x : p) x /= total;
    return p;
}

std::size_t draw_merge(std::span<const MergeCandidate> candidates, double epsilon, CandidatePool pool,
                       std::mt19937_64& rng) {
    const auto p = merge_distribution(candidates, epsilon, pool);
    const double u = unit_uniform(rng);
    double cumulative = 0.0;
    std::size_t last = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] == 0.0) continue;
        cumulative += p[k];
        last = k;
        if (u < cumulative) return k;
    }
    return last;  // rounding left u above the final cumulative sum
}

SearchResult whac_run(const HypersetContext& ctx, std::uint64_t seed, double epsilon, CandidatePool pool) {
    std::mt19937_64 rng(seed);
    Agglomeration state(ctx);
    while (state.stage_count() > 1 && state.can_improve(epsilon)) {
        const auto candidates = state.candidates();
        const auto& pick = candidates[draw_merge(candidates, epsilon, pool, rng)];
        state.apply(pick.i, pick.j);
    }
    auto staging = state.staging();
    const double score = score_staging(ctx, staging);
    return {std::move(staging), score};
}

std::vector<SampledStaging> whac_ensemble(const HypersetContext& ctx, const RunConfig& config) {
    if (config.k == 0) fail(ErrorKind::InvalidArgument, "K must be at least 1");
    const std::size_t runs = static_cast<std::size_t>(config.k) * ctx.florets.size();
    std::vector<Staging> results(runs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r = next++; r < runs; r = next++)
            results[r] = whac_run(ctx, config.base_seed + r, config.epsilon, config.pool).staging;
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(runs)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    std::map<Staging, std::size_t> hits;
    for (auto& s : results) ++hits[std::move(s)];
    std::vector<SampledStaging> out;
    for (auto& [staging, n] : hits) out.push_back({staging, score_staging(ctx, staging), n});
    std::stable_sort(out.begin(), out.end(),
                     [](const SampledStaging& a, const SampledStaging& b) { return a.log_score > b.log_score; });
    return out;
}

}  // namespace cegbma
