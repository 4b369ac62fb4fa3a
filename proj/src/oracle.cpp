#include "cegbma/oracle.hpp"

#include <cmath>
#include <random>

#include "cegbma/error.hpp"

namespace cegbma {

std::uint64_t bell(unsigned n) {
    if (n > 25) fail(ErrorKind::InvalidArgument, "bell(n) is exact only for n <= 25");
    // Row k of the triangle starts with the last entry of row k-1; Bell(k) is
    // the first entry of row k.
    std::vector<std::uint64_t> row{1};
    for (unsigned k = 0; k < n; ++k) {
        std::vector<std::uint64_t> next{row.back()};
        for (std::uint64_t x : row) next.push_back(next.back() + x);
        row = std::move(next);
    }
    return row.front();
}

std::uint64_t model_space_size(const Hyperstage& hyperstage) {
    std::uint64_t total = 1;
    for (const auto& block : hyperstage.blocks()) {
        // Bell(26) already exceeds 64 bits.
        if (block.members.size() > 25) fail(ErrorKind::Capacity, "model space size overflows 64 bits");
        const std::uint64_t b = bell(static_cast<unsigned>(block.members.size()));
        if (total > UINT64_MAX / b) fail(ErrorKind::Capacity, "model space size overflows 64 bits");
        total *= b;
    }
    return total;
}

PartitionEnumerator::PartitionEnumerator(std::size_t n) : rgs_(n, 0), max_(n, 0) {}

bool PartitionEnumerator::next() {
    // Increment the rightmost position that may grow: rgs[i] <= max(rgs[0..i-1]) + 1.
    for (std::size_t i = rgs_.size(); i-- > 1;) {
        if (rgs_[i] <= max_[i - 1]) {
            ++rgs_[i];
            max_[i] = std::max(max_[i - 1], rgs_[i]);
            for (std::size_t j = i + 1; j < rgs_.size(); ++j) {
                rgs_[j] = 0;
                max_[j] = max_[i];
            }
            return true;
        }
    }
    return false;
}

void enumerate_stagings(const HypersetContext& ctx, const std::function<void(const ScoredStaging&)>& visit,
                        std::size_t cap) {
    const std::size_t n = ctx.florets.size();
    if (n > cap)
        fail(ErrorKind::Capacity, "hyperset of size " + std::to_string(n) + " exceeds the enumeration cap of " +
                                      std::to_string(cap));
    const auto members = ctx.members();
    PartitionEnumerator it(n);
    do {
        const auto& labels = it.rgs();
        std::vector<std::vector<VertexId>> blocks;
        for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] >= blocks.size()) blocks.resize(labels[i] + 1);
            blocks[labels[i]].push_back(members[i]);
        }
        Staging staging(ctx.hyperset, std::move(blocks));
        const double score = score_staging(ctx, staging);
        visit({std::move(staging), score});
    } while (it.next());
}

std::vector<ScoredStaging> enumerate_stagings(const HypersetContext& ctx, std::size_t cap) {
    std::vector<ScoredStaging> out;
    enumerate_stagings(ctx, [&](const ScoredStaging& s) { out.push_back(s); }, cap);
    return out;
}

HypersetEnsemble exact_window(const HypersetContext& ctx, double beta, std::size_t cap) {
    std::vector<SampledStaging> all;
    enumerate_stagings(ctx, [&](const ScoredStaging& s) { all.push_back({s.staging, s.log_score, 1}); }, cap);
    return build_hyperset_ensemble(ctx.hyperset, all, beta);
}

void check_generating_model(const GeneratingModel& model) {
    const auto& tree = model.tree;
    if (model.probs.size() != tree.vertex_count())
        fail(ErrorKind::InvalidInput, "generating model: probability table does not match the tree");
    for (VertexId s : tree.situations()) {
        const auto& p = model.probs[s];
        if (p.size() != tree.out_degree(s))
            fail(ErrorKind::InvalidInput, "generating model: " + EventTree::name(s) + " has the wrong vector length");
        double sum = 0.0;
        for (double x : p) {
            if (!(x >= 0.0) || !std::isfinite(x))
                fail(ErrorKind::InvalidInput, "generating model: negative probability at " + EventTree::name(s));
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            fail(ErrorKind::InvalidInput, "generating model: probabilities at " + EventTree::name(s) + " do not sum to 1");
    }
    for (const auto& stage : all_stages(model.staging)) {
        const auto ref = model.hyperstage.aligned_edges(tree, stage.front());
        for (VertexId s : stage) {
            const auto order = model.hyperstage.aligned_edges(tree, s);
            for (std::size_t a = 0; a < order.size(); ++a)
                if (std::abs(model.probs[s][order[a]] - model.probs[stage.front()][ref[a]]) > 1e-12)
                    fail(ErrorKind::InvalidInput, "generating model: " + EventTree::name(s) +
                                                      " differs from its stage");
        }
    }
}

std::vector<PathRecord> simulate(const GeneratingModel& model, std::size_t n, std::uint64_t seed) {
    const auto& tree = model.tree;
    std::mt19937_64 rng(seed);
    std::vector<PathRecord> records;
    records.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        PathRecord path;
        VertexId v = tree.root();
        while (!tree.is_leaf(v)) {
            const auto out = tree.out_edges(v);
            const auto& p = model.probs[v];
            const double u = unit_uniform(rng);
            double cumulative = 0.0;
            std::size_t pick = out.size();
            for (std::size_t e = 0; e < out.size(); ++e) {
                if (p[e] == 0.0) continue;
                cumulative += p[e];
                pick = e;
                if (u < cumulative) break;
            }
            path.push_back(out[pick].label);
            v = out[pick].head;
        }
        records.push_back(std::move(path));
    }
    return records;
}

}  // namespace cegbma
