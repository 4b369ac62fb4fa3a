#include <cmath>
#include <random>

#include "cegbma/error.hpp"
#include "cegbma/io.hpp"
#include "cegbma/scoring.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/mpfr_oracle.hpp"

using namespace cegbma;

namespace {

EventTree falls_tree() {
    return parse_generating_model(read_text_file(CEGBMA_DATA_DIR "/falls_generating_model.json")).tree;
}

std::size_t depth(const EventTree& t, VertexId v) { return t.path_to(v).size(); }

}  // namespace

TEST_CASE("propagate_prior splits mass down the tree") {
    const auto t = falls_tree();
    const auto prior = propagate_prior(t, 4.0);
    CHECK(prior.alpha[0] == std::vector<double>{1, 1, 1, 1});
    CHECK(prior.alpha[1] == std::vector<double>{0.5, 0.5});
    // s5: high-risk assessed, arriving mass 0.5 over three treatment edges.
    REQUIRE(prior.alpha[5].size() == 3);
    CHECK(prior.alpha[5][0] == doctest::Approx(0.5 / 3).epsilon(1e-15));
    for (VertexId v = 1; v < t.vertex_count(); ++v) {
        const VertexId p = *t.parent(v);
        CHECK(prior.arriving_mass[v] == prior.alpha[p][0]);
    }

    // Mass on the frontier at every depth (vertices at that depth plus
    // leaves above it) is alpha_bar.
    std::size_t max_depth = 0;
    for (VertexId v = 0; v < t.vertex_count(); ++v) max_depth = std::max(max_depth, depth(t, v));
    for (std::size_t d = 0; d <= max_depth; ++d) {
        double mass = 0.0;
        for (VertexId v = 0; v < t.vertex_count(); ++v)
            if (depth(t, v) == d || (t.is_leaf(v) && depth(t, v) < d)) mass += prior.arriving_mass[v];
        CHECK(mass == doctest::Approx(4.0).epsilon(1e-12));
    }
}

TEST_CASE("propagate_prior on small trees") {
    SUBCASE("depth-1 tree with k edges") {
        std::vector<PathRecord> r{{"a"}, {"b"}, {"c"}, {"d"}, {"e"}};
        const auto prior = propagate_prior(build_tree(r), 3.0);
        for (double a : prior.alpha[0]) CHECK(a == doctest::Approx(0.6));
    }
    SUBCASE("stratified tree conserves mass per depth") {
        std::vector<PathRecord> r;
        for (std::string a : {"0", "1"})
            for (std::string b : {"0", "1", "2"})
                for (std::string c : {"0", "1"}) r.push_back({a, b, c});
        const auto t = build_tree(r);
        const auto prior = propagate_prior(t, 7.0);
        for (std::size_t d = 0; d <= 3; ++d) {
            double mass = 0.0;
            for (VertexId v = 0; v < t.vertex_count(); ++v)
                if (depth(t, v) == d) mass += prior.arriving_mass[v];
            CHECK(mass == doctest::Approx(7.0).epsilon(1e-12));
        }
    }
    SUBCASE("flat rule") {
        const auto prior = propagate_prior(falls_tree(), 4.0, PriorRule::FlatPerFloret);
        CHECK(prior.alpha[1] == std::vector<double>{2.0, 2.0});
    }
    SUBCASE("non-positive alpha_bar") {
        std::vector<PathRecord> r{{"a"}};
        const auto t = build_tree(r);
        CHECK_THROWS_AS(propagate_prior(t, 0.0), Error);
        CHECK_THROWS_AS(propagate_prior(t, -1.0), Error);
        CHECK_THROWS_AS(propagate_prior(t, std::nan("")), Error);
    }
}

TEST_CASE("stage_log_score closed forms") {
    CHECK(stage_log_score({{0}, {1, 1}, {0, 0}}) == 0.0);
    CHECK(stage_log_score({{0}, {1, 1}, {1, 0}}) == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
    const std::vector<double> a{0.5, 0.5};
    const std::vector<std::uint64_t> n{3, 1};
    CHECK(std::abs(stage_log_score({{0}, a, n}) - oracle::stage_log_score(a, n)) < 1e-9);
}

TEST_CASE("stage_log_score matches the arbitrary-precision oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> alpha(0.01, 10.0);
    for (int i = 0; i < 200; ++i) {
        const std::size_t dim = 2 + rng() % 4;
        StageData s{{0}, {}, {}};
        for (std::size_t j = 0; j < dim; ++j) {
            s.alpha.push_back(alpha(rng));
            s.counts.push_back(rng() % 51);
        }
        CHECK(std::abs(stage_log_score(s) - oracle::stage_log_score(s.alpha, s.counts)) < 1e-9);
    }
}

TEST_CASE("merge_log_bf hand values") {
    const StageData a{{1}, {1, 1}, {2, 0}}, b{{2}, {1, 1}, {0, 2}};
    CHECK(std::abs(merge_log_bf(a, b) - std::log(27.0 / 70.0)) < 1e-9);
    CHECK(merge_log_bf(a, b) == doctest::Approx(-0.952658).epsilon(1e-6));
    const StageData c{{1}, {1, 1}, {10, 0}}, d{{2}, {1, 1}, {10, 0}};
    CHECK(std::abs(merge_log_bf(c, d) - std::log(726.0 / 506.0)) < 1e-9);
    CHECK(merge_log_bf(c, d) == doctest::Approx(0.361013).epsilon(1e-6));
    const StageData z1{{1}, {0.3, 2.0, 1.0}, {0, 0, 0}}, z2{{2}, {4.0, 0.1, 0.5}, {0, 0, 0}};
    CHECK(merge_log_bf(z1, z2) == 0.0);
    const StageData bad{{3}, {1, 1, 1}, {0, 0, 0}};
    CHECK_THROWS_AS(merge_log_bf(a, bad), Error);
}

TEST_CASE("merge is commutative and associative") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        auto make = [&](VertexId id) {
            StageData s{{id}, {}, {}};
            for (int j = 0; j < 3; ++j) {
                s.alpha.push_back(0.25 * static_cast<double>(1 + rng() % 8));
                s.counts.push_back(rng() % 30);
            }
            return s;
        };
        const auto a = make(1), b = make(2), c = make(3);
        const auto ab = merge(a, b), ba = merge(b, a);
        CHECK(ab.alpha == ba.alpha);
        CHECK(ab.counts == ba.counts);
        CHECK(ab.members == ba.members);
        const auto l = merge(merge(a, b), c), r = merge(a, merge(b, c));
        CHECK(l.alpha == r.alpha);
        CHECK(l.counts == r.counts);
        CHECK(stage_log_score(l) == stage_log_score(r));
    }
}

TEST_CASE("staging_log_score") {
    const auto t = fixtures::four_binary_tree({{5, 1}, {4, 2}, {0, 6}, {1, 7}});
    const auto h = default_hyperstage(t);
    const auto prior = propagate_prior(t, 4.0);

    SUBCASE("singletons sum floret scores") {
        std::vector<std::vector<VertexId>> stages;
        double expected = 0.0;
        for (VertexId s : t.situations()) {
            stages.push_back({s});
            expected += stage_log_score(floret_stage(t, prior, h, s));
        }
        CHECK(staging_log_score(t, prior, h, stages) == doctest::Approx(expected).epsilon(1e-14));
    }
    SUBCASE("one-nested identity") {
        const std::vector<std::vector<VertexId>> apart{{0}, {1}, {2}, {3, 4}};
        const std::vector<std::vector<VertexId>> merged{{0}, {1, 2}, {3, 4}};
        const double diff = staging_log_score(t, prior, h, merged) - staging_log_score(t, prior, h, apart);
        const double bf = merge_log_bf(floret_stage(t, prior, h, 1), floret_stage(t, prior, h, 2));
        CHECK(std::abs(diff - bf) < 1e-9);
    }
    SUBCASE("matches the oracle") {
        const std::vector<std::vector<VertexId>> stages{{0}, {1, 2, 4}, {3}};
        double expected = oracle::stage_log_score(prior.alpha[0], t.floret(0).counts);
        expected += oracle::stage_log_score({1.5, 1.5}, {10, 10});
        expected += oracle::stage_log_score({0.5, 0.5}, {0, 6});
        CHECK(std::abs(staging_log_score(t, prior, h, stages) - expected) < 1e-9);
    }
    SUBCASE("stage spanning two hypersets") {
        const std::vector<std::vector<VertexId>> stages{{0, 1}, {2}, {3}, {4}};
        try {
            staging_log_score(t, prior, h, stages);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Validation);
        }
    }
    SUBCASE("incomplete staging") {
        const std::vector<std::vector<VertexId>> stages{{0}, {1}};
        CHECK_THROWS_AS(staging_log_score(t, prior, h, stages), Error);
    }
}

TEST_CASE("zero-count tree: every staging scores 0") {
    const auto t = fixtures::four_binary_tree({{0, 0}, {0, 0}, {0, 0}, {0, 0}});
    const auto h = default_hyperstage(t);
    const auto prior = propagate_prior(t, 4.0);
    const std::vector<std::vector<VertexId>> merged{{0}, {1, 2, 3, 4}}, apart{{0}, {1}, {2}, {3}, {4}};
    CHECK(staging_log_score(t, prior, h, merged) == 0.0);
    CHECK(staging_log_score(t, prior, h, apart) == 0.0);
}
