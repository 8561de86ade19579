#include "doctest.h"
#include "fjm/media.hpp"
#include "fjm/nonstubborn.hpp"
#include "oracle.hpp"

using fjm::MediaConfig;
using fjm::OpinionVector;

TEST_CASE("nonstubborn: consensus is a fixed point") {
    auto g = fjm::gen_barabasi_albert(80, 3, 1);
    auto r = fjm::nonstubborn_equilibrium(g, OpinionVector::constant(80, 0.4), MediaConfig{1.0, 0.3, 1e-9});
    for (double v : r.node_opinions.values()) CHECK(v == doctest::Approx(0.4).epsilon(1e-8));
    CHECK(r.z_M_star == doctest::Approx(0.4).epsilon(1e-8));
}

TEST_CASE("nonstubborn: single node against the 2x2 oracle") {
    fjm::Graph single(1, {});
    auto inst = fjm::build_augmented_instance(single, OpinionVector({0.5}), MediaConfig{1.0, 1.0, 0.1});
    CHECK(inst.media_edge_weights[0] == 1.0);
    CHECK(inst.s_M == doctest::Approx(0.55));

    // (I + L_aug) z = (0.5, 0.55) with L_aug = [[1,-1],[-1,1]]
    auto ref = oracle::solve({{2.0, -1.0}, {-1.0, 2.0}}, {0.5, 0.55});
    auto r = fjm::nonstubborn_equilibrium(single, OpinionVector({0.5}), MediaConfig{1.0, 1.0, 0.1});
    CHECK(r.node_opinions[0] == doctest::Approx(ref[0]).epsilon(1e-12));
    CHECK(r.z_M_star == doctest::Approx(ref[1]).epsilon(1e-12));
    CHECK(ref[0] == doctest::Approx(0.5166666666666666));
    CHECK(ref[1] == doctest::Approx(0.5333333333333333));
}

TEST_CASE("nonstubborn: K45 respects the bound") {
    auto g = oracle::complete(45);
    auto s = OpinionVector::constant(45, 0.5);
    auto r = fjm::nonstubborn_equilibrium(g, s, MediaConfig{1.0, 0.025, 0.01});
    CHECK(r.node_opinions.sum() <= (1 + 1.01 / 45) * 22.5);
}

TEST_CASE("nonstubborn: source opinion is capped") {
    auto g = fjm::gen_random_regular(20, 4, 1);
    auto inst = fjm::build_augmented_instance(g, OpinionVector::constant(20, 0.95), MediaConfig{1.0, 0.1, 0.2});
    CHECK(inst.s_M == 1.0);
    CHECK(inst.graph.num_nodes() == 21);
    CHECK(inst.graph.degree(20) == doctest::Approx(20 * 0.1 * 5));
    CHECK_THROWS_AS(fjm::nonstubborn_equilibrium(g, OpinionVector::constant(20, 0.5), MediaConfig{0.5, 0.1, 0.2}),
                    std::invalid_argument);
}

TEST_CASE("nonstubborn: bound and conservation on random graphs") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = trial % 2 ? fjm::gen_barabasi_albert(60 + trial * 7, 2, trial)
                           : oracle::random_weighted_graph(50 + trial, 0.1, trial);
        const auto n = g.num_nodes();
        OpinionVector s(oracle::random_opinions(n, rng));
        MediaConfig cfg{1.0, 0.01 + u(rng), 0.01 + 0.9 * u(rng)};
        auto r = fjm::nonstubborn_equilibrium(g, s, cfg);
        const double nn = static_cast<double>(n);
        CHECK(r.node_opinions.sum() <= fjm::nonstubborn_sum_bound(n, s.sum(), cfg.gamma) + 1e-8 * nn);
        CHECK(std::abs(r.node_opinions.sum() + r.z_M_star - s.sum() - r.s_M) <= 1e-8 * nn);
    }
}

TEST_CASE("stubborn gain dominates the non-stubborn gain on 44-regular graphs") {
    auto g = fjm::gen_random_regular(500, 44, 3);
    MediaConfig cfg{1.0, 0.025, 0.01};
    const double stubborn = fjm::regular_gain_factor(44, cfg);
    CHECK(stubborn == doctest::Approx(1 + 0.01 * 1.125 / 2.125));
    CHECK(stubborn - 1.0 > 1.01 / 500);

    auto s = OpinionVector::constant(500, 0.5);
    auto r = fjm::nonstubborn_equilibrium(g, s, cfg, 1e-13);
    CHECK(r.node_opinions.sum() / s.sum() < stubborn);
}
