#include <cmath>

#include "doctest.h"
#include "fjm/harness.hpp"
#include "fjm/periods.hpp"
#include "oracle.hpp"

using fjm::MediaConfig;
using fjm::OpinionVector;
using fjm::StopCause;
using fjm::StopCriteria;

namespace {

fjm::MediaAssignment all_to_M(std::size_t n) { return {std::vector<bool>(n, true), n}; }

}  // namespace

TEST_CASE("ell_star closed form") {
    MediaConfig cfg{1.0, 0.025, 0.01};
    CHECK(fjm::ell_star(4039, 2019.5, 44, cfg) == doctest::Approx(129.38959164316503).epsilon(1e-10));
    CHECK(fjm::ell_star(500, 250, 20, cfg) == doctest::Approx(198.79382101055273).epsilon(1e-10));
    CHECK(fjm::ell_star(101, 100, 44, cfg) == doctest::Approx(0.0).epsilon(1e-12));

    MediaConfig weaker{0.6, 0.025, 0.01};
    CHECK(fjm::ell_star(4039, 2019.5, 44, weaker) > fjm::ell_star(4039, 2019.5, 44, cfg));

    CHECK_THROWS_AS(fjm::ell_star(100, 50, 4, MediaConfig{0.5, 0.1, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(fjm::ell_star(100, 50, 4, MediaConfig{0.2, 0.1, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(fjm::ell_star(100, 95, 4, MediaConfig{1.0, 0.1, 0.1}), std::invalid_argument);
}

TEST_CASE("alpha_half_limit") {
    // Dense solve of (I + L/3) x = (1,1,0,0) on the 4-cycle 0-1-2-3-0.
    fjm::Graph cycle(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}});
    auto x = fjm::alpha_half_limit(cycle, 1.0, fjm::ZetaVector{{1, 1, 0, 0}});
    auto ref = oracle::solve_diag_plus_laplacian(cycle, std::vector<double>(4, 1.0), {1, 1, 0, 0}, 1.0 / 3.0);
    CHECK(ref[0] == doctest::Approx(0.8));
    CHECK(ref[2] == doctest::Approx(0.2));
    CHECK(oracle::max_abs_diff(x.values(), ref) <= 1e-12);

    auto g = fjm::gen_random_regular(60, 6, 3);
    for (double v : fjm::alpha_half_limit(g, 0.3, fjm::ZetaVector{std::vector<double>(60, 0.33)}).values())
        CHECK(v == doctest::Approx(0.33));

    std::vector<double> zeta(60);
    for (std::size_t i = 0; i < 60; ++i) zeta[i] = i % 2 ? 0.9 : 0.1;
    const double reach = 1000.0 * 7;
    auto near = fjm::alpha_half_limit(g, 1000.0, fjm::ZetaVector{zeta});
    CHECK(oracle::max_abs_diff(near.values(), zeta) <= 2.0 * 6 / reach);

    auto ba = fjm::gen_barabasi_albert(30, 2, 1);
    CHECK_THROWS_AS(fjm::alpha_half_limit(ba, 0.5, fjm::ZetaVector{std::vector<double>(30, 0.5)}),
                    std::invalid_argument);
}

TEST_CASE("run_periods: zero opinions radicalize down immediately") {
    auto g = fjm::gen_random_regular(50, 4, 1);
    auto a = fjm::assign_media(g, 0.7, 1);
    auto traj = fjm::run_periods(g, OpinionVector::constant(50, 0.0), MediaConfig{0.7, 0.1, 0.3}, a,
                                 StopCriteria::defaults(50, 0.3));
    CHECK(traj.stop_cause == StopCause::RadicalizedDown);
    REQUIRE(traj.records.size() == 2);
    CHECK(traj.records[1].period == 1);
    CHECK(traj.records[1].sum_z == 0.0);
}

TEST_CASE("run_periods: record 0 is the innate state") {
    auto g = fjm::gen_random_regular(40, 4, 2);
    auto s = fjm::sample_innate(40, 0.5, 0.2, 5);
    auto a = fjm::assign_media(g, 0.5, 1);
    auto stop = StopCriteria::defaults(40, 0.1);
    stop.max_periods = 3;
    stop.fixed_point_tol = 0.0;
    auto traj = fjm::run_periods(g, s, MediaConfig{0.5, 0.1, 0.1}, a, stop);
    CHECK(traj.stop_cause == StopCause::MaxPeriods);
    REQUIRE(traj.records.size() == 4);
    CHECK(traj.records[0].sum_z == doctest::Approx(s.sum()).epsilon(1e-15));
    CHECK(traj.records[0].z_M == doctest::Approx(1.1 * s.mean()));
}

TEST_CASE("run_periods: alpha = 1/2 conserves the sum and reaches the limit") {
    for (int trial = 0; trial < 4; ++trial) {
        const std::size_t n = 100 + 30 * trial, d = 4 + 2 * trial;
        auto g = fjm::gen_random_regular(n, d, trial);
        auto s = fjm::sample_innate(n, 0.5, std::sqrt(0.2), 10 + trial);
        MediaConfig cfg{0.5, 0.1, 0.1};
        auto a = fjm::assign_media(g, 0.5, trial);
        REQUIRE(a.count_M * 2 == n);
        auto stop = StopCriteria::defaults(n, cfg.gamma);
        stop.max_periods = 400;
        stop.fixed_point_tol = 1e-13;
        auto traj = fjm::run_periods(g, s, cfg, a, stop);
        CHECK(traj.stop_cause != StopCause::RadicalizedUp);
        CHECK(traj.stop_cause != StopCause::RadicalizedDown);
        for (const auto& r : traj.records)
            CHECK(std::abs(r.sum_z - traj.records[0].sum_z) <= 1e-7 * static_cast<double>(n));
        auto zeta0 = fjm::make_zeta(a, fjm::source_opinions(s, cfg.gamma));
        auto limit = fjm::alpha_half_limit(g, cfg.beta, zeta0, 1e-13);
        CHECK(oracle::max_abs_diff(traj.final_opinions.values(), limit.values()) <= 1e-5);
    }
}

TEST_CASE("run_periods: alpha = 1 on K45 crosses at ceil(ell*)") {
    auto g = oracle::complete(45);
    MediaConfig cfg{1.0, 0.025, 0.01};
    auto traj = fjm::run_periods(g, OpinionVector::constant(45, 0.5), cfg, all_to_M(45),
                                 StopCriteria::defaults(45, cfg.gamma));
    REQUIRE(traj.ell_star_predicted.has_value());
    CHECK(*traj.ell_star_predicted == doctest::Approx(129.38959164316503).epsilon(1e-9));
    CHECK(traj.stop_cause == StopCause::RadicalizedUp);
    CHECK(traj.records.back().period == 130);
    REQUIRE(traj.first_truncation_period.has_value());
    CHECK(*traj.first_truncation_period == 130);

    // each non-truncated period multiplies the sum by the regular gain factor
    const double f = fjm::regular_gain_factor(44, cfg);
    for (std::size_t t = 1; t < traj.records.size(); ++t) {
        const double ratio = traj.records[t].sum_z / traj.records[t - 1].sum_z;
        CHECK(std::abs(ratio / f - 1.0) <= 1e-8);
    }
}

TEST_CASE("run_periods: monotone sums and the truncation floor on random regular graphs") {
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t n = 120 + 20 * trial;
        auto g = fjm::gen_random_regular(n, 6 + 2 * (trial % 3), 50 + trial);
        auto s = fjm::sample_innate(n, 0.5, 0.2, 60 + trial);
        MediaConfig cfg{0.75, 0.2, 0.1};
        auto a = fjm::assign_media(g, cfg.alpha, trial);
        StopCriteria stop;
        stop.max_periods = 300;
        stop.fixed_point_tol = 1e-12;
        auto traj = fjm::run_periods(g, s, cfg, a, stop);

        MediaConfig realized = cfg;
        realized.alpha = a.effective_alpha();
        const double f = fjm::regular_gain_factor(g.stats().d_max, realized);
        bool truncated_seen = false;
        const double floor = 1.0 / ((1.0 + cfg.gamma) * (1.0 + cfg.gamma));
        for (std::size_t t = 1; t < traj.records.size(); ++t) {
            const auto& prev = traj.records[t - 1];
            const auto& cur = traj.records[t];
            if (!prev.truncated && !truncated_seen) {
                CHECK(cur.sum_z > prev.sum_z);
                CHECK(std::abs(cur.sum_z / prev.sum_z / f - 1.0) <= 1e-8);
            }
            truncated_seen = truncated_seen || prev.truncated;
            if (truncated_seen) CHECK(cur.mean_z >= floor - 1e-8);
        }
        CHECK(truncated_seen);

        // first crossing is ceil(ell*) or one later
        const auto ell = fjm::ell_star(n, s.sum(), g.stats().d_max, realized);
        REQUIRE(traj.first_truncation_period.has_value());
        const auto c = static_cast<std::size_t>(std::ceil(ell));
        CHECK((*traj.first_truncation_period == c || *traj.first_truncation_period == c + 1));
    }
}

TEST_CASE("run_periods: alpha < 1/2 drifts down, alpha = 0 radicalizes down") {
    auto g = fjm::gen_barabasi_albert(200, 3, 4);
    auto s = fjm::sample_innate(200, 0.5, 0.2, 4);
    MediaConfig cfg{0.0, 0.5, 0.5};
    auto a = fjm::assign_media(g, 0.0, 1);
    auto traj = fjm::run_periods(g, s, cfg, a, StopCriteria::defaults(200, cfg.gamma));
    CHECK(traj.stop_cause == StopCause::RadicalizedDown);
    for (std::size_t t = 1; t < traj.records.size(); ++t)
        CHECK(traj.records[t].sum_z < traj.records[t - 1].sum_z);
    CHECK(traj.records.back().mean_z <= 10.0 / 200);

    auto reg = fjm::gen_random_regular(100, 6, 1);
    auto s2 = fjm::sample_innate(100, 0.5, 0.2, 9);
    auto a2 = fjm::assign_media(reg, 0.3, 2);
    auto stop = StopCriteria::defaults(100, 0.1);
    stop.max_periods = 20;
    auto t2 = fjm::run_periods(reg, s2, MediaConfig{0.3, 0.2, 0.1}, a2, stop);
    for (std::size_t t = 1; t < t2.records.size(); ++t) CHECK(t2.records[t].sum_z <= t2.records[t - 1].sum_z);
}

TEST_CASE("run_periods: solver failure carries the period") {
    auto g = fjm::gen_random_regular(200, 10, 1);
    auto s = fjm::sample_innate(200, 0.5, 0.2, 1);
    auto a = fjm::assign_media(g, 0.9, 1);
    StopCriteria stop;
    try {
        // a relative tolerance far below double precision cannot be met
        fjm::run_periods(g, s, MediaConfig{0.9, 0.1, 0.1}, a, stop, 1e-30);
        FAIL("expected failure");
    } catch (const fjm::PeriodSolveError& e) {
        CHECK(e.period() == 1);
    }
}

TEST_CASE("stop criteria validation") {
    StopCriteria s = StopCriteria::defaults(100, 0.1);
    CHECK(*s.epsilon == doctest::Approx(0.1));
    CHECK(*s.up_threshold == doctest::Approx(1 / 1.1));
    s.epsilon = 0.95;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK(fjm::to_string(StopCause::FixedPoint) == "fixed_point");
}

TEST_CASE("run_periods: a disengaged fixed-point rule runs to the period cap") {
    auto g = fjm::gen_random_regular(60, 4, 3);
    auto s = fjm::sample_innate(60, 0.5, 0.2, 4);
    auto a = fjm::assign_media(g, 0.5, 5);
    auto stop = StopCriteria::defaults(60, 0.1);
    stop.max_periods = 200;
    stop.fixed_point_tol.reset();
    auto traj = fjm::run_periods(g, s, MediaConfig{0.5, 0.1, 0.1}, a, stop);
    CHECK(traj.stop_cause == StopCause::MaxPeriods);
    CHECK(traj.records.back().period == 200);
}
