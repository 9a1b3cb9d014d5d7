#include <doctest.h>

#include <cmath>

#include "fitsim/mm1.hpp"
#include "fitsim/scenario.hpp"

using namespace fitsim;

TEST_CASE("closed-form values") {
    const auto empty = mm1_metrics(MM1Params{0.0, 1.0});
    CHECK(empty.wq == 0.0);
    CHECK(empty.l == 0.0);
    CHECK(empty.w == 1.0);

    const auto half = mm1_metrics(MM1Params{0.5, 1.0});
    CHECK(half.rho == 0.5);
    CHECK(half.wq == 1.0);
    CHECK(half.w == 2.0);

    const auto busy = mm1_metrics(MM1Params{0.8, 1.0});
    CHECK(busy.wq == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(busy.lq == doctest::Approx(3.2).epsilon(1e-12));
}

TEST_CASE("unstable and invalid parameters") {
    CHECK_THROWS_AS(mm1_metrics(MM1Params{1.0, 1.0}), UnstableSystem);
    CHECK_THROWS_AS(mm1_metrics(MM1Params{2.0, 1.0}), UnstableSystem);
    CHECK_THROWS_AS(mm1_metrics(MM1Params{0.5, 0.0}), UnstableSystem);
}

TEST_CASE("W = Wq + 1/mu and Wq shrinks with lambda") {
    double prev_wq = -1.0;
    for (double lambda : {0.9, 0.7, 0.5, 0.3, 0.1, 0.0}) {
        const auto m = mm1_metrics(MM1Params{lambda, 1.25});
        CHECK(m.w == m.wq + 1.0 / 1.25);
        if (prev_wq >= 0.0) CHECK(m.wq < prev_wq);
        prev_wq = m.wq;
    }
}

TEST_CASE("littles law arithmetic") {
    CHECK(littles_law_error(3.2, 0.8, 4.0) == 0.0);
    CHECK(littles_law_error(3.2, 0.8, 4.2) == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("littles law holds as an identity on a drained replication") {
    const auto cfg = ScenarioConfig::mm1_degenerate(0.8, 1.0);
    const auto rep = run_des_replication(cfg, 31337);
    REQUIRE(rep.customers_completed > 0);
    const double lambda_obs =
        static_cast<double>(rep.customers_arrived) / rep.elapsed_minutes;
    CHECK(littles_law_check(rep, lambda_obs) <= 1e-9);
}

TEST_CASE("littles law check needs data") {
    const auto cfg = ScenarioConfig::mm1_degenerate(0.0, 1.0);
    ScenarioConfig quiet = cfg;
    quiet.arrival_rate = 0.0;
    const auto rep = run_des_replication(quiet, 1);
    CHECK_THROWS_AS(littles_law_check(rep, 0.0), InsufficientData);
}
