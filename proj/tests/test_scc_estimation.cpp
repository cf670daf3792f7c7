#include <doctest.h>

#include <cmath>
#include <sstream>

#include "retrocarbon/scc_estimation.hpp"

using namespace retrocarbon;

namespace {

std::vector<MeasuredDamage> draw_all(const DamageWorld& w, std::uint64_t seed) {
    DamageStreams streams(w, seed);
    std::vector<MeasuredDamage> out;
    for (Year p = 0; p <= w.horizon_T; ++p) {
        for (Year v = 0; v <= p; ++v) out.push_back(streams.draw(v, p));
    }
    return out;
}

SccEstimate est(Year v, Year t, const char* value) { return SccEstimate{v, t, Money::parse(value)}; }

}  // namespace

TEST_CASE("linear world hand sum") {
    DamageWorld w;
    w.a2 = 1.0;
    w.horizon_T = 3;
    const auto ms = draw_all(w, 1);
    int loop = 0;
    for (int s = 0; s <= 3; ++s) loop += s;
    CHECK(loop == 6);
    CHECK(estimate_scc(w, EstimatorModel{}, ms, 0, 3).value == Money::units(loop));
    CHECK(true_scc_oracle(w, ms, 0) == Money::units(6));
}

TEST_CASE("perfect model at the vintage equals the discounted mean sum") {
    DamageWorld w;
    w.a2 = 1.5;
    w.a4 = 0.02;
    w.onset_delay = 3;
    w.horizon_T = 20;
    w.discount_r = 0.03;
    EstimatorModel exact{w.a2, w.a4};
    const auto ms = draw_all(w, 3);
    double sum = 0.0;
    for (int s = 2; s <= 20; ++s) {
        const double tau = s - 2;
        const double x = std::max(0.0, tau - 3);
        sum += (1.5 * tau + 0.02 * x * x * x) / std::pow(1.03, tau);
    }
    CHECK(std::abs(estimate_scc(w, exact, ms, 2, 2).value.to_double() - sum) < 2e-6);
}

TEST_CASE("estimate errors") {
    DamageWorld w;
    w.a2 = 1.0;
    w.horizon_T = 5;
    std::vector<MeasuredDamage> partial{{0, 0, Money{}}, {0, 2, Money::units(2)}};
    try {
        estimate_scc(w, EstimatorModel{}, partial, 0, 2);
        FAIL("expected data gap");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::data_gap);
    }
    CHECK_THROWS_AS(true_scc_oracle(w, partial, 0), Error);
    CHECK_THROWS_AS(estimate_scc(w, EstimatorModel{}, partial, 3, 2), Error);
}

TEST_CASE("adjustments") {
    CHECK(compute_adjustment(est(0, 0, "50"), est(0, 1, "50")).delta == Money{});
    CHECK(compute_adjustment(est(0, 0, "50"), est(0, 1, "57.5")).delta == Money::parse("7.5"));

    const char* values[] = {"100", "110", "105", "107"};
    const char* expected[] = {"10", "-5", "2"};
    Money running = Money::parse(values[0]);
    for (int i = 0; i < 3; ++i) {
        const auto a = compute_adjustment(est(4, 4 + i, values[i]), est(4, 5 + i, values[i + 1]));
        CHECK(a.delta == Money::parse(expected[i]));
        CHECK(a.period == 5 + i);
        running += a.delta;
    }
    CHECK(running == Money::units(107));

    for (auto [prev, curr] : {std::pair{est(0, 1, "1"), est(1, 2, "1")}, std::pair{est(0, 1, "1"), est(0, 3, "1")}}) {
        try {
            compute_adjustment(prev, curr);
            FAIL("expected sequencing error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::sequencing);
        }
    }
}

TEST_CASE("estimate table and releases") {
    EstimateTable table;
    for (Year t = 0; t <= 5; ++t) {
        for (Year v = 0; v <= t; ++v) table.record(SccEstimate{v, t, Money::units(10 * v + t)});
    }
    const auto r0 = retro_agency_release(table, 5, 0);
    REQUIRE(r0.estimates.size() == 1);
    CHECK(r0.estimates[0].vintage == 5);

    const auto r2 = retro_agency_release(table, 5, 2);
    REQUIRE(r2.estimates.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(r2.estimates[i].vintage == 5 - i);
        CHECK(r2.estimates[i].eval_time == 5);
        CHECK(r2.estimates[i].value == Money::units(10 * (5 - i) + 5));
    }
    try {
        retro_agency_release(table, 5, 7);
        FAIL("expected window error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::window);
    }
    CHECK(table.adjustment(2, 4).delta == Money::units(1));
    CHECK_THROWS_AS(table.at(4, 6), Error);
    CHECK_THROWS_AS(table.record(SccEstimate{0, 7, Money{}}), Error);

    std::ostringstream csv;
    table.write_csv(csv);
    CHECK(csv.str().rfind("vintage,eval_time,value\n0,0,0.000000\n", 0) == 0);
}

TEST_CASE("running estimates match direct evaluation") {
    DamageWorld w;
    w.a2 = 2.0;
    w.a4 = 0.05;
    w.onset_delay = 4;
    w.sigma = 1.5;
    w.horizon_T = 25;
    w.discount_r = 0.02;
    EstimatorModel m{1.7, 0.0, 0.3};
    MeasurementHistory h(w);
    ForecastBasis basis(w);
    const auto ms = draw_all(w, 11);
    for (const auto& x : ms) h.record(x);
    for (Year v = 0; v <= 25; v += 3) {
        for (Year t = v; t <= 25; ++t) {
            const auto direct = estimate_scc(w, m, ms, v, t).value;
            CHECK(abs(model_estimate(h, basis, m, v, t) - direct) <= Money::from_micro(1));
        }
    }
}

TEST_CASE("agency telescopes to the oracle and misspecification underestimates") {
    DamageWorld w;
    w.a2 = 1.0;
    w.a4 = 0.01;
    w.onset_delay = 5;
    w.sigma = 0.5;
    w.horizon_T = 30;
    w.discount_r = 0.02;
    MeasurementHistory h(w);
    DamageStreams streams(w, 5);
    RetroAgency agency(h, EstimatorModel{1.0, 0.0}, InnovationSchedule{}, 30);
    for (Year t = 0; t <= w.horizon_T; ++t) {
        for (Year v = 0; v <= t; ++v) h.record(streams.draw(v, t));
        agency.advance(t);
    }
    const auto all = h.flatten();
    for (Year v = 0; v <= 10; ++v) {
        Money sum = agency.table().at(v, v);
        for (Year t = v + 1; t <= w.horizon_T; ++t) sum += agency.table().adjustment(v, t).delta;
        CHECK(sum == true_scc_oracle(w, all, v));
    }

    // Noise-free comparison of the two mean curves for vintage 0.
    double believed = 0.0, truth = 0.0;
    for (int tau = 0; tau <= 30; ++tau) {
        const double x = std::max(0.0, tau - 5.0);
        believed += tau / std::pow(1.02, tau);
        truth += (tau + 0.01 * x * x * x) / std::pow(1.02, tau);
    }
    CHECK(truth > believed);
    w.sigma = 0.0;
    MeasurementHistory h0(w);
    DamageStreams s0(w, 5);
    RetroAgency a0(h0, EstimatorModel{1.0, 0.0}, InnovationSchedule{}, 30);
    for (Year t = 0; t <= w.horizon_T; ++t) {
        for (Year v = 0; v <= t; ++v) h0.record(s0.draw(v, t));
        a0.advance(t);
    }
    CHECK(true_scc_oracle(w, h0.flatten(), 0) > a0.table().at(0, 0));
    CHECK(std::abs(a0.table().at(0, 0).to_double() - believed) < 1e-5);
    CHECK(std::abs(true_scc_oracle(w, h0.flatten(), 0).to_double() - truth) < 1e-4);
}

TEST_CASE("agency release window and adjustment feed") {
    DamageWorld w;
    w.a2 = 1.0;
    w.horizon_T = 10;
    MeasurementHistory h(w);
    DamageStreams streams(w, 1);
    RetroAgency agency(h, EstimatorModel{0.5}, InnovationSchedule{2, 0.25}, 3);
    std::vector<RetroAgencyRelease> releases;
    for (Year t = 0; t <= 6; ++t) {
        for (Year v = 0; v <= t; ++v) h.record(streams.draw(v, t));
        agency.advance(t);
        releases.push_back(agency.release(t));
    }
    CHECK(releases[1].estimates.size() == 2);
    CHECK(releases[6].estimates.size() == 4);
    CHECK(agency.model().anneal_alpha == doctest::Approx(1.0));

    AdjustmentFeed feed(releases[6], &releases[5]);
    CHECK(feed.initial() == agency.table().at(6, 6));
    CHECK(feed.delta(4) == agency.table().adjustment(4, 6).delta);
    CHECK(feed.covers(3));
    CHECK_FALSE(feed.covers(2));
    try {
        feed.delta(2);
        FAIL("expected coverage error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::agency_coverage);
    }
    CHECK_THROWS_AS(AdjustmentFeed(releases[6], &releases[4]), Error);
}
