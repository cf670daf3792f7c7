#include <doctest.h>

#include <algorithm>
#include <climits>

#include "retrocarbon/recap.hpp"

using namespace retrocarbon;

namespace {

// Release at t holding the given estimates for vintages t, t-1, ...
RetroAgencyRelease release(Year t, std::vector<Money> newest_first) {
    RetroAgencyRelease r{t, static_cast<std::int32_t>(newest_first.size()) - 1, {}};
    for (std::size_t i = 0; i < newest_first.size(); ++i) {
        r.estimates.push_back(SccEstimate{t - static_cast<Year>(i), t, newest_first[i]});
    }
    return r;
}

Money u(std::int64_t x) { return Money::units(x); }

Ledger recap_ledger() {
    Ledger l;
    l.open(accounts::government, "government");
    l.open(accounts::exchange, "exchange");
    l.open(accounts::shortfall_sink, "system");
    l.open(accounts::loss_sink, "system");
    l.open(accounts::polluter("p"), "p", u(1000));
    l.open(accounts::polluter("q"), "q", u(1000));
    l.open(accounts::insurer("A"), "A", u(100));
    l.open(accounts::reserve("A"), "A", u(50));
    l.open(accounts::insurer("B"), "B", u(100));
    l.open(accounts::reserve("B"), "B");
    return l;
}

Money bal(const Ledger& l, const std::string& id) { return l.balance(l.at(id)); }

// Minimal assignment cost of `demand` tonnes over (premium, volume) quotes, by
// enumerating how many tonnes each quote fills.
std::int64_t brute_force_cost(const std::vector<std::pair<std::int64_t, std::int64_t>>& quotes, std::int64_t demand) {
    std::int64_t best = LLONG_MAX;
    for (std::int64_t a = 0; a <= quotes[0].second; ++a) {
        for (std::int64_t b = 0; b <= quotes[1].second; ++b) {
            if (a + b != demand) continue;
            best = std::min(best, a * quotes[0].first + b * quotes[1].first);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("step curves") {
    StepCurve s({{u(10), 5}, {u(0), 1}, {u(20), 9}});
    CHECK(s.volume_at(Money::parse("-1")) == 0);
    CHECK(s.volume_at(u(0)) == 1);
    CHECK(s.volume_at(Money::parse("19.999999")) == 5);
    CHECK(s.volume_at(u(500)) == 9);
    CHECK(s.non_decreasing());
    CHECK_FALSE(s.non_increasing());
}

TEST_CASE("insured auction picks the lowest premium, then the earliest quote") {
    ContractId next = 1;
    const std::vector<EmissionVintage> one{{"p", 3, 1}};
    std::vector<PremiumQuote> quotes{{"B", 3, u(7), 10, 1}, {"A", 3, u(5), 10, 2}};
    auto out = insured_recap_auction(3, one, quotes, 30, next);
    REQUIRE(out.assignments.size() == 1);
    CHECK(out.assignments[0].insurer_id == "A");

    const std::vector<EmissionVintage> ten{{"p", 3, 10}};
    quotes = {{"B", 3, u(5), 10, 2}, {"A", 3, u(5), 10, 1}};
    out = insured_recap_auction(3, ten, quotes, 30, next);
    REQUIRE(out.assignments.size() == 1);
    CHECK(out.assignments[0].insurer_id == "A");
    CHECK(out.assignments[0].tonnes == 10);
    CHECK(out.contracts[0].counterparty == Counterparty::government);
    CHECK(out.contracts[0].id == 2);

    quotes = {{"A", 3, u(5), 6, 1}, {"B", 3, u(7), 10, 2}};
    out = insured_recap_auction(3, ten, quotes, 30, next);
    REQUIRE(out.assignments.size() == 2);
    CHECK(out.assignments[0].tonnes == 6);
    CHECK(out.assignments[1].tonnes == 4);
    const std::int64_t oracle = brute_force_cost({{5, 6}, {7, 10}}, 10);
    CHECK(oracle == 58);
    CHECK(out.premium_cost == u(oracle));
    CHECK(out.unmet.empty());
}

TEST_CASE("insured auction reports unmet volume and needs a quote") {
    ContractId next = 1;
    const std::vector<EmissionVintage> regs{{"p", 0, 4}, {"q", 0, 3}};
    std::vector<PremiumQuote> quotes{{"A", 0, u(1), 5, 1}};
    auto out = insured_recap_auction(0, regs, quotes, 30, next);
    REQUIRE(out.unmet.size() == 1);
    CHECK(out.unmet[0].polluter_id == "q");
    CHECK(out.unmet[0].tonnes == 2);
    quotes[0].volume = 0;
    CHECK_THROWS_AS(insured_recap_auction(0, regs, quotes, 30, next), Error);
    const std::vector<EmissionVintage> stale{{"p", 1, 4}};
    quotes[0].volume = 5;
    CHECK_THROWS_AS(insured_recap_auction(0, stale, quotes, 30, next), Error);
}

TEST_CASE("polluter pays estimate plus premium once") {
    Ledger l = recap_ledger();
    InsurerRegistry ins{{"A", InsurerState{"A"}}};
    ContractId next = 1;
    const std::vector<EmissionVintage> regs{{"p", 0, 2}};
    const std::vector<PremiumQuote> quotes{{"A", 0, u(3), 10, 1}};
    const auto rel = release(0, {u(50)});
    AdjustmentFeed feed(rel, nullptr);
    const auto out = insured_recap_auction(0, regs, quotes, 30, next);
    settle_insured_registrations(0, regs, out, feed, l, ins);
    CHECK(bal(l, accounts::polluter("p")) == u(1000 - 106));
    CHECK(bal(l, accounts::insurer("A")) == u(106));
    CHECK(ins["A"].premiums_received == u(6));
    CHECK(ins["A"].tonnes_insured == 2);
    CHECK(audit(l).ok);
}

TEST_CASE("swap legs") {
    Ledger l = recap_ledger();
    InsurerRegistry ins{{"A", InsurerState{"A"}}, {"B", InsurerState{"B"}}};
    SwapContract c;
    c.id = 9;
    c.insurer_id = "A";
    c.vintage = 0;
    c.tonnes = 2;
    c.cap_horizon = 3;

    SUBCASE("zero adjustment moves nothing") {
        const auto r0 = release(0, {u(50)}), r1 = release(1, {u(60), u(50)});
        AdjustmentFeed feed(r1, &r0);
        SettlementReport rep;
        settle_swap(1, c, feed, l, ins, std::nullopt, rep);
        CHECK(l.entries().empty());
        CHECK(c.status == ContractStatus::active);
    }
    SUBCASE("negative adjustment is paid to the insurer") {
        const auto r0 = release(0, {u(50)}), r1 = release(1, {u(60), u(47)});
        AdjustmentFeed feed(r1, &r0);
        SettlementReport rep;
        settle_swap(1, c, feed, l, ins, std::nullopt, rep);
        CHECK(bal(l, accounts::insurer("A")) == u(106));
        CHECK(bal(l, accounts::government) == u(-6));
        CHECK(ins["A"].legs_received == u(6));
    }
    SUBCASE("cash, then reserve, then counterparty loss") {
        l.post(0, l.at(accounts::insurer("A")), l.at(accounts::government), u(96), Reason::trade);
        l.post(0, l.at(accounts::reserve("A")), l.at(accounts::government), u(45), Reason::trade);
        REQUIRE(bal(l, accounts::insurer("A")) == u(4));
        REQUIRE(bal(l, accounts::reserve("A")) == u(5));
        c.tonnes = 1;
        const auto r0 = release(0, {u(50)}), r1 = release(1, {u(60), u(60)});
        AdjustmentFeed feed(r1, &r0);
        SettlementReport rep;
        const Money gov_before = bal(l, accounts::government);
        settle_swap(1, c, feed, l, ins, std::nullopt, rep);
        CHECK(bal(l, accounts::insurer("A")) == Money{});
        CHECK(bal(l, accounts::reserve("A")) == Money{});
        CHECK(rep.counterparty_loss == u(1));
        CHECK(bal(l, accounts::government) - gov_before == u(10));
        CHECK(bal(l, accounts::loss_sink) == u(-1));
        CHECK(c.status == ContractStatus::defaulted);
        CHECK(ins["A"].defaulted);
        SettlementReport again;
        CHECK_THROWS_AS(settle_swap(2, c, feed, l, ins, std::nullopt, again), Error);
        CHECK(audit(l).ok);
    }
    SUBCASE("floor limits cumulative adjustments") {
        const auto r0 = release(0, {u(50)}), r1 = release(1, {u(60), u(40)});
        AdjustmentFeed feed(r1, &r0);
        SettlementReport rep;
        settle_swap(1, c, feed, l, ins, u(-4), rep);
        CHECK(c.cumulative_delta == u(-10));
        CHECK(c.settled_cumulative == u(-4));
        CHECK(bal(l, accounts::insurer("A")) == u(108));
    }
}

TEST_CASE("swap cash flows stop at the cap") {
    Ledger l = recap_ledger();
    InsurerRegistry ins{{"A", InsurerState{"A"}}};
    std::vector<SwapContract> cs(1);
    cs[0].id = 1;
    cs[0].insurer_id = "A";
    cs[0].vintage = 0;
    cs[0].tonnes = 1;
    cs[0].cap_horizon = 2;
    std::vector<RetroAgencyRelease> rel{release(0, {u(10)})};
    for (Year t = 1; t <= 5; ++t) {
        std::vector<Money> est;
        for (Year v = t; v >= 0; --v) est.push_back(u(10 + (v == 0 ? t : 0)));
        rel.push_back(release(t, est));
    }
    std::size_t flows_after_cap = 0;
    for (Year t = 1; t <= 5; ++t) {
        AdjustmentFeed feed(rel[t], &rel[t - 1]);
        const auto rep = settle_swaps(t, cs, feed, l, ins);
        for (const auto& line : rep.lines) flows_after_cap += line.time > 2;
    }
    CHECK(flows_after_cap == 0);
    CHECK(cs[0].status == ContractStatus::matured);
    CHECK(ins["A"].legs_paid == u(2));
}

TEST_CASE("idealized adjustments telescope and shortfall accrues") {
    std::vector<RetroAgencyRelease> rel{release(0, {u(100)}), release(1, {u(0), u(110)}), release(2, {u(0), u(0), u(105)}),
                                        release(3, {u(0), u(0), u(0), u(107)})};
    SUBCASE("solvent polluter") {
        Ledger l = recap_ledger();
        std::vector<Exposure> exposures;
        Money paid_after_initial;
        for (Year t = 0; t <= 3; ++t) {
            AdjustmentFeed feed(rel[t], t ? &rel[t - 1] : nullptr);
            std::vector<EmissionVintage> regs;
            if (t == 0) regs.push_back({"p", 0, 1});
            const auto rep = idealized_recap_step(t, regs, exposures, feed, l, {}, 30);
            for (const auto& line : rep.lines) {
                if (line.reason == Reason::adjustment) paid_after_initial += line.amount;
                if (line.reason == Reason::refund) paid_after_initial -= line.amount;
            }
        }
        CHECK(paid_after_initial == u(7));
        CHECK(bal(l, accounts::polluter("p")) == u(1000 - 107));
    }
    SUBCASE("bankrupt polluter") {
        Ledger l = recap_ledger();
        std::vector<Exposure> exposures{{"q", 0, 3}};
        const auto r1 = release(1, {u(0), u(100)}), r2 = release(2, {u(0), u(0), u(105)});
        AdjustmentFeed feed(r2, &r1);
        const auto rep = idealized_recap_step(2, {}, exposures, feed, l, BankruptSet{"q"}, 30);
        CHECK(rep.shortfall == u(15));
        CHECK(bal(l, accounts::polluter("q")) == u(1000));
        CHECK(bal(l, accounts::shortfall_sink) == u(-15));
    }
}

TEST_CASE("quotes") {
    InsurerPolicy pol{"A", {}, {}, u(1), u(2), StepCurve({{u(0), 4}, {u(10), 8}})};
    InsurerState st{"A"};
    auto q = quote_premium(pol, st, u(60), u(52), 3, 1.0, 5);
    CHECK(q.premium == u(11));
    CHECK(q.volume == 8);
    st.tonnes_insured = 2;
    st.legs_paid = u(10);
    CHECK(st.loss_rate() == doctest::Approx(5.0));
    CHECK(quote_premium(pol, st, u(60), u(52), 3, 1.0, 5).premium == u(16));
    CHECK(quote_premium(pol, InsurerState{"A"}, u(10), u(52), 3, 1.0, 5).premium == Money{});
}

TEST_CASE("fixed tax") {
    Ledger l = recap_ledger();
    const std::vector<EmissionVintage> regs{{"p", 4, 2}};
    baseline_fixed_tax(4, regs, Money{}, l);
    CHECK(l.entries().empty());
    baseline_fixed_tax(4, regs, u(40), l);
    CHECK(bal(l, accounts::government) == u(80));
}

TEST_CASE("reserves requirement") {
    auto loop = [](double r, const std::vector<double>& gdp, const std::vector<double>& fine, int t, int m) {
        double s = 0.0;
        for (int j = 1; j <= m; ++j) s += gdp[t] * fine[t - j] / gdp[t - j];
        return r * s / m;
    };
    SectorHistory flat{{1, 1, 1}, {u(10), u(20)}};
    CHECK(loop(0.5, {1, 1, 1}, {10, 20}, 2, 2) == 7.5);
    CHECK(baseline_reserves_for_pollution(2, flat, 0.5, 2) == Money::parse("7.5"));
    SectorHistory doubled{{1, 1, 2}, {u(10), u(10)}};
    CHECK(loop(1.0, {1, 1, 2}, {10, 10}, 2, 2) == 20.0);
    CHECK(baseline_reserves_for_pollution(2, doubled, 1.0, 2) == u(20));
    SectorHistory zero{{1, 1, 1}, {Money{}, Money{}}};
    CHECK(baseline_reserves_for_pollution(2, zero, 0.5, 2) == Money{});
    try {
        baseline_reserves_for_pollution(2, flat, 0.5, 3);
        FAIL("expected window error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::window);
    }
}

TEST_CASE("reserve rebalancing moves only the difference") {
    Ledger l = recap_ledger();
    l.open(accounts::polluter_reserve("p"), "p");
    rebalance_reserve(1, "p", u(10), l);
    rebalance_reserve(2, "p", u(12), l);
    rebalance_reserve(3, "p", u(7), l);
    CHECK(l.entries().size() == 3);
    CHECK(l.entries()[1].amount == u(2));
    CHECK(bal(l, accounts::polluter_reserve("p")) == u(7));
}

TEST_CASE("VPDollar repo acceptance") {
    const std::vector<RepoBid> bids{{"x", u(3)}, {"y", u(5)}, {"z", u(9)}};
    const auto acc = baseline_vpdollar_auction(bids, u(6));
    REQUIRE(acc.size() == 2);
    CHECK(acc[0].holder == "x");
    CHECK(acc[1].holder == "y");
    CHECK(baseline_vpdollar_auction(bids, u(3)).empty());
    CHECK(baseline_vpdollar_auction(std::vector<RepoBid>{{"w", u(6)}}, u(6)).empty());
    CHECK_THROWS_AS(baseline_vpdollar_auction(bids, Money{}), Error);
}
