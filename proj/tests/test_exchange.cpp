#include <doctest.h>

#include <nlohmann/json.hpp>

#include "retrocarbon/exchange.hpp"

using namespace retrocarbon;

namespace {

Money u(std::int64_t x) { return Money::units(x); }

struct Round {
    CreditRegistry registry;
    OrderBook book{registry};

    std::uint64_t ask(const std::string& supplier, std::int64_t price, int n = 1, bool bt = false,
                      std::optional<std::string> insured = std::nullopt) {
        Order o{OrderSide::supplier_ask, supplier, u(price), n};
        for (int k = 0; k < n; ++k) {
            o.credits.push_back(registry.issue(supplier, bt));
            if (insured) registry.convert(o.credits.back(), *insured, 0);
        }
        return book.post(o);
    }
    std::uint64_t premium(const std::string& insurer, std::int64_t price, int n = 1) {
        return book.post(Order{OrderSide::premium_ask, insurer, u(price), n});
    }
    std::uint64_t bid(const std::string& buyer, std::int64_t price, int n = 1) {
        return book.post(Order{OrderSide::buyer_bid, buyer, u(price), n});
    }
};

}  // namespace

TEST_CASE("one bid, one UICC ask, one premium ask") {
    Round r;
    r.bid("b", 100);
    r.ask("s", 80);
    r.premium("A", 15);
    const auto out = clear_auction(r.book, 4, ClearingParams{});
    REQUIRE(out.trades.size() == 1);
    CHECK(out.trades[0].price == u(95));
    CHECK(out.trades[0].insurer_id == "A");
    REQUIRE(out.swaps.size() == 1);
    CHECK(out.swaps[0].counterparty == Counterparty::exchange);
    CHECK(out.swaps[0].cap_horizon == 30);
    CHECK(out.swaps[0].vintage == 4);
    CHECK(out.surplus == u(5));
    CHECK(out.unmatched.empty());
}

TEST_CASE("the lowest premium wins") {
    Round r;
    r.bid("b", 100);
    r.ask("s", 80);
    r.premium("A", 15);
    r.premium("B", 12);
    const auto out = clear_auction(r.book, 0, ClearingParams{});
    REQUIRE(out.trades.size() == 1);
    CHECK(out.trades[0].price == u(92));
    CHECK(out.trades[0].insurer_id == "B");
    REQUIRE(out.unmatched.size() == 1);
    CHECK(out.unmatched[0].agent_id == "A");
}

TEST_CASE("a bid below the effective ask leaves everything unmatched") {
    Round r;
    r.bid("b", 90);
    r.ask("s", 80);
    r.premium("A", 15);
    const auto out = clear_auction(r.book, 0, ClearingParams{});
    CHECK(out.trades.empty());
    CHECK(out.swaps.empty());
    CHECK(out.unmatched.size() == 3);
}

TEST_CASE("UICC asks without premium asks carry over; ICC resales clear directly") {
    Round r;
    r.bid("b", 100, 2);
    r.ask("s", 50);
    r.ask("t", 70, 1, false, std::string("Z"));
    const auto out = clear_auction(r.book, 0, ClearingParams{});
    REQUIRE(out.trades.size() == 1);
    CHECK(out.trades[0].supplier_id == "t");
    CHECK_FALSE(out.trades[0].insurer_id);
    CHECK(out.swaps.empty());
}

TEST_CASE("order intake") {
    Round r;
    CHECK(r.bid("b", 1) == 1);
    CHECK(r.book.size() == 1);
    CHECK_THROWS_AS(r.book.post(Order{OrderSide::buyer_bid, "b", u(1), 1, 1}), Error);
    CHECK_THROWS_AS(r.book.post(Order{OrderSide::buyer_bid, "b", u(-1), 1}), Error);
    CHECK_THROWS_AS(r.book.post(Order{OrderSide::buyer_bid, "b", u(1), 0}), Error);
    const CreditId uicc = r.registry.issue("s", false);
    Order targeted{OrderSide::buyer_bid, "b", u(5), 1};
    targeted.target_credit = uicc;
    try {
        r.book.post(targeted);
        FAIL("expected purchasability error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::purchasability);
    }
    Order foreign{OrderSide::supplier_ask, "x", u(5), 1};
    foreign.credits = {uicc};
    CHECK_THROWS_AS(r.book.post(foreign), Error);
    r.registry.convert(uicc, "A", 0);
    CHECK_THROWS_AS(r.registry.convert(uicc, "B", 1), Error);
    CHECK(r.registry.at(uicc).attached_insurer == "A");
}

TEST_CASE("breakthrough quota and cap") {
    SUBCASE("a ten-credit basket holds at least one breakthrough credit") {
        Round r;
        r.bid("b", 200, 10);
        r.ask("s", 10, 12);
        r.ask("bt", 60, 2, true);
        r.premium("A", 5, 20);
        const auto out = clear_auction(r.book, 0, ClearingParams{0.1, u(100)});
        REQUIRE(out.trades.size() == 10);
        int bt = 0;
        for (const auto& t : out.trades) {
            bt += t.breakthrough;
            if (t.breakthrough) CHECK(t.price <= u(100));
        }
        CHECK(bt >= 1);
    }
    SUBCASE("breakthrough credits above the cap never trade, so the buyer is blocked") {
        Round r;
        r.bid("b", 500, 10);
        r.ask("s", 10, 12);
        r.ask("bt", 98, 2, true);
        r.premium("A", 5, 20);
        const auto out = clear_auction(r.book, 0, ClearingParams{0.1, u(100)});
        CHECK(out.trades.empty());
    }
    SUBCASE("without a quota the cheapest units trade") {
        Round r;
        r.bid("b", 200, 10);
        r.ask("s", 10, 12);
        r.ask("bt", 60, 2, true);
        r.premium("A", 5, 20);
        const auto out = clear_auction(r.book, 0, ClearingParams{0.0, u(100)});
        REQUIRE(out.trades.size() == 10);
        for (const auto& t : out.trades) CHECK_FALSE(t.breakthrough);
    }
}

namespace {

struct ExchangeFixture {
    Ledger ledger;
    InsurerRegistry insurers{{"A", InsurerState{"A"}}};
    std::vector<SwapContract> contracts;
    std::vector<RetroAgencyRelease> releases;

    ExchangeFixture(Money insurer_cash, Money fund, std::vector<std::int64_t> estimates) {
        ledger.open(accounts::exchange, "exchange", u(1000));
        ledger.open(accounts::loss_sink, "system");
        ledger.open(accounts::insurer("A"), "A", insurer_cash);
        ledger.open(accounts::reserve("A"), "A", fund);
        for (Year t = 0; t < static_cast<Year>(estimates.size()); ++t) {
            RetroAgencyRelease r{t, t, {}};
            for (Year v = t; v >= 0; --v) r.estimates.push_back({v, t, u(v == 0 ? estimates[t] : 0)});
            releases.push_back(r);
        }
        SwapContract c;
        c.id = 1;
        c.insurer_id = "A";
        c.counterparty = Counterparty::exchange;
        c.tonnes = 1;
        contracts.push_back(c);
    }

    SettlementReport step(Year t, ExchangeRiskState& risk) {
        AdjustmentFeed feed(releases[t], &releases[t - 1]);
        return settle_exchange_swaps(t, contracts, feed, risk, ledger, insurers);
    }
};

}  // namespace

TEST_CASE("exchange swap settlement") {
    SUBCASE("a floor of zero absorbs negative cumulative adjustments") {
        ExchangeFixture f(u(10), u(0), {50, 43});
        ExchangeRiskState risk{Money{}};
        f.step(1, risk);
        CHECK(f.contracts[0].cumulative_delta == u(-7));
        CHECK(f.ledger.entries().empty());
    }
    SUBCASE("no floor matches plain swap settlement") {
        ExchangeFixture f(u(10), u(0), {50, 43, 48});
        ExchangeFixture g = f;
        ExchangeRiskState risk;
        for (Year t = 1; t <= 2; ++t) {
            const auto a = f.step(t, risk);
            AdjustmentFeed feed(g.releases[t], &g.releases[t - 1]);
            const auto b = settle_swaps(t, g.contracts, feed, g.ledger, g.insurers);
            REQUIRE(a.lines.size() == b.lines.size());
            for (std::size_t i = 0; i < a.lines.size(); ++i) CHECK(a.lines[i].amount == b.lines[i].amount);
        }
        CHECK(f.ledger.balance(f.ledger.at(accounts::insurer("A"))) == u(12));
    }
    SUBCASE("a fund that covers exactly leaves no loss") {
        ExchangeFixture f(u(0), u(10), {50, 60});
        ExchangeRiskState risk;
        const auto rep = f.step(1, risk);
        CHECK(default_fund(f.ledger, "A") == Money{});
        CHECK(rep.counterparty_loss == Money{});
        CHECK(f.contracts[0].status == ContractStatus::active);
        CHECK(exchange_cash(f.ledger) == u(1010));
        CHECK(risk.exchange_default_events == 0);
    }
    SUBCASE("negative exchange cash is a default event") {
        ExchangeFixture f(u(0), u(0), {50, -2000});
        ExchangeRiskState risk;
        f.step(1, risk);
        CHECK(exchange_cash(f.ledger).is_negative());
        CHECK(risk.exchange_default_events == 1);
    }
}

TEST_CASE("clearing cash flows") {
    Round r;
    r.bid("b", 100);
    r.ask("s", 80);
    r.premium("A", 15);
    const auto out = clear_auction(r.book, 2, ClearingParams{}, 7);
    Ledger l;
    l.open(accounts::polluter("b"), "b", u(100));
    l.open(accounts::supplier("s"), "s");
    l.open(accounts::insurer("A"), "A");
    InsurerRegistry ins{{"A", InsurerState{"A"}}};
    std::vector<SwapContract> cs;
    apply_clearing(2, out, r.registry, l, ins, cs);
    CHECK(l.balance(l.at(accounts::polluter("b"))) == u(5));
    CHECK(l.balance(l.at(accounts::supplier("s"))) == u(80));
    CHECK(l.balance(l.at(accounts::insurer("A"))) == u(15));
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].id == 7);
    const auto& credit = r.registry.at(out.trades[0].credit);
    CHECK(credit.status == CreditStatus::icc);
    CHECK(credit.attached_insurer == "A");
    CHECK(credit.conversion_time == 2);
}

TEST_CASE("signal") {
    CHECK(extract_scc_signal(RoundHistory{{}, {{u(12), 1}}}, 0).value == u(12));
    const auto s = extract_scc_signal(RoundHistory{{}, {{u(12), 1}, {u(20), 3}}}, 0);
    std::vector<std::int64_t> units{12, 20, 20, 20};
    CHECK(s.value == u(units[(units.size() - 1) / 2]));
    CHECK(s.sample_count == 4);
    const auto fallback = extract_scc_signal(RoundHistory{{{u(9), 2}, {u(30), 1}}, {}}, 3);
    CHECK(fallback.value == u(9));
    CHECK_FALSE(fallback.from_trades);
    CHECK_FALSE(extract_scc_signal(RoundHistory{}, 3).value);
}

TEST_CASE("JSON rounds") {
    const std::string in = R"({"time": 1, "orders": [
        {"side": "buyer-bid", "agent_id": "b", "price_micro": 100000000, "volume": 1, "seq": 1},
        {"side": "supplier-ask", "agent_id": "s", "price_micro": 80000000, "volume": 1, "seq": 2},
        {"side": "premium-ask", "agent_id": "A", "price_micro": 15000000, "volume": 1, "seq": 3}]})";
    const auto out = nlohmann::json::parse(clear_round_json(in));
    REQUIRE(out["trades"].size() == 1);
    CHECK(out["trades"][0]["price_micro"] == 95000000);
    CHECK(out["swaps"].size() == 1);
    CHECK(out["signal"]["value_micro"] == 15000000);
    CHECK_THROWS_AS(clear_round_json("{"), Error);
    CHECK_THROWS_AS(clear_round_json(R"({"orders": [{"side": "sideways", "agent_id": "x", "price_micro": 1, "volume": 1}]})"), Error);
}
