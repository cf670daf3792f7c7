#include "retrocarbon/exchange.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>

namespace retrocarbon {

CreditId CreditRegistry::issue(const std::string& supplier_id, bool breakthrough) {
    CarbonCredit c;
    c.id = credits_.size() + 1;
    c.supplier_id = supplier_id;
    c.is_breakthrough = breakthrough;
    credits_.push_back(std::move(c));
    return credits_.back().id;
}

void CreditRegistry::convert(CreditId id, const std::string& insurer_id, Year t) {
    if (!contains(id)) throw Error(ErrorCode::lifecycle, "unknown credit " + std::to_string(id));
    auto& c = credits_[id - 1];
    if (c.status == CreditStatus::icc) throw Error(ErrorCode::lifecycle, "credit " + std::to_string(id) + " is already insured");
    c.status = CreditStatus::icc;
    c.attached_insurer = insurer_id;
    c.conversion_time = t;
}

const CarbonCredit& CreditRegistry::at(CreditId id) const {
    if (!contains(id)) throw Error(ErrorCode::lifecycle, "unknown credit " + std::to_string(id));
    return credits_[id - 1];
}

namespace {
constexpr const char* side_names[] = {"supplier-ask", "buyer-bid", "premium-ask"};
}

const char* to_string(OrderSide s) { return side_names[static_cast<std::size_t>(s)]; }

std::optional<OrderSide> parse_order_side(std::string_view text) {
    for (std::size_t i = 0; i < std::size(side_names); ++i) {
        if (text == side_names[i]) return static_cast<OrderSide>(i);
    }
    return std::nullopt;
}

std::uint64_t OrderBook::post(Order order) {
    if (order.price.is_negative()) throw Error(ErrorCode::domain, "order price must be >= 0");
    if (order.volume <= 0) throw Error(ErrorCode::domain, "order volume must be > 0");
    if (order.seq == 0) {
        order.seq = last_seq_ + 1;
    } else if (order.seq <= last_seq_) {
        throw Error(ErrorCode::sequencing, "order seq " + std::to_string(order.seq) + " is not increasing");
    }
    switch (order.side) {
        case OrderSide::buyer_bid:
            if (order.target_credit) {
                const auto& c = registry_->at(*order.target_credit);
                if (c.status != CreditStatus::icc) {
                    throw Error(ErrorCode::purchasability, "credit " + std::to_string(c.id) + " is uninsured");
                }
            }
            break;
        case OrderSide::supplier_ask:
            if (order.credits.size() != static_cast<std::size_t>(order.volume)) {
                throw Error(ErrorCode::domain, "supplier ask must list one credit per unit");
            }
            for (CreditId id : order.credits) {
                if (registry_->at(id).supplier_id != order.agent_id) {
                    throw Error(ErrorCode::domain, "credit " + std::to_string(id) + " not held by " + order.agent_id);
                }
            }
            break;
        case OrderSide::premium_ask:
            break;
    }
    last_seq_ = order.seq;
    orders_.push_back(std::move(order));
    return last_seq_;
}

namespace {

struct SupplyUnit {
    std::size_t ask_order = 0;
    std::optional<std::size_t> premium_order;
    CreditId credit = 0;
    Money ask;
    Money premium;
    Money effective;
    bool breakthrough = false;
    bool used = false;
};

struct PremiumUnit {
    std::size_t order = 0;
    Money price;
};

}  // namespace

ClearingResult clear_auction(const OrderBook& book, Year t, const ClearingParams& params, ContractId first_contract_id) {
    if (params.breakthrough_quota < 0.0 || params.breakthrough_quota > 1.0) {
        throw Error(ErrorCode::domain, "breakthrough quota must be in [0, 1]");
    }
    const auto orders = book.orders();
    const auto& registry = book.registry();
    auto by_price_seq = [&](std::size_t a, std::size_t b) {
        if (orders[a].price != orders[b].price) return orders[a].price < orders[b].price;
        return orders[a].seq < orders[b].seq;
    };

    std::vector<std::size_t> asks, premia, bids;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        switch (orders[i].side) {
            case OrderSide::supplier_ask: asks.push_back(i); break;
            case OrderSide::premium_ask: premia.push_back(i); break;
            case OrderSide::buyer_bid: bids.push_back(i); break;
        }
    }
    std::sort(asks.begin(), asks.end(), by_price_seq);
    std::sort(premia.begin(), premia.end(), by_price_seq);
    std::stable_sort(bids.begin(), bids.end(), [&](std::size_t a, std::size_t b) {
        if (orders[a].price != orders[b].price) return orders[a].price > orders[b].price;
        return orders[a].seq < orders[b].seq;
    });

    std::vector<PremiumUnit> premium_units;
    for (std::size_t i : premia) {
        for (std::int64_t k = 0; k < orders[i].volume; ++k) premium_units.push_back({i, orders[i].price});
    }

    // UICC units take premium units in order; ICC units need none.
    std::vector<SupplyUnit> units;
    std::size_t next_premium = 0;
    for (std::size_t i : asks) {
        for (CreditId id : orders[i].credits) {
            const auto& credit = registry.at(id);
            SupplyUnit u;
            u.ask_order = i;
            u.credit = id;
            u.ask = orders[i].price;
            u.breakthrough = credit.is_breakthrough;
            if (credit.status == CreditStatus::uicc) {
                if (next_premium == premium_units.size()) continue;
                const auto& p = premium_units[next_premium];
                if (u.breakthrough && u.ask + p.price > params.scc_cap) continue;
                u.premium_order = p.order;
                u.premium = p.price;
                ++next_premium;
            } else if (u.breakthrough && u.ask > params.scc_cap) {
                continue;
            }
            u.effective = u.ask + u.premium;
            units.push_back(u);
        }
    }
    std::stable_sort(units.begin(), units.end(), [&](const SupplyUnit& a, const SupplyUnit& b) {
        if (a.effective != b.effective) return a.effective < b.effective;
        return orders[a.ask_order].seq < orders[b.ask_order].seq;
    });

    struct Basket {
        std::int64_t size = 0;
        std::int64_t breakthrough = 0;
        bool blocked = false;
    };
    std::map<std::string, Basket> baskets;
    std::vector<std::int64_t> filled(orders.size(), 0);
    std::vector<bool> order_blocked(orders.size(), false);

    ClearingResult out;
    ContractId next_id = first_contract_id;
    constexpr double eps = 1e-9;
    for (std::size_t bi : bids) {
        const Order& bid = orders[bi];
        auto& basket = baskets[bid.agent_id];
        bool stop = false;
        for (std::int64_t k = 0; k < bid.volume && !basket.blocked && !order_blocked[bi]; ++k) {
            const auto need = static_cast<std::int64_t>(std::ceil(params.breakthrough_quota * static_cast<double>(basket.size + 1) - eps));
            const bool forced = need > basket.breakthrough;
            SupplyUnit* pick = nullptr;
            for (auto& u : units) {
                if (u.used) continue;
                if (bid.target_credit && u.credit != *bid.target_credit) continue;
                if (forced && !u.breakthrough) continue;
                pick = &u;
                break;
            }
            if (pick == nullptr || pick->effective > bid.price) {
                if (forced) {
                    basket.blocked = true;
                } else if (bid.target_credit) {
                    order_blocked[bi] = true;
                } else {
                    stop = true;
                }
                break;
            }
            pick->used = true;
            ++basket.size;
            if (pick->breakthrough) ++basket.breakthrough;
            ++filled[bi];
            ++filled[pick->ask_order];
            if (pick->premium_order) ++filled[*pick->premium_order];

            const Order& ask = orders[pick->ask_order];
            Trade tr;
            tr.buyer_id = bid.agent_id;
            tr.supplier_id = ask.agent_id;
            tr.credit = pick->credit;
            tr.price = pick->effective;
            tr.ask = pick->ask;
            tr.premium = pick->premium;
            tr.breakthrough = pick->breakthrough;
            tr.bid_seq = bid.seq;
            tr.ask_seq = ask.seq;
            if (pick->premium_order) {
                const Order& p = orders[*pick->premium_order];
                tr.insurer_id = p.agent_id;
                tr.premium_seq = p.seq;
                SwapContract c;
                c.id = next_id++;
                c.insurer_id = p.agent_id;
                c.counterparty = Counterparty::exchange;
                c.vintage = t;
                c.tonnes = 1;
                c.premium = pick->premium;
                c.cap_horizon = params.cap_horizon;
                out.swaps.push_back(c);
                if (!out.marginal_premium || *out.marginal_premium < pick->premium) out.marginal_premium = pick->premium;
            }
            out.surplus += bid.price - tr.price;
            out.trades.push_back(std::move(tr));
        }
        if (stop) break;
    }

    for (std::size_t i = 0; i < orders.size(); ++i) {
        const std::int64_t residual = orders[i].volume - filled[i];
        if (residual > 0) out.unmatched.push_back({orders[i].seq, orders[i].side, orders[i].agent_id, orders[i].price, residual});
    }
    return out;
}

SettlementReport apply_clearing(Year t, const ClearingResult& result, CreditRegistry& registry, Ledger& ledger,
                                InsurerRegistry& insurers, std::vector<SwapContract>& contracts) {
    SettlementReport report;
    auto post = [&](const std::string& payer, const std::string& payee, Money amount, Reason reason,
                    std::optional<ContractId> contract) {
        if (amount.is_zero()) return;
        ledger.post(t, ledger.at(payer), ledger.at(payee), amount, reason);
        report.lines.push_back(SettlementLine{t, payer, payee, amount, contract, reason, t});
    };
    std::size_t swap = 0;
    for (const auto& tr : result.trades) {
        const std::string buyer = accounts::polluter(tr.buyer_id);
        post(buyer, accounts::supplier(tr.supplier_id), tr.ask, Reason::trade, std::nullopt);
        if (!tr.insurer_id) continue;
        const SwapContract& c = result.swaps.at(swap++);
        registry.convert(tr.credit, *tr.insurer_id, t);
        post(buyer, accounts::insurer(*tr.insurer_id), tr.premium, Reason::premium, c.id);
        auto& state = insurers.at(*tr.insurer_id);
        state.premiums_received += tr.premium;
        state.tonnes_insured += c.tonnes;
        contracts.push_back(c);
    }
    return report;
}

Money default_fund(const Ledger& ledger, const std::string& insurer_id) {
    return ledger.balance(ledger.at(accounts::reserve(insurer_id)));
}

Money exchange_cash(const Ledger& ledger) { return ledger.balance(ledger.at(accounts::exchange)); }

SettlementReport settle_exchange_swaps(Year t, std::vector<SwapContract>& contracts, const AdjustmentFeed& feed,
                                       ExchangeRiskState& risk, Ledger& ledger, InsurerRegistry& insurers) {
    SettlementReport report;
    for (auto& c : contracts) {
        if (c.counterparty != Counterparty::exchange || c.status != ContractStatus::active || c.vintage >= t) continue;
        settle_swap(t, c, feed, ledger, insurers, risk.adjustment_floor, report);
    }
    if (exchange_cash(ledger).is_negative()) {
        ++report.exchange_default_events;
        ++risk.exchange_default_events;
    }
    return report;
}

RoundHistory round_history(const OrderBook& book, const ClearingResult& result) {
    RoundHistory h;
    for (const auto& o : book.orders()) {
        if (o.side == OrderSide::premium_ask) h.asks.push_back({o.price, o.volume});
    }
    for (const auto& tr : result.trades) {
        if (tr.insurer_id) h.winners.push_back({tr.premium, 1});
    }
    return h;
}

SccSignal extract_scc_signal(const RoundHistory& round, Year t) {
    SccSignal s;
    s.time = t;
    s.from_trades = !round.winners.empty();
    std::vector<PremiumObservation> obs = s.from_trades ? round.winners : round.asks;
    std::erase_if(obs, [](const PremiumObservation& o) { return o.volume <= 0; });
    if (obs.empty()) return s;
    std::stable_sort(obs.begin(), obs.end(), [](const auto& a, const auto& b) { return a.premium < b.premium; });
    std::int64_t total = 0;
    for (const auto& o : obs) total += o.volume;
    std::int64_t cumulative = 0;
    for (const auto& o : obs) {
        cumulative += o.volume;
        if (2 * cumulative >= total) {
            s.value = o.premium;
            break;
        }
    }
    s.sample_count = total;
    return s;
}

namespace {

using nlohmann::json;

json order_json(const UnmatchedOrder& o) {
    return json{{"side", to_string(o.side)}, {"agent_id", o.agent_id}, {"price_micro", o.price.micro()},
                {"volume", o.volume}, {"seq", o.seq}};
}

}  // namespace

std::string clear_round_json(const std::string& input) {
    json in;
    try {
        in = json::parse(input);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::config, std::string("round JSON: ") + e.what());
    }
    try {
        const Year t = in.value("time", 0);
        ClearingParams params;
        params.breakthrough_quota = in.value("breakthrough_quota", 0.0);
        params.scc_cap = Money::from_micro(in.value("scc_cap_micro", Money::units(100).micro()));
        params.cap_horizon = in.value("cap_horizon", 30);

        CreditRegistry registry;
        std::vector<Order> orders;
        for (const auto& jo : in.at("orders")) {
            Order o;
            const auto side = parse_order_side(jo.at("side").get<std::string>());
            if (!side) throw Error(ErrorCode::config, "unknown order side " + jo.at("side").dump());
            o.side = *side;
            o.agent_id = jo.at("agent_id").get<std::string>();
            o.price = Money::from_micro(jo.at("price_micro").get<std::int64_t>());
            o.volume = jo.at("volume").get<std::int64_t>();
            o.seq = jo.value("seq", std::uint64_t{0});
            if (o.side == OrderSide::supplier_ask) {
                const bool bt = jo.value("breakthrough", false);
                const bool insured = jo.value("insured", false);
                for (std::int64_t k = 0; k < o.volume; ++k) {
                    const CreditId id = registry.issue(o.agent_id, bt);
                    if (insured) registry.convert(id, jo.value("attached_insurer", std::string("unknown")), t);
                    o.credits.push_back(id);
                }
            }
            if (jo.contains("credit_id")) o.target_credit = jo.at("credit_id").get<CreditId>();
            orders.push_back(std::move(o));
        }
        OrderBook book(registry);
        for (auto& o : orders) book.post(std::move(o));

        const ClearingResult result = clear_auction(book, t, params);
        json out;
        out["time"] = t;
        out["trades"] = json::array();
        for (const auto& tr : result.trades) {
            json j{{"buyer_id", tr.buyer_id}, {"supplier_id", tr.supplier_id}, {"credit_id", tr.credit},
                   {"price_micro", tr.price.micro()}, {"ask_micro", tr.ask.micro()},
                   {"premium_micro", tr.premium.micro()}, {"breakthrough", tr.breakthrough},
                   {"bid_seq", tr.bid_seq}, {"ask_seq", tr.ask_seq}};
            if (tr.insurer_id) j["insurer_id"] = *tr.insurer_id;
            if (tr.premium_seq) j["premium_seq"] = *tr.premium_seq;
            out["trades"].push_back(std::move(j));
        }
        out["swaps"] = json::array();
        for (const auto& c : result.swaps) {
            out["swaps"].push_back({{"id", c.id}, {"insurer_id", c.insurer_id}, {"vintage", c.vintage},
                                    {"tonnes", c.tonnes}, {"premium_micro", c.premium.micro()},
                                    {"cap_horizon", c.cap_horizon}});
        }
        out["unmatched"] = json::array();
        for (const auto& u : result.unmatched) out["unmatched"].push_back(order_json(u));
        out["surplus_micro"] = result.surplus.micro();
        const SccSignal signal = extract_scc_signal(round_history(book, result), t);
        out["signal"] = {{"time", signal.time}, {"sample_count", signal.sample_count}, {"from_trades", signal.from_trades}};
        out["signal"]["value_micro"] = signal.value ? json(signal.value->micro()) : json(nullptr);
        return out.dump(2);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::config, std::string("round JSON: ") + e.what());
    }
}

}  // namespace retrocarbon
