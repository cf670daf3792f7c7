#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "retrocarbon/ledger.hpp"
#include "retrocarbon/money.hpp"
#include "retrocarbon/recap.hpp"

namespace retrocarbon {

using CreditId = std::uint64_t;

enum class CreditStatus { uicc, icc };

struct CarbonCredit {
    CreditId id = 0;
    std::string supplier_id;
    CreditStatus status = CreditStatus::uicc;
    std::optional<std::string> attached_insurer;
    bool is_breakthrough = false;
    std::optional<Year> conversion_time;
};

// Owns every credit ever issued. Conversion to ICC happens once.
class CreditRegistry {
public:
    CreditId issue(const std::string& supplier_id, bool breakthrough);
    void convert(CreditId id, const std::string& insurer_id, Year t);
    const CarbonCredit& at(CreditId id) const;
    bool contains(CreditId id) const { return id >= 1 && id <= credits_.size(); }
    std::span<const CarbonCredit> credits() const { return credits_; }

private:
    std::vector<CarbonCredit> credits_;
};

enum class OrderSide { supplier_ask, buyer_bid, premium_ask };

const char* to_string(OrderSide s);
std::optional<OrderSide> parse_order_side(std::string_view text);

struct Order {
    OrderSide side = OrderSide::buyer_bid;
    std::string agent_id;
    Money price;  // per credit
    std::int64_t volume = 0;
    std::uint64_t seq = 0;  // 0 = assign on posting
    // Supplier asks: the credits on offer, one per unit of volume.
    std::vector<CreditId> credits;
    // Buyer bids: optional specific credit wanted.
    std::optional<CreditId> target_credit;
};

// Append-only intake for one clearing round. Sequence numbers are strictly
// increasing; an explicit seq must exceed the last one.
class OrderBook {
public:
    explicit OrderBook(const CreditRegistry& registry) : registry_(&registry) {}

    std::uint64_t post(Order order);
    std::span<const Order> orders() const { return orders_; }
    std::size_t size() const { return orders_.size(); }
    const CreditRegistry& registry() const { return *registry_; }

private:
    const CreditRegistry* registry_;
    std::vector<Order> orders_;
    std::uint64_t last_seq_ = 0;
};

// One credit changing hands.
struct Trade {
    std::string buyer_id;
    std::string supplier_id;
    std::optional<std::string> insurer_id;  // set when a UICC was converted
    CreditId credit = 0;
    Money price;    // paid by the buyer: ask + premium
    Money ask;
    Money premium;
    bool breakthrough = false;
    std::uint64_t bid_seq = 0;
    std::uint64_t ask_seq = 0;
    std::optional<std::uint64_t> premium_seq;
};

struct ClearingParams {
    double breakthrough_quota = 0.0;
    Money scc_cap = Money::units(100);
    std::int32_t cap_horizon = 30;
};

struct UnmatchedOrder {
    std::uint64_t seq = 0;
    OrderSide side = OrderSide::buyer_bid;
    std::string agent_id;
    Money price;
    std::int64_t volume = 0;  // residual
};

struct ClearingResult {
    std::vector<Trade> trades;        // in execution order
    std::vector<SwapContract> swaps;  // one per converted credit
    std::vector<UnmatchedOrder> unmatched;
    Money surplus;                    // sum of bid - price over trades
    std::optional<Money> marginal_premium;  // highest premium that traded
};

// Sealed-bid clearing of a frozen book. UICC units are paired with premium
// units in price-time order to form effective asks; bid units in price-time
// order take the cheapest eligible effective ask while bid >= ask. A buyer
// whose basket would fall below the quota must take a breakthrough unit next
// or stops; breakthrough units priced above scc_cap never trade. Swaps are
// numbered from `first_contract_id` and have the exchange as counterparty.
ClearingResult clear_auction(const OrderBook& book, Year t, const ClearingParams& params,
                             ContractId first_contract_id = 1);

// Converts traded UICCs, posts buyer -> supplier and buyer -> insurer cash,
// records premiums on the insurer states and appends the swaps.
SettlementReport apply_clearing(Year t, const ClearingResult& result, CreditRegistry& registry, Ledger& ledger,
                                InsurerRegistry& insurers, std::vector<SwapContract>& contracts);

struct ExchangeRiskState {
    std::optional<Money> adjustment_floor;
    int exchange_default_events = 0;
};

Money default_fund(const Ledger& ledger, const std::string& insurer_id);
Money exchange_cash(const Ledger& ledger);

// settle_swaps for exchange contracts, with the optional floor on cumulative
// adjustments. Records an exchange-default event when exchange cash ends
// negative.
SettlementReport settle_exchange_swaps(Year t, std::vector<SwapContract>& contracts, const AdjustmentFeed& feed,
                                       ExchangeRiskState& risk, Ledger& ledger, InsurerRegistry& insurers);

struct PremiumObservation {
    Money premium;
    std::int64_t volume = 0;
};

struct RoundHistory {
    std::vector<PremiumObservation> asks;     // every premium ask posted
    std::vector<PremiumObservation> winners;  // premia that traded
};

RoundHistory round_history(const OrderBook& book, const ClearingResult& result);

struct SccSignal {
    Year time = 0;
    std::optional<Money> value;  // nullopt: no signal this round
    std::int64_t sample_count = 0;
    bool from_trades = false;
};

// Lower volume-weighted median of winning premia, or of all asks when
// nothing traded.
SccSignal extract_scc_signal(const RoundHistory& round, Year t);

// JSON round: {"time", "breakthrough_quota", "scc_cap_micro", "orders": [...]}
// with order fields side, agent_id, price_micro, volume, seq and, for supplier
// asks, optional breakthrough / insured / attached_insurer. Returns trades,
// swaps, unmatched orders and the signal as JSON text.
std::string clear_round_json(const std::string& input);

}  // namespace retrocarbon
