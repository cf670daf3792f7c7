#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "retrocarbon/damage_world.hpp"
#include "retrocarbon/ledger.hpp"
#include "retrocarbon/money.hpp"
#include "retrocarbon/scc_estimation.hpp"

namespace retrocarbon {

// Account naming shared by every mechanism.
namespace accounts {
inline constexpr const char* government = "government";
inline constexpr const char* exchange = "exchange";
inline constexpr const char* shortfall_sink = "sink:shortfall";
inline constexpr const char* loss_sink = "sink:bailout-loss";
inline std::string polluter(const std::string& id) { return "polluter:" + id; }
inline std::string insurer(const std::string& id) { return "insurer:" + id; }
inline std::string reserve(const std::string& id) { return "reserve:" + id; }
inline std::string supplier(const std::string& id) { return "supplier:" + id; }
inline std::string polluter_reserve(const std::string& id) { return "pollution-reserve:" + id; }
}  // namespace accounts

using ContractId = std::uint64_t;

struct EmissionVintage {
    std::string polluter_id;
    Year vintage = 0;
    std::int64_t tonnes = 0;
};

enum class Counterparty { government, exchange };
enum class ContractStatus { active, matured, defaulted };

const char* to_string(ContractStatus s);

struct SwapContract {
    ContractId id = 0;
    std::string insurer_id;
    Counterparty counterparty = Counterparty::government;
    Year vintage = 0;
    std::int64_t tonnes = 0;
    Money premium;  // per tonne, paid once
    std::int32_t cap_horizon = 30;
    ContractStatus status = ContractStatus::active;
    Money cumulative_delta;    // raw per-tonne adjustments seen so far
    Money settled_cumulative;  // per-tonne adjustments actually settled (after any floor)
};

struct PremiumQuote {
    std::string insurer_id;
    Year vintage = 0;
    Money premium;  // per tonne
    std::int64_t volume = 0;
    std::uint64_t posted_at = 0;
};

// Step function volume(price). Steps are (threshold, volume): the volume of the
// last step whose threshold is <= price, or zero below the first step.
class StepCurve {
public:
    StepCurve() = default;
    explicit StepCurve(std::vector<std::pair<Money, std::int64_t>> steps);
    std::int64_t volume_at(Money price) const;
    const std::vector<std::pair<Money, std::int64_t>>& steps() const { return steps_; }
    bool non_decreasing() const;
    bool non_increasing() const;
    friend bool operator==(const StepCurve&, const StepCurve&) = default;

private:
    std::vector<std::pair<Money, std::int64_t>> steps_;
};

struct InsurerPolicy {
    std::string id;
    EstimatorModel model;
    InnovationSchedule innovation;
    Money cost_margin;
    Money profit_margin;
    StepCurve supply;  // volume offered vs premium received; non-decreasing
};

struct PolluterDemand {
    StepCurve demand;  // volume demanded vs total price; non-increasing
    double default_hazard = 0.0;
};

// Running underwriting record used for quoting and for metrics.
struct InsurerState {
    std::string id;
    bool defaulted = false;
    Money premiums_received;
    Money legs_paid;
    Money legs_received;
    std::int64_t tonnes_insured = 0;

    // Cumulative net underwriting loss per insured tonne, floored at zero.
    double loss_rate() const;
};

using InsurerRegistry = std::map<std::string, InsurerState>;
using BankruptSet = std::unordered_set<std::string>;

struct SettlementLine {
    Year time = 0;
    std::string payer;
    std::string payee;
    Money amount;
    std::optional<ContractId> contract;
    Reason reason = Reason::trade;
    std::optional<Year> vintage;
};

struct SettlementReport {
    std::vector<SettlementLine> lines;
    Money shortfall;           // signed unpaid adjustments of bankrupt polluters
    Money counterparty_loss;   // unpaid swap legs after cash and reserve
    std::vector<ContractId> defaulted_contracts;
    std::vector<std::string> defaulted_insurers;
    int exchange_default_events = 0;

    void append(SettlementReport&& other);
    // time, payer, payee, amount, contract_id, reason
    void write_csv(std::ostream& out) const;
};

// Open exposure of a polluter to future adjustments of one vintage.
struct Exposure {
    std::string polluter_id;
    Year vintage = 0;
    std::int64_t tonnes = 0;
};

// Idealized ReCaP for one year: every exposure with vintage < t and
// t - vintage <= adjustment_years settles delta * tonnes with the government,
// then each registration pays the new estimate and becomes an exposure.
// Bankrupt polluters settle nothing; the signed unpaid amount is posted to the
// shortfall sink. Exposures past their last adjustment year are removed.
SettlementReport idealized_recap_step(Year t, std::span<const EmissionVintage> registrations,
                                      std::vector<Exposure>& exposures, const AdjustmentFeed& feed, Ledger& ledger,
                                      const BankruptSet& bankrupt, std::int32_t adjustment_years);

struct Assignment {
    std::string polluter_id;
    std::string insurer_id;
    std::int64_t tonnes = 0;
    Money premium;
};

struct InsuredAuctionOutcome {
    std::vector<Assignment> assignments;
    std::vector<SwapContract> contracts;
    std::vector<EmissionVintage> unmet;
    Money premium_cost;
};

// Fills registrations in order from quotes sorted by premium, then posting
// order. Throws domain if there is no quote with positive volume.
InsuredAuctionOutcome insured_recap_auction(Year t, std::span<const EmissionVintage> registrations,
                                            std::span<const PremiumQuote> quotes, std::int32_t cap_horizon,
                                            ContractId& next_contract_id);

// Posts initial charges for every registration and premiums for the assigned
// tonnes; records premiums on the insurer states.
SettlementReport settle_insured_registrations(Year t, std::span<const EmissionVintage> registrations,
                                              const InsuredAuctionOutcome& outcome, const AdjustmentFeed& feed,
                                              Ledger& ledger, InsurerRegistry& insurers);

// Settles one leg of one contract. Throws lifecycle for non-active contracts.
void settle_swap(Year t, SwapContract& contract, const AdjustmentFeed& feed, Ledger& ledger,
                 InsurerRegistry& insurers, std::optional<Money> adjustment_floor, SettlementReport& report);

// Settles every active contract with vintage < t <= vintage + cap, in id
// order; contracts of an insurer that defaults are marked defaulted.
SettlementReport settle_swaps(Year t, std::vector<SwapContract>& contracts, const AdjustmentFeed& feed,
                              Ledger& ledger, InsurerRegistry& insurers);

// Insurer quote: own estimate minus the agency estimate, plus margins, plus
// solvency_k times the realised loss rate; floored at zero.
PremiumQuote quote_premium(const InsurerPolicy& policy, const InsurerState& state, Money own_estimate,
                           Money agency_estimate, Year vintage, double solvency_k, std::uint64_t posted_at);

SettlementReport baseline_fixed_tax(Year t, std::span<const EmissionVintage> registrations, Money tax_rate,
                                    Ledger& ledger);

// Yearly sector record used by the reserves baseline.
struct SectorHistory {
    std::vector<double> gdp;   // indexed by year
    std::vector<Money> fine;   // per-company average fine, indexed by year
};

Money baseline_reserves_for_pollution(Year t, const SectorHistory& sector, double reserve_rate, std::int32_t window_m);

// Moves only the difference between the requirement and what is posted.
SettlementReport rebalance_reserve(Year t, const std::string& polluter_id, Money requirement, Ledger& ledger);

struct RepoBid {
    std::string holder;
    Money bid;
};

// Holders whose bid is strictly below the hidden bound, in input order.
std::vector<RepoBid> baseline_vpdollar_auction(std::span<const RepoBid> holders, Money upper_bound);

}  // namespace retrocarbon
