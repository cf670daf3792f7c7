#include "retrocarbon/recap.hpp"

#include <algorithm>
#include <ostream>

#include "csv.hpp"

namespace retrocarbon {

const char* to_string(ContractStatus s) {
    switch (s) {
        case ContractStatus::active: return "active";
        case ContractStatus::matured: return "matured";
        case ContractStatus::defaulted: return "defaulted";
    }
    return "unknown";
}

StepCurve::StepCurve(std::vector<std::pair<Money, std::int64_t>> steps) : steps_(std::move(steps)) {
    std::stable_sort(steps_.begin(), steps_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [price, volume] : steps_) {
        if (volume < 0) throw Error(ErrorCode::config, "step curve volumes must be >= 0");
    }
}

std::int64_t StepCurve::volume_at(Money price) const {
    std::int64_t volume = 0;
    for (const auto& [threshold, v] : steps_) {
        if (threshold > price) break;
        volume = v;
    }
    return volume;
}

bool StepCurve::non_decreasing() const {
    for (std::size_t i = 1; i < steps_.size(); ++i) {
        if (steps_[i].second < steps_[i - 1].second) return false;
    }
    return true;
}

bool StepCurve::non_increasing() const {
    for (std::size_t i = 1; i < steps_.size(); ++i) {
        if (steps_[i].second > steps_[i - 1].second) return false;
    }
    return true;
}

double InsurerState::loss_rate() const {
    if (tonnes_insured <= 0) return 0.0;
    const Money net = legs_paid - legs_received - premiums_received;
    if (!net.is_positive()) return 0.0;
    return net.to_double() / static_cast<double>(tonnes_insured);
}

void SettlementReport::append(SettlementReport&& other) {
    lines.insert(lines.end(), std::make_move_iterator(other.lines.begin()), std::make_move_iterator(other.lines.end()));
    shortfall += other.shortfall;
    counterparty_loss += other.counterparty_loss;
    defaulted_contracts.insert(defaulted_contracts.end(), other.defaulted_contracts.begin(), other.defaulted_contracts.end());
    defaulted_insurers.insert(defaulted_insurers.end(), other.defaulted_insurers.begin(), other.defaulted_insurers.end());
    exchange_default_events += other.exchange_default_events;
}

void SettlementReport::write_csv(std::ostream& out) const {
    out << "time,payer,payee,amount,contract_id,reason\n";
    for (const auto& l : lines) {
        out << l.time << ',' << csv::quote(l.payer) << ',' << csv::quote(l.payee) << ',' << l.amount.to_string() << ',';
        if (l.contract) out << *l.contract;
        out << ',' << to_string(l.reason) << '\n';
    }
}

namespace {

struct LineContext {
    std::optional<ContractId> contract;
    std::optional<Year> vintage;
};

// Posts a positive amount and records the matching report line.
void post_line(SettlementReport& report, Ledger& ledger, Year t, const std::string& payer, const std::string& payee,
               Money amount, Reason reason, LineContext ctx = {}) {
    if (amount.is_zero()) return;
    ledger.post(t, ledger.at(payer), ledger.at(payee), amount, reason);
    report.lines.push_back(SettlementLine{t, payer, payee, amount, ctx.contract, reason, ctx.vintage});
}

// Signed variant: negative amounts flow payee -> payer under `negative_reason`.
void transfer_line(SettlementReport& report, Ledger& ledger, Year t, const std::string& payer, const std::string& payee,
                   Money amount, Reason positive_reason, Reason negative_reason, LineContext ctx = {}) {
    if (amount.is_positive()) {
        post_line(report, ledger, t, payer, payee, amount, positive_reason, ctx);
    } else if (amount.is_negative()) {
        post_line(report, ledger, t, payee, payer, -amount, negative_reason, ctx);
    }
}

void check_registration(Year t, const EmissionVintage& r) {
    if (r.vintage != t) throw Error(ErrorCode::domain, "registration for vintage " + std::to_string(r.vintage) + " at t=" + std::to_string(t));
    if (r.tonnes <= 0) throw Error(ErrorCode::domain, "registered tonnes must be positive");
}

std::string counterparty_account(Counterparty c) {
    return c == Counterparty::government ? accounts::government : accounts::exchange;
}

}  // namespace

SettlementReport idealized_recap_step(Year t, std::span<const EmissionVintage> registrations,
                                      std::vector<Exposure>& exposures, const AdjustmentFeed& feed, Ledger& ledger,
                                      const BankruptSet& bankrupt, std::int32_t adjustment_years) {
    SettlementReport report;
    for (const auto& e : exposures) {
        if (e.vintage >= t || t - e.vintage > adjustment_years) continue;
        const Money amount = feed.delta(e.vintage) * e.tonnes;
        const LineContext ctx{std::nullopt, e.vintage};
        if (bankrupt.count(e.polluter_id)) {
            if (amount.is_zero()) continue;
            report.shortfall += amount;
            transfer_line(report, ledger, t, accounts::shortfall_sink, accounts::government, amount, Reason::shortfall,
                          Reason::shortfall, ctx);
            continue;
        }
        transfer_line(report, ledger, t, accounts::polluter(e.polluter_id), accounts::government, amount,
                      Reason::adjustment, Reason::refund, ctx);
    }
    std::erase_if(exposures, [&](const Exposure& e) { return e.vintage < t && t - e.vintage >= adjustment_years; });

    for (const auto& r : registrations) {
        check_registration(t, r);
        transfer_line(report, ledger, t, accounts::polluter(r.polluter_id), accounts::government,
                      feed.initial() * r.tonnes, Reason::initial_tax, Reason::refund, {std::nullopt, t});
        if (adjustment_years > 0) exposures.push_back(Exposure{r.polluter_id, t, r.tonnes});
    }
    return report;
}

InsuredAuctionOutcome insured_recap_auction(Year t, std::span<const EmissionVintage> registrations,
                                            std::span<const PremiumQuote> quotes, std::int32_t cap_horizon,
                                            ContractId& next_contract_id) {
    std::vector<PremiumQuote> book;
    for (const auto& q : quotes) {
        if (q.premium.is_negative()) throw Error(ErrorCode::domain, "negative premium quote");
        if (q.volume > 0) book.push_back(q);
    }
    if (book.empty()) throw Error(ErrorCode::domain, "insured auction needs at least one quote with positive volume");
    std::stable_sort(book.begin(), book.end(), [](const PremiumQuote& a, const PremiumQuote& b) {
        if (a.premium != b.premium) return a.premium < b.premium;
        return a.posted_at < b.posted_at;
    });

    InsuredAuctionOutcome out;
    std::size_t cursor = 0;
    for (const auto& r : registrations) {
        check_registration(t, r);
        std::int64_t need = r.tonnes;
        while (need > 0 && cursor < book.size()) {
            auto& q = book[cursor];
            const std::int64_t take = std::min(need, q.volume);
            out.assignments.push_back(Assignment{r.polluter_id, q.insurer_id, take, q.premium});
            SwapContract c;
            c.id = next_contract_id++;
            c.insurer_id = q.insurer_id;
            c.counterparty = Counterparty::government;
            c.vintage = t;
            c.tonnes = take;
            c.premium = q.premium;
            c.cap_horizon = cap_horizon;
            out.contracts.push_back(c);
            out.premium_cost += q.premium * take;
            need -= take;
            q.volume -= take;
            if (q.volume == 0) ++cursor;
        }
        if (need > 0) out.unmet.push_back(EmissionVintage{r.polluter_id, t, need});
    }
    return out;
}

SettlementReport settle_insured_registrations(Year t, std::span<const EmissionVintage> registrations,
                                              const InsuredAuctionOutcome& outcome, const AdjustmentFeed& feed,
                                              Ledger& ledger, InsurerRegistry& insurers) {
    SettlementReport report;
    for (const auto& r : registrations) {
        check_registration(t, r);
        transfer_line(report, ledger, t, accounts::polluter(r.polluter_id), accounts::government,
                      feed.initial() * r.tonnes, Reason::initial_tax, Reason::refund, {std::nullopt, t});
    }
    for (std::size_t i = 0; i < outcome.assignments.size(); ++i) {
        const auto& a = outcome.assignments[i];
        const Money amount = a.premium * a.tonnes;
        const ContractId id = outcome.contracts.at(i).id;
        post_line(report, ledger, t, accounts::polluter(a.polluter_id), accounts::insurer(a.insurer_id), amount,
                  Reason::premium, {id, t});
        auto& state = insurers.at(a.insurer_id);
        state.premiums_received += amount;
        state.tonnes_insured += a.tonnes;
    }
    return report;
}

void settle_swap(Year t, SwapContract& contract, const AdjustmentFeed& feed, Ledger& ledger,
                 InsurerRegistry& insurers, std::optional<Money> adjustment_floor, SettlementReport& report) {
    if (contract.status != ContractStatus::active) {
        throw Error(ErrorCode::lifecycle, "contract " + std::to_string(contract.id) + " is " + to_string(contract.status));
    }
    if (t <= contract.vintage) return;
    if (t > contract.vintage + contract.cap_horizon) {
        contract.status = ContractStatus::matured;
        return;
    }
    auto& insurer = insurers.at(contract.insurer_id);
    if (insurer.defaulted) {
        contract.status = ContractStatus::defaulted;
        report.defaulted_contracts.push_back(contract.id);
        return;
    }

    contract.cumulative_delta += feed.delta(contract.vintage);
    const Money target = adjustment_floor ? max(*adjustment_floor, contract.cumulative_delta) : contract.cumulative_delta;
    const Money leg = target - contract.settled_cumulative;
    contract.settled_cumulative = target;
    const Money amount = leg * contract.tonnes;

    const std::string cp = counterparty_account(contract.counterparty);
    const std::string cash = accounts::insurer(contract.insurer_id);
    const std::string reserve = accounts::reserve(contract.insurer_id);
    const LineContext ctx{contract.id, contract.vintage};

    if (amount.is_positive()) {
        const Money from_cash = min(max(ledger.balance(ledger.at(cash)), Money{}), amount);
        post_line(report, ledger, t, cash, cp, from_cash, Reason::swap_leg, ctx);
        const Money owed = amount - from_cash;
        const Money from_reserve = min(max(ledger.balance(ledger.at(reserve)), Money{}), owed);
        post_line(report, ledger, t, reserve, cp, from_reserve, Reason::swap_leg, ctx);
        insurer.legs_paid += from_cash + from_reserve;
        const Money unpaid = owed - from_reserve;
        if (unpaid.is_positive()) {
            post_line(report, ledger, t, accounts::loss_sink, cp, unpaid, Reason::bailout_loss, ctx);
            report.counterparty_loss += unpaid;
            contract.status = ContractStatus::defaulted;
            insurer.defaulted = true;
            report.defaulted_contracts.push_back(contract.id);
            report.defaulted_insurers.push_back(insurer.id);
            return;
        }
    } else if (amount.is_negative()) {
        post_line(report, ledger, t, cp, cash, -amount, Reason::swap_leg, ctx);
        insurer.legs_received += -amount;
    }
    if (t == contract.vintage + contract.cap_horizon) contract.status = ContractStatus::matured;
}

SettlementReport settle_swaps(Year t, std::vector<SwapContract>& contracts, const AdjustmentFeed& feed,
                              Ledger& ledger, InsurerRegistry& insurers) {
    SettlementReport report;
    for (auto& c : contracts) {
        if (c.status != ContractStatus::active || c.vintage >= t) continue;
        settle_swap(t, c, feed, ledger, insurers, std::nullopt, report);
    }
    return report;
}

PremiumQuote quote_premium(const InsurerPolicy& policy, const InsurerState& state, Money own_estimate,
                           Money agency_estimate, Year vintage, double solvency_k, std::uint64_t posted_at) {
    const Money bump = Money::from_double(solvency_k * state.loss_rate());
    const Money raw = own_estimate - agency_estimate + policy.cost_margin + policy.profit_margin + bump;
    const Money premium = max(raw, Money{});
    return PremiumQuote{policy.id, vintage, premium, policy.supply.volume_at(premium), posted_at};
}

SettlementReport baseline_fixed_tax(Year t, std::span<const EmissionVintage> registrations, Money tax_rate,
                                    Ledger& ledger) {
    SettlementReport report;
    for (const auto& r : registrations) {
        check_registration(t, r);
        transfer_line(report, ledger, t, accounts::polluter(r.polluter_id), accounts::government, tax_rate * r.tonnes,
                      Reason::initial_tax, Reason::refund, {std::nullopt, t});
    }
    return report;
}

Money baseline_reserves_for_pollution(Year t, const SectorHistory& sector, double reserve_rate, std::int32_t window_m) {
    if (window_m < 1) throw Error(ErrorCode::window, "reserve window must be >= 1");
    if (t - window_m < 0) throw Error(ErrorCode::window, "reserve window exceeds available history");
    const auto need = static_cast<std::size_t>(t) + 1;
    if (sector.gdp.size() < need || sector.fine.size() < static_cast<std::size_t>(t)) {
        throw Error(ErrorCode::window, "sector history shorter than the reserve window");
    }
    const double gdp_now = sector.gdp[static_cast<std::size_t>(t)];
    double sum = 0.0;
    for (std::int32_t j = 1; j <= window_m; ++j) {
        const auto past = static_cast<std::size_t>(t - j);
        if (!(sector.gdp[past] > 0.0)) throw Error(ErrorCode::domain, "sector GDP must be positive");
        sum += gdp_now * sector.fine[past].to_double() / sector.gdp[past];
    }
    return Money::from_double(reserve_rate * sum / window_m);
}

SettlementReport rebalance_reserve(Year t, const std::string& polluter_id, Money requirement, Ledger& ledger) {
    SettlementReport report;
    const std::string reserve = accounts::polluter_reserve(polluter_id);
    const Money posted = ledger.balance(ledger.at(reserve));
    transfer_line(report, ledger, t, accounts::polluter(polluter_id), reserve, requirement - posted, Reason::reserve,
                  Reason::reserve);
    return report;
}

std::vector<RepoBid> baseline_vpdollar_auction(std::span<const RepoBid> holders, Money upper_bound) {
    if (!upper_bound.is_positive()) throw Error(ErrorCode::domain, "VPDollar upper bound must be positive");
    std::vector<RepoBid> accepted;
    for (const auto& h : holders) {
        if (h.bid < upper_bound) accepted.push_back(h);
    }
    return accepted;
}

}  // namespace retrocarbon
