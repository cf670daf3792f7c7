#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "retrocarbon/scenario.hpp"

namespace retrocarbon {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr const char* sponsor_id = "sponsor";

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return nan;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

class Simulation {
public:
    Simulation(const ScenarioConfig& config, std::uint64_t seed)
        : cfg_(config),
          seed_(seed),
          damage_(config.world, seed),
          history_(config.world),
          agency_(history_, config.agency.model, config.agency.innovation, config.agency.window_n) {
        open_accounts();
        for (const auto& name : series_names()) series_[name].reserve(static_cast<std::size_t>(config.years));
    }

    RunResult run() {
        for (Year t = 0; t < cfg_.years; ++t) step(t);
        finish();
        return std::move(result_);
    }

private:
    void open_accounts() {
        ledger_.open(accounts::government, "government");
        ledger_.open(accounts::exchange, "exchange", cfg_.exchange.initial_cash);
        ledger_.open(accounts::shortfall_sink, "sink");
        ledger_.open(accounts::loss_sink, "sink");
        for (std::int32_t i = 0; i < cfg_.polluters.count; ++i) {
            const std::string id = "p" + std::to_string(i);
            polluter_ids_.push_back(id);
            polluter_rng_.push_back(make_stream(seed_, StreamFamily::polluter, static_cast<std::uint64_t>(i)));
            ledger_.open(accounts::polluter(id), id, cfg_.polluters.initial_cash);
            if (cfg_.mechanism == Mechanism::reserves) ledger_.open(accounts::polluter_reserve(id), id);
        }
        polluter_tonnes_.assign(polluter_ids_.size(), {});
        vp_holdings_.assign(polluter_ids_.size(), {});
        for (const auto& ic : cfg_.insurers) {
            ledger_.open(accounts::insurer(ic.id), ic.id, ic.initial_cash);
            ledger_.open(accounts::reserve(ic.id), ic.id, ic.default_fund);
            InsurerPolicy p{ic.id, ic.model, ic.innovation, ic.cost_margin, ic.profit_margin, ic.supply};
            policies_.push_back(std::move(p));
            InsurerState s;
            s.id = ic.id;
            insurers_.emplace(ic.id, s);
        }
        if (cfg_.mechanism == Mechanism::precap) {
            for (std::int32_t j = 0; j < cfg_.suppliers.count; ++j) {
                const std::string id = "s" + std::to_string(j);
                ledger_.open(accounts::supplier(id), id);
            }
            unsold_.assign(static_cast<std::size_t>(cfg_.suppliers.count), {});
            if (!cfg_.exchange.sponsor_bids.empty()) {
                ledger_.open(accounts::polluter(sponsor_id), sponsor_id, cfg_.exchange.sponsor_cash);
            }
            risk_.adjustment_floor = cfg_.exchange.adjustment_floor;
        }
    }

    void step(Year t) {
        for (Year v = 0; v <= t; ++v) history_.record(damage_.draw(v, t));
        agency_.advance(t);
        for (auto& p : policies_) {
            if (p.innovation.rate > 0.0 && t >= p.innovation.start) p.model = innovate_model(p.model, t, p.innovation.rate);
            if (p.model.refit) p.model = refit_model(p.model, history_, t);
        }
        previous_ = std::move(current_);
        current_ = agency_.release(t);
        const AdjustmentFeed feed(*current_, previous_ ? &*previous_ : nullptr, cfg_.agency.view, cfg_.world.discount_r);

        // Every polluter draws each year so streams stay aligned across mechanisms.
        for (std::size_t i = 0; i < polluter_ids_.size(); ++i) {
            const double u = uniform01(polluter_rng_[i]);
            if (t >= 1 && u < cfg_.polluters.default_hazard) bankrupt_.insert(polluter_ids_[i]);
        }

        std::vector<EmissionVintage> regs;
        for (std::size_t i = 0; i < polluter_ids_.size(); ++i) {
            if (bankrupt_.count(polluter_ids_[i])) continue;
            regs.push_back({polluter_ids_[i], t, cfg_.polluters.tonnes_per_year});
        }

        premia_.clear();
        signal_.reset();
        marginal_.reset();
        SettlementReport report;
        switch (cfg_.mechanism) {
            case Mechanism::idealized_recap:
                report = idealized_recap_step(t, regs, exposures_, feed, ledger_, bankrupt_, cfg_.agency.window_n);
                add_tonnes(t, regs);
                break;
            case Mechanism::insured_recap: report = insured_step(t, regs, feed); break;
            case Mechanism::precap: report = precap_step(t, feed); break;
            case Mechanism::fixed_tax:
                report = baseline_fixed_tax(t, regs, cfg_.baselines.fixed_tax_rate, ledger_);
                add_tonnes(t, regs);
                break;
            case Mechanism::reserves: report = reserves_step(t, regs); break;
            case Mechanism::vpdollar: report = vpdollar_step(t, regs, feed); break;
        }
        absorb(t, std::move(report));

        if (ledger_.total() != ledger_.initial_total()) {
            throw Error(ErrorCode::audit, "conservation violated at t=" + std::to_string(t) + ": total " +
                                              ledger_.total().to_string() + " vs " + ledger_.initial_total().to_string());
        }
        ++result_.conservation_checks;
        record_metrics(t);
    }

    void add_tonnes(Year t, std::span<const EmissionVintage> regs) {
        auto& slot = tonnes_at(t);
        for (const auto& r : regs) slot += r.tonnes;
    }

    std::int64_t& tonnes_at(Year t) {
        if (result_.tonnes_by_vintage.size() <= static_cast<std::size_t>(t)) {
            result_.tonnes_by_vintage.resize(static_cast<std::size_t>(t) + 1, 0);
        }
        return result_.tonnes_by_vintage[static_cast<std::size_t>(t)];
    }

    PremiumQuote quote(std::size_t i, Year t, Money agency_estimate) {
        const auto& p = policies_[i];
        const Money own = model_estimate(history_, agency_.basis(), p.model, t, t);
        return quote_premium(p, insurers_.at(p.id), own, agency_estimate, t, cfg_.solvency_k, ++posted_);
    }

    SettlementReport insured_step(Year t, std::span<const EmissionVintage> regs, const AdjustmentFeed& feed) {
        SettlementReport report = settle_swaps(t, contracts_, feed, ledger_, insurers_);
        report.append(idealized_recap_step(t, {}, exposures_, feed, ledger_, bankrupt_, cfg_.agency.window_n));

        std::vector<PremiumQuote> quotes;
        for (std::size_t i = 0; i < policies_.size(); ++i) {
            if (insurers_.at(policies_[i].id).defaulted) continue;
            PremiumQuote q = quote(i, t, feed.initial());
            if (q.volume <= 0) continue;
            premia_.push_back(q.premium.to_double());
            quotes.push_back(std::move(q));
        }
        InsuredAuctionOutcome outcome;
        if (quotes.empty()) {
            outcome.unmet.assign(regs.begin(), regs.end());
        } else if (!regs.empty()) {
            outcome = insured_recap_auction(t, regs, quotes, cfg_.cap_horizon, next_contract_);
        }
        report.append(settle_insured_registrations(t, regs, outcome, feed, ledger_, insurers_));
        for (const auto& c : outcome.contracts) {
            insured_volume_[c.insurer_id] += c.tonnes;
            contracts_.push_back(c);
        }
        for (const auto& u : outcome.unmet) {
            unmet_volume_ += u.tonnes;
            if (cfg_.agency.window_n > 0) exposures_.push_back(Exposure{u.polluter_id, t, u.tonnes});
        }
        add_tonnes(t, regs);
        return report;
    }

    SettlementReport precap_step(Year t, const AdjustmentFeed& feed) {
        SettlementReport report = settle_exchange_swaps(t, contracts_, feed, risk_, ledger_, insurers_);

        OrderBook book(credits_);
        const auto& sc = cfg_.suppliers;
        for (std::int32_t j = 0; j < sc.count; ++j) {
            const std::string id = "s" + std::to_string(j);
            const bool bt = j < sc.breakthrough_count;
            auto& held = unsold_[static_cast<std::size_t>(j)];
            for (std::int64_t k = 0; k < sc.credits_per_year; ++k) held.push_back(credits_.issue(id, bt));
            if (held.empty()) continue;
            Order o;
            o.side = OrderSide::supplier_ask;
            o.agent_id = id;
            o.price = bt ? sc.breakthrough_ask : sc.ask + sc.ask_step * j;
            o.volume = static_cast<std::int64_t>(held.size());
            o.credits = held;
            book.post(std::move(o));
        }
        for (std::size_t i = 0; i < policies_.size(); ++i) {
            if (insurers_.at(policies_[i].id).defaulted) continue;
            const PremiumQuote q = quote(i, t, feed.initial());
            if (q.volume <= 0) continue;
            book.post(Order{OrderSide::premium_ask, q.insurer_id, q.premium, q.volume, 0, {}, std::nullopt});
        }
        auto post_bids = [&](const std::string& agent, const std::vector<BidStep>& steps) {
            for (const auto& b : steps) book.post(Order{OrderSide::buyer_bid, agent, b.price, b.volume, 0, {}, std::nullopt});
        };
        for (const auto& id : polluter_ids_) {
            if (!bankrupt_.count(id)) post_bids(id, cfg_.polluters.bids);
        }
        if (!cfg_.exchange.sponsor_bids.empty()) post_bids(sponsor_id, cfg_.exchange.sponsor_bids);

        ClearingParams params{cfg_.exchange.breakthrough_quota, cfg_.exchange.scc_cap, cfg_.cap_horizon};
        const ClearingResult cleared = clear_auction(book, t, params, next_contract_);
        next_contract_ += cleared.swaps.size();
        report.append(apply_clearing(t, cleared, credits_, ledger_, insurers_, contracts_));

        std::map<std::string, std::pair<std::int64_t, std::int64_t>> baskets;
        for (const auto& tr : cleared.trades) {
            auto& [size, bt] = baskets[tr.buyer_id];
            ++size;
            if (tr.breakthrough) {
                ++bt;
                if (tr.price > cfg_.exchange.scc_cap) ++breakthrough_cap_violations_;
            }
            if (tr.insurer_id) {
                insured_volume_[*tr.insurer_id] += 1;
                premia_.push_back(tr.premium.to_double());
            }
            result_.trades.push_back(tr);
        }
        for (const auto& [buyer, counts] : baskets) {
            if (static_cast<double>(counts.second) < cfg_.exchange.breakthrough_quota * static_cast<double>(counts.first) - 1e-9) {
                ++quota_violations_;
            }
        }
        for (auto& held : unsold_) {
            std::erase_if(held, [&](CreditId id) { return credits_.at(id).status == CreditStatus::icc; });
        }
        tonnes_at(t) += static_cast<std::int64_t>(cleared.swaps.size());

        const SccSignal s = extract_scc_signal(round_history(book, cleared), t);
        result_.signals.push_back(s);
        if (s.value) signal_ = s.value->to_double();
        if (cleared.marginal_premium) marginal_ = cleared.marginal_premium->to_double();
        return report;
    }

    // Posts a signed amount between two accounts and records the line.
    void flow(SettlementReport& report, Year t, const std::string& payer, const std::string& payee, Money amount,
              Reason positive, Reason negative, std::optional<Year> vintage) {
        if (amount.is_zero()) return;
        const bool forward = amount.is_positive();
        const std::string& from = forward ? payer : payee;
        const std::string& to = forward ? payee : payer;
        const Money abs_amount = forward ? amount : -amount;
        ledger_.post(t, ledger_.at(from), ledger_.at(to), abs_amount, forward ? positive : negative);
        report.lines.push_back(SettlementLine{t, from, to, abs_amount, std::nullopt, forward ? positive : negative, vintage});
    }

    SettlementReport reserves_step(Year t, std::span<const EmissionVintage> regs) {
        SettlementReport report;
        for (const auto& r : regs) {
            const auto i = static_cast<std::size_t>(std::stoi(r.polluter_id.substr(1)));
            polluter_tonnes_[i].resize(static_cast<std::size_t>(t) + 1, 0);
            polluter_tonnes_[i][static_cast<std::size_t>(t)] += r.tonnes;
        }
        add_tonnes(t, regs);

        // Fines are the damage each polluter's past emissions realised this period.
        Money fine_sum;
        std::int64_t payers = 0;
        for (std::size_t i = 0; i < polluter_ids_.size(); ++i) {
            const std::string& id = polluter_ids_[i];
            const bool bankrupt = bankrupt_.count(id) != 0;
            Money fine;
            for (std::size_t v = 0; v < polluter_tonnes_[i].size(); ++v) {
                const std::int64_t tonnes = polluter_tonnes_[i][v];
                if (tonnes == 0) continue;
                const Money amount = history_.value(static_cast<Year>(v), t) * tonnes;
                fine += amount;
                if (bankrupt) {
                    report.shortfall += amount;
                    flow(report, t, accounts::shortfall_sink, accounts::government, amount, Reason::shortfall,
                         Reason::shortfall, static_cast<Year>(v));
                } else {
                    flow(report, t, accounts::polluter(id), accounts::government, amount, Reason::adjustment,
                         Reason::refund, static_cast<Year>(v));
                }
            }
            fine_sum += fine;
            ++payers;
        }
        const auto& b = cfg_.baselines;
        sector_.gdp.push_back(b.gdp_initial * std::pow(1.0 + b.gdp_growth, static_cast<double>(t)));
        sector_.fine.push_back(payers > 0 ? Money::from_double(fine_sum.to_double() / static_cast<double>(payers)) : Money{});

        if (t >= 1) {
            const std::int32_t m = std::min<std::int32_t>(b.reserve_window, t);
            const Money requirement = baseline_reserves_for_pollution(t, sector_, b.reserve_rate, m);
            for (const auto& id : polluter_ids_) {
                if (bankrupt_.count(id)) continue;
                auto rebalanced = rebalance_reserve(t, id, requirement, ledger_);
                report.append(std::move(rebalanced));
            }
        }
        return report;
    }

    SettlementReport vpdollar_step(Year t, std::span<const EmissionVintage> regs, const AdjustmentFeed& feed) {
        SettlementReport report;
        const Money revenue = cfg_.baselines.vpdollar_revenue_per_tonne;
        for (const auto& r : regs) {
            const auto i = static_cast<std::size_t>(std::stoi(r.polluter_id.substr(1)));
            const Money sales = revenue * r.tonnes;
            flow(report, t, accounts::polluter(r.polluter_id), accounts::government, sales, Reason::initial_tax,
                 Reason::refund, t);
            vp_holdings_[i].push_back({t, sales});
        }
        add_tonnes(t, regs);

        // Hidden bound: one VPDollar is worth a dollar less the estimated damage per dollar of sales.
        const double bound = 1.0 - feed.initial().to_double() / revenue.to_double();
        std::vector<RepoBid> bids;
        for (std::size_t i = 0; i < polluter_ids_.size(); ++i) {
            std::normal_distribution<double> z(0.0, 1.0);
            const double draw = z(polluter_rng_[i]);
            if (bankrupt_.count(polluter_ids_[i]) || vp_holdings_[i].empty()) continue;
            const double bid = std::max(0.0, bound * (1.0 + cfg_.baselines.vpdollar_bid_spread * draw));
            bids.push_back({polluter_ids_[i], Money::from_double(bid)});
        }
        const Money upper = Money::from_double(bound);
        if (!upper.is_positive()) return report;
        for (const auto& accepted : baseline_vpdollar_auction(bids, upper)) {
            const auto i = static_cast<std::size_t>(std::stoi(accepted.holder.substr(1)));
            for (const auto& [vintage, face] : vp_holdings_[i]) {
                const Money payout = Money::from_double(accepted.bid.to_double() * face.to_double());
                flow(report, t, accounts::government, accounts::polluter(accepted.holder), payout, Reason::refund,
                     Reason::refund, vintage);
            }
            vp_holdings_[i].clear();
        }
        return report;
    }

    void absorb(Year t, SettlementReport&& report) {
        for (const auto& line : report.lines) {
            if (line.vintage) {
                const auto v = static_cast<std::size_t>(*line.vintage);
                if (paid_.size() <= v) paid_.resize(v + 1);
                const bool counts = cfg_.mechanism != Mechanism::precap || line.reason == Reason::premium;
                if (counts && line.payer.rfind("polluter:", 0) == 0) paid_[v] += line.amount;
                if (counts && line.payee.rfind("polluter:", 0) == 0) paid_[v] -= line.amount;
                if ((line.reason == Reason::swap_leg || line.reason == Reason::bailout_loss) &&
                    t > *line.vintage + cfg_.cap_horizon) {
                    ++cap_violations_;
                }
            }
        }
        shortfall_ += report.shortfall;
        counterparty_loss_ += report.counterparty_loss;
        exchange_default_events_ += report.exchange_default_events;
        result_.settlements.insert(result_.settlements.end(), std::make_move_iterator(report.lines.begin()),
                                   std::make_move_iterator(report.lines.end()));
    }

    void record_metrics(Year t) {
        const auto& table = agency_.table();
        double first = 0.0;
        if (t >= 1) first = table.adjustment(0, t).delta.to_double();
        const Year lo = t - std::min<Year>(cfg_.agency.window_n, t);
        double sum = 0.0;
        int n = 0;
        for (Year v = lo; v < t; ++v) {
            sum += table.adjustment(v, t).delta.to_double();
            ++n;
        }
        int defaults = 0;
        for (const auto& [id, s] : insurers_) defaults += s.defaulted ? 1 : 0;

        series_["delta_first_vintage"].push_back(first);
        series_["mean_delta"].push_back(n > 0 ? sum / n : 0.0);
        series_["initial_estimate"].push_back(table.at(t, t).to_double());
        series_["government_balance"].push_back(ledger_.balance(ledger_.at(accounts::government)).to_double());
        series_["shortfall_total"].push_back((shortfall_ + counterparty_loss_).to_double());
        series_["insurer_defaults"].push_back(defaults);
        series_["exchange_cash"].push_back(exchange_cash(ledger_).to_double());
        series_["scc_signal"].push_back(signal_.value_or(nan));
        series_["marginal_premium"].push_back(marginal_.value_or(nan));
        series_["premium_min"].push_back(quantile(premia_, 0.0));
        series_["premium_median"].push_back(quantile(premia_, 0.5));
        series_["premium_max"].push_back(quantile(premia_, 1.0));
    }

    void finish() {
        const AuditReport audit_report = audit(ledger_);
        if (!audit_report.ok) {
            throw Error(ErrorCode::audit, "final audit failed" +
                                              (audit_report.first_bad_seq ? " at seq " + std::to_string(*audit_report.first_bad_seq) : std::string()) +
                                              ": " + audit_report.message);
        }
        const auto& table = agency_.table();
        const Year last = cfg_.years - 1;

        // Signal target: the horizon estimate minus the initial estimate, once the horizon is reached.
        auto& target = series_["signal_target"];
        target.assign(static_cast<std::size_t>(cfg_.years), nan);
        if (cfg_.years == cfg_.world.horizon_T + 1) {
            for (Year v = 0; v < cfg_.years; ++v) {
                target[static_cast<std::size_t>(v)] = (table.at(v, last) - table.at(v, v)).to_double();
            }
        }

        double gap = 0.0;
        for (std::size_t v = 0; v < result_.tonnes_by_vintage.size(); ++v) {
            const std::int64_t tonnes = result_.tonnes_by_vintage[v];
            if (tonnes == 0) continue;
            const auto vy = static_cast<Year>(v);
            Money owed = table.at(vy, last) * tonnes;
            if (cfg_.mechanism == Mechanism::precap) owed = (table.at(vy, last) - table.at(vy, vy)) * tonnes;
            const Money paid = v < paid_.size() ? paid_[v] : Money{};
            gap += std::abs((owed - paid).to_double());
        }

        auto& m = result_.metrics;
        m.scenario = cfg_.name;
        m.seed = seed_;
        m.years = cfg_.years;
        m.series = std::move(series_);
        m.audit = audit_report;
        m.scalars["ppp_gap"] = gap;
        m.scalars["shortfall"] = shortfall_.to_double();
        m.scalars["counterparty_loss"] = counterparty_loss_.to_double();
        m.scalars["government_shortfall"] = (shortfall_ + counterparty_loss_).to_double();
        m.scalars["exchange_default_events"] = exchange_default_events_;
        m.scalars["unmet_volume"] = static_cast<double>(unmet_volume_);
        m.scalars["cap_violations"] = static_cast<double>(cap_violations_);
        m.scalars["quota_violations"] = static_cast<double>(quota_violations_);
        m.scalars["breakthrough_cap_violations"] = static_cast<double>(breakthrough_cap_violations_);
        m.scalars["conservation_checks"] = static_cast<double>(result_.conservation_checks);
        m.scalars["trades"] = static_cast<double>(result_.trades.size());
        m.scalars["bankrupt_polluters"] = static_cast<double>(bankrupt_.size());
        int defaults = 0;
        for (const auto& [id, s] : insurers_) {
            defaults += s.defaulted ? 1 : 0;
            m.scalars["insured_volume:" + id] = static_cast<double>(insured_volume_.count(id) ? insured_volume_.at(id) : 0);
        }
        m.scalars["insurer_defaults"] = defaults;

        result_.ledger = std::move(ledger_);
        result_.estimates = table;
        result_.contracts = std::move(contracts_);
    }

    const ScenarioConfig& cfg_;
    std::uint64_t seed_;
    DamageStreams damage_;
    MeasurementHistory history_;
    RetroAgency agency_;
    std::optional<RetroAgencyRelease> previous_;
    std::optional<RetroAgencyRelease> current_;
    Ledger ledger_;

    std::vector<std::string> polluter_ids_;
    std::vector<std::mt19937_64> polluter_rng_;
    BankruptSet bankrupt_;
    std::vector<std::vector<std::int64_t>> polluter_tonnes_;
    std::vector<std::vector<std::pair<Year, Money>>> vp_holdings_;
    SectorHistory sector_;

    std::vector<InsurerPolicy> policies_;
    InsurerRegistry insurers_;
    std::uint64_t posted_ = 0;
    std::vector<Exposure> exposures_;
    std::vector<SwapContract> contracts_;
    ContractId next_contract_ = 1;

    CreditRegistry credits_;
    std::vector<std::vector<CreditId>> unsold_;
    ExchangeRiskState risk_;

    std::vector<double> premia_;
    std::optional<double> signal_;
    std::optional<double> marginal_;  // highest traded premium, unfiltered
    std::vector<Money> paid_;
    Money shortfall_;
    Money counterparty_loss_;
    int exchange_default_events_ = 0;
    std::int64_t unmet_volume_ = 0;
    std::int64_t cap_violations_ = 0;
    std::int64_t quota_violations_ = 0;
    std::int64_t breakthrough_cap_violations_ = 0;
    std::map<std::string, std::int64_t> insured_volume_;
    std::map<std::string, std::vector<double>> series_;
    RunResult result_;
};

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

std::vector<std::string> series_names() {
    return {"delta_first_vintage", "mean_delta",     "initial_estimate", "government_balance",
            "shortfall_total",     "insurer_defaults", "exchange_cash",  "scc_signal",     "marginal_premium",
            "signal_target",       "premium_min",    "premium_median",   "premium_max"};
}

bool operator==(const RunMetrics& a, const RunMetrics& b) {
    if (a.scenario != b.scenario || a.seed != b.seed || a.years != b.years) return false;
    if (a.audit.ok != b.audit.ok || a.audit.entries_checked != b.audit.entries_checked) return false;
    if (a.series.size() != b.series.size() || a.scalars.size() != b.scalars.size()) return false;
    for (const auto& [name, values] : a.series) {
        auto it = b.series.find(name);
        if (it == b.series.end() || it->second.size() != values.size()) return false;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!same_bits(values[i], it->second[i])) return false;
        }
    }
    for (const auto& [name, value] : a.scalars) {
        auto it = b.scalars.find(name);
        if (it == b.scalars.end() || !same_bits(value, it->second)) return false;
    }
    return true;
}

RunResult run_scenario_detailed(const ScenarioConfig& config, std::uint64_t seed) {
    config.validate();
    Simulation sim(config, seed);
    return sim.run();
}

RunMetrics run_scenario(const ScenarioConfig& config, std::uint64_t seed) {
    return run_scenario_detailed(config, seed).metrics;
}

}  // namespace retrocarbon
