#include "retrocarbon/scc_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace retrocarbon {

namespace {

std::string vt(Year vintage, Year t) {
    return "(vintage " + std::to_string(vintage) + ", t " + std::to_string(t) + ")";
}

}  // namespace

std::optional<Money> RetroAgencyRelease::find(Year vintage) const {
    for (const auto& e : estimates) {
        if (e.vintage == vintage) return e.value;
    }
    return std::nullopt;
}

DiscountTable::DiscountTable(double rate, Year horizon) {
    factors_.resize(static_cast<std::size_t>(horizon) + 1);
    for (Year k = 0; k <= horizon; ++k) factors_[static_cast<std::size_t>(k)] = std::pow(1.0 + rate, -static_cast<double>(k));
}

SccEstimate estimate_scc(const DamageWorld& world, const EstimatorModel& model,
                         std::span<const MeasuredDamage> measurements, Year vintage, Year eval_time) {
    if (eval_time < vintage) throw Error(ErrorCode::domain, "eval_time precedes vintage " + vt(vintage, eval_time));
    if (eval_time > world.horizon_T) throw Error(ErrorCode::horizon, "eval_time beyond horizon " + vt(vintage, eval_time));

    std::vector<std::optional<Money>> measured(static_cast<std::size_t>(eval_time - vintage) + 1);
    for (const auto& m : measurements) {
        if (m.vintage != vintage || m.period < vintage || m.period > eval_time) continue;
        measured[static_cast<std::size_t>(m.period - vintage)] = m.value;
    }
    const double one_plus_r = 1.0 + world.discount_r;
    double value = 0.0;
    for (Year s = vintage; s <= eval_time; ++s) {
        const auto& m = measured[static_cast<std::size_t>(s - vintage)];
        if (!m) throw Error(ErrorCode::data_gap, "missing measurement for period " + std::to_string(s) + " " + vt(vintage, eval_time));
        value += m->to_double() * std::pow(one_plus_r, -static_cast<double>(s - vintage));
    }
    for (Year s = eval_time + 1; s <= world.horizon_T; ++s) {
        value += forecast_marginal_damage(model, world, vintage, s) * std::pow(one_plus_r, -static_cast<double>(s - vintage));
    }
    return SccEstimate{vintage, eval_time, Money::from_double(value)};
}

Adjustment compute_adjustment(const SccEstimate& prev, const SccEstimate& curr) {
    if (prev.vintage != curr.vintage) throw Error(ErrorCode::sequencing, "adjustment across different vintages");
    if (curr.eval_time != prev.eval_time + 1) throw Error(ErrorCode::sequencing, "adjustment needs consecutive eval_times");
    return Adjustment{curr.vintage, curr.eval_time, curr.value - prev.value};
}

Money true_scc_oracle(const DamageWorld& world, std::span<const MeasuredDamage> measurements, Year vintage) {
    // With eval_time at the horizon the forecast sum is empty, so the model is irrelevant.
    return estimate_scc(world, EstimatorModel{}, measurements, vintage, world.horizon_T).value;
}

void EstimateTable::record(const SccEstimate& e) {
    if (e.vintage < 0 || e.eval_time < e.vintage) throw Error(ErrorCode::domain, "invalid estimate index " + vt(e.vintage, e.eval_time));
    if (static_cast<std::size_t>(e.vintage) >= rows_.size()) rows_.resize(static_cast<std::size_t>(e.vintage) + 1);
    auto& row = rows_[static_cast<std::size_t>(e.vintage)];
    if (static_cast<Year>(row.size()) != e.eval_time - e.vintage) {
        throw Error(ErrorCode::sequencing, "estimates must be appended in eval_time order " + vt(e.vintage, e.eval_time));
    }
    row.push_back(e.value);
}

std::optional<Money> EstimateTable::find(Year vintage, Year eval_time) const {
    if (vintage < 0 || static_cast<std::size_t>(vintage) >= rows_.size() || eval_time < vintage) return std::nullopt;
    const auto& row = rows_[static_cast<std::size_t>(vintage)];
    const auto k = static_cast<std::size_t>(eval_time - vintage);
    if (k >= row.size()) return std::nullopt;
    return row[k];
}

Money EstimateTable::at(Year vintage, Year eval_time) const {
    auto v = find(vintage, eval_time);
    if (!v) throw Error(ErrorCode::data_gap, "no estimate " + vt(vintage, eval_time));
    return *v;
}

std::optional<Year> EstimateTable::latest(Year vintage) const {
    if (vintage < 0 || static_cast<std::size_t>(vintage) >= rows_.size()) return std::nullopt;
    const auto& row = rows_[static_cast<std::size_t>(vintage)];
    if (row.empty()) return std::nullopt;
    return vintage + static_cast<Year>(row.size()) - 1;
}

Adjustment EstimateTable::adjustment(Year vintage, Year period) const {
    return compute_adjustment(SccEstimate{vintage, period - 1, at(vintage, period - 1)},
                              SccEstimate{vintage, period, at(vintage, period)});
}

void EstimateTable::write_csv(std::ostream& out) const {
    out << "vintage,eval_time,value\n";
    for (std::size_t v = 0; v < rows_.size(); ++v) {
        for (std::size_t k = 0; k < rows_[v].size(); ++k) {
            out << v << ',' << v + k << ',' << rows_[v][k].to_string() << '\n';
        }
    }
}

RetroAgencyRelease retro_agency_release(const EstimateTable& table, Year t, std::int32_t n) {
    if (n < 0) throw Error(ErrorCode::window, "negative release window");
    if (t - n < 0) {
        throw Error(ErrorCode::window, "release at t=" + std::to_string(t) + " with window " + std::to_string(n) + " reaches before vintage 0");
    }
    RetroAgencyRelease release{t, n, {}};
    release.estimates.reserve(static_cast<std::size_t>(n) + 1);
    for (Year v = t; v >= t - n; --v) {
        auto value = table.find(v, t);
        if (!value) throw Error(ErrorCode::window, "no estimate " + vt(v, t) + " for release");
        release.estimates.push_back(SccEstimate{v, t, *value});
    }
    return release;
}

MeasurementHistory::MeasurementHistory(const DamageWorld& world)
    : world_(&world), discount_(world.discount_r, world.horizon_T) {}

void MeasurementHistory::record(const MeasuredDamage& m) {
    if (m.vintage < 0 || m.period < m.vintage) throw Error(ErrorCode::domain, "measurement " + vt(m.vintage, m.period));
    if (m.period > world_->horizon_T) throw Error(ErrorCode::horizon, "measurement beyond horizon " + vt(m.vintage, m.period));
    const auto v = static_cast<std::size_t>(m.vintage);
    if (v >= values_.size()) {
        values_.resize(v + 1);
        cumulative_pv_.resize(v + 1);
    }
    auto& row = values_[v];
    if (static_cast<Year>(row.size()) != m.period - m.vintage) {
        throw Error(ErrorCode::sequencing, "measurements must arrive in period order " + vt(m.vintage, m.period));
    }
    const double prev = cumulative_pv_[v].empty() ? 0.0 : cumulative_pv_[v].back();
    row.push_back(m.value);
    cumulative_pv_[v].push_back(prev + m.value.to_double() * discount_(m.period - m.vintage));
}

bool MeasurementHistory::has(Year vintage, Year period) const {
    if (vintage < 0 || static_cast<std::size_t>(vintage) >= values_.size() || period < vintage) return false;
    return static_cast<std::size_t>(period - vintage) < values_[static_cast<std::size_t>(vintage)].size();
}

Money MeasurementHistory::value(Year vintage, Year period) const {
    if (!has(vintage, period)) throw Error(ErrorCode::data_gap, "missing measurement " + vt(vintage, period));
    return values_[static_cast<std::size_t>(vintage)][static_cast<std::size_t>(period - vintage)];
}

double MeasurementHistory::measured_pv(Year vintage, Year eval_time) const {
    if (!has(vintage, eval_time)) throw Error(ErrorCode::data_gap, "missing measurement " + vt(vintage, eval_time));
    return cumulative_pv_[static_cast<std::size_t>(vintage)][static_cast<std::size_t>(eval_time - vintage)];
}

std::vector<MeasuredDamage> MeasurementHistory::flatten() const {
    std::vector<MeasuredDamage> out;
    for (std::size_t v = 0; v < values_.size(); ++v) {
        for (std::size_t k = 0; k < values_[v].size(); ++k) {
            out.push_back(MeasuredDamage{static_cast<Year>(v), static_cast<Year>(v + k), values_[v][k]});
        }
    }
    return out;
}

ForecastBasis::ForecastBasis(const DamageWorld& world) : world_(&world) {
    const DiscountTable d(world.discount_r, world.horizon_T);
    const auto n = static_cast<std::size_t>(world.horizon_T) + 1;
    linear_.resize(n);
    onset_.resize(n);
    double lin = 0.0;
    double ons = 0.0;
    for (Year k = 0; k <= world.horizon_T; ++k) {
        lin += static_cast<double>(k) * d(k);
        ons += onset_shape(k, world.onset_delay) * d(k);
        linear_[static_cast<std::size_t>(k)] = lin;
        onset_[static_cast<std::size_t>(k)] = ons;
    }
}

double ForecastBasis::tail_pv(const EstimatorModel& model, Year vintage, Year eval_time) const {
    const Year k_end = world_->horizon_T - vintage;
    const Year k_begin = eval_time - vintage;
    if (k_begin >= k_end) return 0.0;
    const double alpha = model.anneal_alpha;
    const double c_lin = (1.0 - alpha) * model.b2 + alpha * world_->a2;
    const double c_ons = (1.0 - alpha) * model.b4 + alpha * world_->a4;
    const auto e = static_cast<std::size_t>(k_end);
    const auto b = static_cast<std::size_t>(k_begin);
    return c_lin * (linear_[e] - linear_[b]) + c_ons * (onset_[e] - onset_[b]);
}

Money model_estimate(const MeasurementHistory& history, const ForecastBasis& basis, const EstimatorModel& model,
                     Year vintage, Year eval_time) {
    if (eval_time < vintage) throw Error(ErrorCode::domain, "eval_time precedes vintage " + vt(vintage, eval_time));
    return Money::from_double(history.measured_pv(vintage, eval_time) + basis.tail_pv(model, vintage, eval_time));
}

EstimatorModel refit_model(const EstimatorModel& model, const MeasurementHistory& history, Year t) {
    const double onset = history.world().onset_delay;
    RegressionSamples window;
    for (Year period = std::max<Year>(0, t - model.calibration_window + 1); period <= t; ++period) {
        for (Year v = 0; v <= period; ++v) {
            if (!history.has(v, period)) continue;
            const double tau = period - v;
            const double y = history.value(v, period).to_double();
            if (model.fit_quartic) {
                window.inputs.push_back({tau, onset_shape(tau, onset)});
                window.responses.push_back(y);
            } else {
                window.inputs.push_back({tau});
                window.responses.push_back(y - model.b4 * onset_shape(tau, onset));
            }
        }
    }
    if (window.inputs.empty()) return model;
    EstimatorModel next = model;
    try {
        const auto coef = least_squares(window);
        next.b2 = coef[0];
        if (model.fit_quartic) next.b4 = coef[1];
    } catch (const Error& e) {
        if (e.code() != ErrorCode::singularity) throw;
    }
    return next;
}

RetroAgency::RetroAgency(const MeasurementHistory& history, EstimatorModel model, InnovationSchedule innovation,
                         std::int32_t window_n)
    : history_(&history), basis_(history.world()), model_(model), innovation_(innovation), window_n_(window_n) {
    model_.validate();
    if (window_n_ < 0) throw Error(ErrorCode::config, "agency window must be >= 0");
}

void RetroAgency::advance(Year t) {
    if (innovation_.rate > 0.0 && t >= innovation_.start) model_ = innovate_model(model_, t, innovation_.rate);
    if (model_.refit) model_ = refit_model(model_, *history_, t);
    for (Year v = 0; v <= t; ++v) {
        table_.record(SccEstimate{v, t, model_estimate(*history_, basis_, model_, v, t)});
    }
}

RetroAgencyRelease RetroAgency::release(Year t) const {
    return retro_agency_release(table_, t, std::min<std::int32_t>(window_n_, t));
}

AdjustmentFeed::AdjustmentFeed(const RetroAgencyRelease& current, const RetroAgencyRelease* previous,
                               SettlementView view, double discount_r)
    : current_(&current), previous_(previous), view_(view), discount_r_(discount_r) {
    if (previous_ && previous_->release_time + 1 != current_->release_time) {
        throw Error(ErrorCode::sequencing, "adjustment feed needs consecutive releases");
    }
}

Money AdjustmentFeed::initial() const { return estimate(time()); }

Money AdjustmentFeed::estimate(Year vintage) const {
    auto v = current_->find(vintage);
    if (!v) throw Error(ErrorCode::agency_coverage, "release does not cover " + vt(vintage, time()));
    return *v;
}

bool AdjustmentFeed::covers(Year vintage) const {
    return previous_ && current_->find(vintage) && previous_->find(vintage);
}

Money AdjustmentFeed::delta(Year vintage) const {
    auto curr = current_->find(vintage);
    auto prev = previous_ ? previous_->find(vintage) : std::nullopt;
    if (!curr || !prev) throw Error(ErrorCode::agency_coverage, "no adjustment available " + vt(vintage, time()));
    const Money pv = *curr - *prev;
    if (view_ == SettlementView::present_value) return pv;
    return Money::from_double(pv.to_double() * std::pow(1.0 + discount_r_, static_cast<double>(time() - vintage)));
}

}  // namespace retrocarbon
