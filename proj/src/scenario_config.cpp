#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "retrocarbon/scenario.hpp"

namespace retrocarbon {

namespace {

constexpr const char* mechanism_names[] = {"idealized-recap", "insured-recap", "precap",
                                           "fixed-tax",       "reserves",      "vpdollar"};

}  // namespace

const char* to_string(Mechanism m) { return mechanism_names[static_cast<std::size_t>(m)]; }

std::optional<Mechanism> parse_mechanism(std::string_view text) {
    for (std::size_t i = 0; i < std::size(mechanism_names); ++i) {
        if (text == mechanism_names[i]) return static_cast<Mechanism>(i);
    }
    return std::nullopt;
}

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::config, msg); }

void require(bool ok, const std::string& msg) {
    if (!ok) config_error(msg);
}

void read(const json& j, double& out, const std::string& path);
void read(const json& j, bool& out, const std::string& path);
void read(const json& j, std::string& out, const std::string& path);
template <class Int>
    requires std::is_integral_v<Int>
void read(const json& j, Int& out, const std::string& path);
void read(const json& j, Money& out, const std::string& path);
void read(const json& j, std::optional<Money>& out, const std::string& path);
void read(const json& j, Mechanism& out, const std::string& path);
void read(const json& j, SettlementView& out, const std::string& path);
void read(const json& j, DamageWorld& w, const std::string& path);
void read(const json& j, EstimatorModel& m, const std::string& path);
void read(const json& j, InnovationSchedule& s, const std::string& path);
void read(const json& j, AgencyConfig& a, const std::string& path);
void read(const json& j, BidStep& b, const std::string& path);
template <class T>
void read(const json& j, std::vector<T>& out, const std::string& path);
void read(const json& j, StepCurve& c, const std::string& path);
void read(const json& j, PolluterConfig& p, const std::string& path);
void read(const json& j, InsurerConfig& c, const std::string& path);
void read(const json& j, SupplierConfig& s, const std::string& path);
void read(const json& j, ExchangeConfig& e, const std::string& path);
void read(const json& j, BaselineConfig& b, const std::string& path);

// Reads the fields of one JSON object and rejects keys nobody asked for.
class Fields {
public:
    Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        require(j.is_object(), path_ + " must be an object");
    }

    template <class T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        read(j_.at(key), out, path_ + "." + key);
    }

    template <class T>
    void need(const char* key, T& out) {
        require(j_.contains(key), path_ + "." + key + " is required");
        get(key, out);
    }

    void finish() const {
        for (const auto& item : j_.items()) {
            require(seen_.count(item.key()) != 0, "unknown field " + path_ + "." + item.key());
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void read(const json& j, double& out, const std::string& path) {
    require(j.is_number(), path + " must be a number");
    out = j.get<double>();
}

void read(const json& j, bool& out, const std::string& path) {
    require(j.is_boolean(), path + " must be a boolean");
    out = j.get<bool>();
}

void read(const json& j, std::string& out, const std::string& path) {
    require(j.is_string(), path + " must be a string");
    out = j.get<std::string>();
}

template <class Int>
    requires std::is_integral_v<Int>
void read(const json& j, Int& out, const std::string& path) {
    require(j.is_number_integer(), path + " must be an integer");
    if constexpr (std::is_unsigned_v<Int>) {
        require(j.is_number_unsigned(), path + " must be non-negative");
        out = static_cast<Int>(j.get<std::uint64_t>());
    } else {
        const auto v = j.get<std::int64_t>();
        require(v >= std::numeric_limits<Int>::min() && v <= std::numeric_limits<Int>::max(), path + " out of range");
        out = static_cast<Int>(v);
    }
}

// Money as a decimal string ("40", "12.5") or a JSON number.
void read(const json& j, Money& out, const std::string& path) {
    try {
        if (j.is_string()) {
            out = Money::parse(j.get<std::string>());
        } else if (j.is_number()) {
            out = Money::from_double(j.get<double>());
        } else {
            config_error(path + " must be a decimal string or number");
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::config) throw;
        config_error(path + ": " + e.what());
    }
}

void read(const json& j, std::optional<Money>& out, const std::string& path) {
    if (j.is_null()) {
        out.reset();
        return;
    }
    Money m;
    read(j, m, path);
    out = m;
}

void read(const json& j, Mechanism& out, const std::string& path) {
    std::string s;
    read(j, s, path);
    const auto m = parse_mechanism(s);
    require(m.has_value(), path + ": unknown mechanism '" + s + "'");
    out = *m;
}

void read(const json& j, SettlementView& out, const std::string& path) {
    std::string s;
    read(j, s, path);
    if (s == "present-value") {
        out = SettlementView::present_value;
    } else if (s == "nominal") {
        out = SettlementView::nominal;
    } else {
        config_error(path + ": expected present-value or nominal");
    }
}

void read(const json& j, DamageWorld& w, const std::string& path) {
    Fields f(j, path);
    f.get("a2", w.a2);
    f.get("a4", w.a4);
    f.get("onset_delay", w.onset_delay);
    f.get("sigma", w.sigma);
    f.need("horizon_T", w.horizon_T);
    f.get("discount_r", w.discount_r);
    f.finish();
}

void read(const json& j, EstimatorModel& m, const std::string& path) {
    Fields f(j, path);
    f.get("b2", m.b2);
    f.get("b4", m.b4);
    f.get("anneal_alpha", m.anneal_alpha);
    f.get("calibration_window", m.calibration_window);
    f.get("refit", m.refit);
    f.get("fit_quartic", m.fit_quartic);
    f.finish();
}

void read(const json& j, InnovationSchedule& s, const std::string& path) {
    Fields f(j, path);
    f.get("start", s.start);
    f.get("rate", s.rate);
    f.finish();
}

void read(const json& j, AgencyConfig& a, const std::string& path) {
    Fields f(j, path);
    f.get("model", a.model);
    f.get("innovation", a.innovation);
    f.get("window_n", a.window_n);
    f.get("settlement_view", a.view);
    f.finish();
}

void read(const json& j, BidStep& b, const std::string& path) {
    Fields f(j, path);
    f.need("price", b.price);
    f.need("volume", b.volume);
    f.finish();
}

template <class T>
void read(const json& j, std::vector<T>& out, const std::string& path) {
    require(j.is_array(), path + " must be an array");
    out.clear();
    for (std::size_t i = 0; i < j.size(); ++i) {
        T item{};
        read(j[i], item, path + "[" + std::to_string(i) + "]");
        out.push_back(std::move(item));
    }
}

// Supply curve as [[threshold, volume], ...].
void read(const json& j, StepCurve& c, const std::string& path) {
    require(j.is_array(), path + " must be an array of [threshold, volume]");
    std::vector<std::pair<Money, std::int64_t>> steps;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        require(j[i].is_array() && j[i].size() == 2, p + " must be [threshold, volume]");
        std::pair<Money, std::int64_t> step;
        read(j[i][0], step.first, p + "[0]");
        read(j[i][1], step.second, p + "[1]");
        steps.push_back(step);
    }
    try {
        c = StepCurve(std::move(steps));
    } catch (const Error& e) {
        config_error(path + ": " + e.what());
    }
}

void read(const json& j, PolluterConfig& p, const std::string& path) {
    Fields f(j, path);
    f.get("count", p.count);
    f.get("tonnes_per_year", p.tonnes_per_year);
    f.get("default_hazard", p.default_hazard);
    f.get("initial_cash", p.initial_cash);
    f.get("bids", p.bids);
    f.finish();
}

void read(const json& j, InsurerConfig& c, const std::string& path) {
    Fields f(j, path);
    f.need("id", c.id);
    f.get("model", c.model);
    f.get("innovation", c.innovation);
    f.get("cost_margin", c.cost_margin);
    f.get("profit_margin", c.profit_margin);
    f.get("supply", c.supply);
    f.get("initial_cash", c.initial_cash);
    f.get("default_fund", c.default_fund);
    f.finish();
}

void read(const json& j, SupplierConfig& s, const std::string& path) {
    Fields f(j, path);
    f.get("count", s.count);
    f.get("credits_per_year", s.credits_per_year);
    f.get("ask", s.ask);
    f.get("ask_step", s.ask_step);
    f.get("breakthrough_count", s.breakthrough_count);
    f.get("breakthrough_ask", s.breakthrough_ask);
    f.finish();
}

void read(const json& j, ExchangeConfig& e, const std::string& path) {
    Fields f(j, path);
    f.get("initial_cash", e.initial_cash);
    f.get("adjustment_floor", e.adjustment_floor);
    f.get("breakthrough_quota", e.breakthrough_quota);
    f.get("scc_cap", e.scc_cap);
    f.get("sponsor_bids", e.sponsor_bids);
    f.get("sponsor_cash", e.sponsor_cash);
    f.finish();
}

void read(const json& j, BaselineConfig& b, const std::string& path) {
    Fields f(j, path);
    f.get("fixed_tax_rate", b.fixed_tax_rate);
    f.get("reserve_rate", b.reserve_rate);
    f.get("reserve_window", b.reserve_window);
    f.get("gdp_initial", b.gdp_initial);
    f.get("gdp_growth", b.gdp_growth);
    f.get("vpdollar_revenue_per_tonne", b.vpdollar_revenue_per_tonne);
    f.get("vpdollar_bid_spread", b.vpdollar_bid_spread);
    f.finish();
}

json money(Money m) { return m.to_string(); }

json to_json(const EstimatorModel& m) {
    return {{"b2", m.b2}, {"b4", m.b4}, {"anneal_alpha", m.anneal_alpha},
            {"calibration_window", m.calibration_window}, {"refit", m.refit}, {"fit_quartic", m.fit_quartic}};
}

json to_json(const InnovationSchedule& s) { return {{"start", s.start}, {"rate", s.rate}}; }

json to_json(const std::vector<BidStep>& steps) {
    json out = json::array();
    for (const auto& b : steps) out.push_back({{"price", money(b.price)}, {"volume", b.volume}});
    return out;
}

}  // namespace

void ScenarioConfig::validate() const {
    require(schema_version == scenario_schema_version,
            "schema_version " + std::to_string(schema_version) + " is not supported (expected " +
                std::to_string(scenario_schema_version) + ")");
    require(!name.empty() && name.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-") ==
                                 std::string::npos,
            "name must be non-empty and use only [A-Za-z0-9_.-]");
    try {
        world.validate();
        agency.model.validate();
        for (const auto& i : insurers) i.model.validate();
    } catch (const Error& e) {
        config_error(e.what());
    }
    require(agency.window_n >= 0, "agency.window_n must be >= 0");
    require(agency.innovation.rate >= 0.0, "agency.innovation.rate must be >= 0");
    require(years >= 0, "years must be >= 0");
    require(years <= world.horizon_T + 1, "years must be <= horizon_T + 1");
    require(cap_horizon >= 1, "cap_horizon must be >= 1");
    if (mechanism == Mechanism::insured_recap || mechanism == Mechanism::precap) {
        require(cap_horizon <= agency.window_n, "cap_horizon must not exceed agency.window_n (releases must cover every live swap)");
    }
    require(solvency_k >= 0.0, "solvency_k must be >= 0");

    require(polluters.count >= 0, "polluters.count must be >= 0");
    require(polluters.tonnes_per_year > 0, "polluters.tonnes_per_year must be > 0");
    require(polluters.default_hazard >= 0.0 && polluters.default_hazard <= 1.0, "polluters.default_hazard must be in [0, 1]");
    for (const auto& b : polluters.bids) require(b.volume > 0 && !b.price.is_negative(), "polluters.bids need price >= 0 and volume > 0");

    std::set<std::string> ids;
    for (const auto& i : insurers) {
        require(!i.id.empty(), "insurer id must be non-empty");
        require(ids.insert(i.id).second, "duplicate insurer id '" + i.id + "'");
        require(!i.cost_margin.is_negative() && !i.profit_margin.is_negative(), "insurer '" + i.id + "': margins must be >= 0");
        require(i.supply.non_decreasing(), "insurer '" + i.id + "': supply must be non-decreasing in premium");
        require(!i.initial_cash.is_negative() && !i.default_fund.is_negative(), "insurer '" + i.id + "': cash and default fund must be >= 0");
        require(i.innovation.rate >= 0.0, "insurer '" + i.id + "': innovation.rate must be >= 0");
    }
    if (mechanism == Mechanism::precap) {
        require(suppliers.count >= 0 && suppliers.credits_per_year >= 0, "suppliers counts must be >= 0");
        require(suppliers.breakthrough_count >= 0 && suppliers.breakthrough_count <= suppliers.count,
                "suppliers.breakthrough_count must be in [0, count]");
    }
    require(!suppliers.ask.is_negative() && !suppliers.breakthrough_ask.is_negative(), "supplier asks must be >= 0");
    require(exchange.breakthrough_quota >= 0.0 && exchange.breakthrough_quota <= 1.0, "exchange.breakthrough_quota must be in [0, 1]");
    require(exchange.scc_cap.is_positive(), "exchange.scc_cap must be > 0");
    for (const auto& b : exchange.sponsor_bids) require(b.volume > 0 && !b.price.is_negative(), "exchange.sponsor_bids need price >= 0 and volume > 0");
    require(!baselines.fixed_tax_rate.is_negative(), "baselines.fixed_tax_rate must be >= 0");
    require(baselines.reserve_rate >= 0.0, "baselines.reserve_rate must be >= 0");
    require(baselines.reserve_window >= 1, "baselines.reserve_window must be >= 1");
    require(baselines.gdp_initial > 0.0 && baselines.gdp_growth > -1.0, "baselines GDP must stay positive");
    require(baselines.vpdollar_revenue_per_tonne.is_positive(), "baselines.vpdollar_revenue_per_tonne must be > 0");
    require(baselines.vpdollar_bid_spread >= 0.0, "baselines.vpdollar_bid_spread must be >= 0");
}

ScenarioConfig parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        config_error(std::string("scenario JSON: ") + e.what());
    }
    ScenarioConfig c;
    try {
        Fields f(j, "scenario");
        f.need("schema_version", c.schema_version);
        f.get("name", c.name);
        f.need("mechanism", c.mechanism);
        f.need("world", c.world);
        f.get("agency", c.agency);
        f.need("years", c.years);
        f.get("cap_horizon", c.cap_horizon);
        f.get("solvency_k", c.solvency_k);
        f.get("polluters", c.polluters);
        f.get("insurers", c.insurers);
        f.get("suppliers", c.suppliers);
        f.get("exchange", c.exchange);
        f.get("baselines", c.baselines);
        f.get("seeds", c.seeds);
        f.finish();
    } catch (const json::exception& e) {
        config_error(std::string("scenario JSON: ") + e.what());
    }
    c.validate();
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string serialize_scenario(const ScenarioConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["name"] = c.name;
    j["mechanism"] = to_string(c.mechanism);
    j["world"] = {{"a2", c.world.a2}, {"a4", c.world.a4}, {"onset_delay", c.world.onset_delay},
                  {"sigma", c.world.sigma}, {"horizon_T", c.world.horizon_T}, {"discount_r", c.world.discount_r}};
    j["agency"] = {{"model", to_json(c.agency.model)},
                   {"innovation", to_json(c.agency.innovation)},
                   {"window_n", c.agency.window_n},
                   {"settlement_view", c.agency.view == SettlementView::present_value ? "present-value" : "nominal"}};
    j["years"] = c.years;
    j["cap_horizon"] = c.cap_horizon;
    j["solvency_k"] = c.solvency_k;
    j["polluters"] = {{"count", c.polluters.count}, {"tonnes_per_year", c.polluters.tonnes_per_year},
                      {"default_hazard", c.polluters.default_hazard}, {"initial_cash", money(c.polluters.initial_cash)},
                      {"bids", to_json(c.polluters.bids)}};
    j["insurers"] = json::array();
    for (const auto& i : c.insurers) {
        json supply = json::array();
        for (const auto& [threshold, volume] : i.supply.steps()) supply.push_back({money(threshold), volume});
        j["insurers"].push_back({{"id", i.id}, {"model", to_json(i.model)}, {"innovation", to_json(i.innovation)},
                                 {"cost_margin", money(i.cost_margin)}, {"profit_margin", money(i.profit_margin)},
                                 {"supply", supply}, {"initial_cash", money(i.initial_cash)},
                                 {"default_fund", money(i.default_fund)}});
    }
    j["suppliers"] = {{"count", c.suppliers.count}, {"credits_per_year", c.suppliers.credits_per_year},
                      {"ask", money(c.suppliers.ask)}, {"ask_step", money(c.suppliers.ask_step)},
                      {"breakthrough_count", c.suppliers.breakthrough_count},
                      {"breakthrough_ask", money(c.suppliers.breakthrough_ask)}};
    j["exchange"] = {{"initial_cash", money(c.exchange.initial_cash)},
                     {"adjustment_floor", c.exchange.adjustment_floor ? money(*c.exchange.adjustment_floor) : json(nullptr)},
                     {"breakthrough_quota", c.exchange.breakthrough_quota}, {"scc_cap", money(c.exchange.scc_cap)},
                     {"sponsor_bids", to_json(c.exchange.sponsor_bids)}, {"sponsor_cash", money(c.exchange.sponsor_cash)}};
    j["baselines"] = {{"fixed_tax_rate", money(c.baselines.fixed_tax_rate)},
                      {"reserve_rate", c.baselines.reserve_rate},
                      {"reserve_window", c.baselines.reserve_window},
                      {"gdp_initial", c.baselines.gdp_initial},
                      {"gdp_growth", c.baselines.gdp_growth},
                      {"vpdollar_revenue_per_tonne", money(c.baselines.vpdollar_revenue_per_tonne)},
                      {"vpdollar_bid_spread", c.baselines.vpdollar_bid_spread}};
    j["seeds"] = c.seeds;
    return j.dump(2);
}

}  // namespace retrocarbon
