#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <nlohmann/json.hpp>
#include <thread>

#include "retrocarbon/scenario.hpp"

namespace retrocarbon {

namespace {

using nlohmann::json;

std::string number(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

json number_json(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    return out;
}

void prepare(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());
}

// Mean and sample variance of xs, ignoring NaN entries.
std::pair<double, double> moments(const std::vector<double>& xs) {
    double sum = 0.0;
    std::size_t n = 0;
    for (double x : xs) {
        if (std::isnan(x)) continue;
        sum += x;
        ++n;
    }
    if (n == 0) return {std::nan(""), std::nan("")};
    const double mean = sum / static_cast<double>(n);
    if (n == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) {
        if (!std::isnan(x)) ss += (x - mean) * (x - mean);
    }
    return {mean, ss / static_cast<double>(n - 1)};
}

}  // namespace

void write_run_outputs(const RunResult& result, const std::filesystem::path& dir) {
    prepare(dir);
    const auto& m = result.metrics;
    const std::string prefix = m.scenario + "_s" + std::to_string(m.seed);
    for (const auto& [name, values] : m.series) {
        auto out = open_out(dir / (prefix + "_" + name + ".csv"));
        out << "year,value\n";
        for (std::size_t t = 0; t < values.size(); ++t) out << t << ',' << number(values[t]) << '\n';
    }
    json summary;
    summary["scenario"] = m.scenario;
    summary["seed"] = m.seed;
    summary["years"] = m.years;
    summary["scalars"] = json::object();
    for (const auto& [name, value] : m.scalars) summary["scalars"][name] = number_json(value);
    summary["audit"] = {{"ok", m.audit.ok}, {"entries_checked", m.audit.entries_checked}, {"message", m.audit.message}};
    summary["ledger_entries"] = result.ledger.entries().size();
    summary["contracts"] = result.contracts.size();
    open_out(dir / (prefix + "_summary.json")) << summary.dump(2) << '\n';

    auto ledger = open_out(dir / (prefix + "_ledger.csv"));
    result.ledger.write_csv(ledger);
    auto balances = open_out(dir / (prefix + "_balances.csv"));
    result.ledger.write_balances_csv(balances);
    SettlementReport settlements;
    settlements.lines = result.settlements;
    auto s = open_out(dir / (prefix + "_settlements.csv"));
    settlements.write_csv(s);
    auto e = open_out(dir / (prefix + "_estimates.csv"));
    result.estimates.write_csv(e);
}

SweepReport sweep(const ScenarioConfig& config, const std::vector<std::uint64_t>& seeds, unsigned threads) {
    if (seeds.empty()) throw Error(ErrorCode::config, "sweep needs at least one seed");
    config.validate();
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(seeds.size()));

    std::vector<std::optional<RunMetrics>> runs(seeds.size());
    std::vector<std::exception_ptr> errors(seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            try {
                runs[i] = run_scenario(config, seeds[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const Error& e) {
            throw Error(e.code(), "seed " + std::to_string(seeds[i]) + ": " + e.what());
        } catch (const std::exception& e) {
            throw Error(ErrorCode::domain, "seed " + std::to_string(seeds[i]) + ": " + e.what());
        }
    }

    SweepReport report;
    report.scenario = config.name;
    report.seeds = seeds;
    for (auto& r : runs) report.runs.push_back(std::move(*r));
    const auto& first = report.runs.front();
    for (const auto& [name, values] : first.series) {
        SeriesStats stats;
        std::vector<double> column(report.runs.size());
        for (std::size_t t = 0; t < values.size(); ++t) {
            for (std::size_t i = 0; i < report.runs.size(); ++i) column[i] = report.runs[i].series.at(name)[t];
            const auto [mean, var] = moments(column);
            stats.mean.push_back(mean);
            stats.variance.push_back(var);
        }
        report.series.emplace(name, std::move(stats));
    }
    for (const auto& [name, value] : first.scalars) {
        std::vector<double> column;
        for (const auto& r : report.runs) column.push_back(r.scalars.count(name) ? r.scalars.at(name) : std::nan(""));
        const auto [mean, var] = moments(column);
        report.scalars.emplace(name, SeriesStats{{mean}, {var}});
    }
    return report;
}

void write_sweep_outputs(const SweepReport& report, const std::filesystem::path& dir) {
    prepare(dir);
    const std::string prefix = report.scenario + "_sweep";
    for (const auto& [name, stats] : report.series) {
        auto out = open_out(dir / (prefix + "_" + name + ".csv"));
        out << "year,mean,variance,n\n";
        for (std::size_t t = 0; t < stats.mean.size(); ++t) {
            out << t << ',' << number(stats.mean[t]) << ',' << number(stats.variance[t]) << ',' << report.seeds.size() << '\n';
        }
    }
    json summary;
    summary["scenario"] = report.scenario;
    summary["seeds"] = report.seeds;
    summary["scalars"] = json::object();
    for (const auto& [name, stats] : report.scalars) {
        summary["scalars"][name] = {{"mean", number_json(stats.mean.at(0))}, {"variance", number_json(stats.variance.at(0))}};
    }
    bool all_ok = true;
    for (const auto& r : report.runs) all_ok = all_ok && r.audit.ok;
    summary["audits_ok"] = all_ok;
    open_out(dir / (prefix + "_summary.json")) << summary.dump(2) << '\n';
}

}  // namespace retrocarbon
