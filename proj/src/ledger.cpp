#include "retrocarbon/ledger.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "csv.hpp"

namespace retrocarbon {

namespace {

constexpr const char* reason_names[] = {
    "initial-tax", "adjustment", "premium", "swap-leg", "refund", "reserve", "trade", "shortfall", "bailout-loss",
};

}  // namespace

const char* to_string(Reason r) { return reason_names[static_cast<std::size_t>(r)]; }

std::optional<Reason> parse_reason(std::string_view text) {
    for (std::size_t i = 0; i < std::size(reason_names); ++i) {
        if (text == reason_names[i]) return static_cast<Reason>(i);
    }
    return std::nullopt;
}

AccountId Ledger::open(std::string id, std::string owner, Money initial) {
    if (index_.count(id)) throw Error(ErrorCode::ledger, "account '" + id + "' already exists");
    const auto idx = static_cast<std::uint32_t>(accounts_.size());
    index_.emplace(id, idx);
    accounts_.push_back(Account{std::move(id), std::move(owner), initial, initial});
    initial_total_ += initial;
    total_ += initial;
    return AccountId{idx};
}

std::optional<AccountId> Ledger::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return AccountId{it->second};
}

AccountId Ledger::at(std::string_view id) const {
    auto found = find(id);
    if (!found) throw Error(ErrorCode::ledger, "unknown account '" + std::string(id) + "'");
    return *found;
}

const Account& Ledger::account(AccountId id) const {
    if (id.value >= accounts_.size()) throw Error(ErrorCode::ledger, "unknown account #" + std::to_string(id.value));
    return accounts_[id.value];
}

const LedgerEntry& Ledger::post(Year time, AccountId debit, AccountId credit, Money amount, Reason reason) {
    if (debit.value >= accounts_.size() || credit.value >= accounts_.size()) {
        throw Error(ErrorCode::ledger, "entry references an unknown account");
    }
    if (debit == credit) throw Error(ErrorCode::ledger, "debit and credit accounts must differ");
    if (!amount.is_positive()) throw Error(ErrorCode::ledger, "entry amount must be positive, got " + amount.to_string());

    auto& from = accounts_[debit.value];
    auto& to = accounts_[credit.value];
    // Compute both before mutating so an overflow leaves the ledger untouched.
    const Money from_after = from.balance - amount;
    const Money to_after = to.balance + amount;
    from.balance = from_after;
    to.balance = to_after;
    entries_.push_back(LedgerEntry{entries_.size() + 1, time, debit, credit, amount, reason, from_after, to_after});
    return entries_.back();
}

int Ledger::transfer(Year time, AccountId payer, AccountId payee, Money signed_amount, Reason reason) {
    if (signed_amount.is_zero()) return 0;
    if (signed_amount.is_positive()) {
        post(time, payer, payee, signed_amount, reason);
    } else {
        post(time, payee, payer, -signed_amount, reason);
    }
    return 1;
}

Money Ledger::balance(AccountId id) const { return account(id).balance; }

Money Ledger::total() const {
    Money sum;
    for (const auto& a : accounts_) sum += a.balance;
    return sum;
}

void Ledger::write_csv(std::ostream& out) const {
    out << "seq,time,debit,credit,amount_micro,reason\n";
    for (const auto& e : entries_) {
        out << e.seq << ',' << e.time << ',' << csv::quote(accounts_[e.debit.value].id) << ','
            << csv::quote(accounts_[e.credit.value].id) << ',' << e.amount.micro() << ',' << to_string(e.reason) << '\n';
    }
}

void Ledger::write_balances_csv(std::ostream& out) const {
    out << "id,owner,initial_micro,final_micro\n";
    for (const auto& a : accounts_) {
        out << csv::quote(a.id) << ',' << csv::quote(a.owner) << ',' << a.initial.micro() << ',' << a.balance.micro() << '\n';
    }
}

AuditReport audit(std::span<const Account> accounts, std::span<const LedgerEntry> entries) {
    AuditReport report;
    std::vector<Money> replay;
    replay.reserve(accounts.size());
    Money initial_total;
    for (const auto& a : accounts) {
        replay.push_back(a.initial);
        initial_total += a.initial;
    }
    auto fail = [&](std::optional<std::uint64_t> seq, std::string msg) {
        report.ok = false;
        report.first_bad_seq = seq;
        report.message = std::move(msg);
        return report;
    };

    std::uint64_t last_seq = 0;
    for (const auto& e : entries) {
        ++report.entries_checked;
        const std::string at = "seq " + std::to_string(e.seq) + ": ";
        if (e.seq <= last_seq) return fail(e.seq, at + "sequence number not strictly increasing");
        last_seq = e.seq;
        if (e.debit.value >= replay.size() || e.credit.value >= replay.size()) return fail(e.seq, at + "unknown account");
        if (e.debit == e.credit) return fail(e.seq, at + "debit equals credit");
        if (!e.amount.is_positive()) return fail(e.seq, at + "non-positive amount");
        replay[e.debit.value] -= e.amount;
        replay[e.credit.value] += e.amount;
        if (replay[e.debit.value] != e.debit_after || replay[e.credit.value] != e.credit_after) {
            return fail(e.seq, at + "replayed balance differs from recorded balance");
        }
    }
    Money live_total;
    for (std::size_t i = 0; i < accounts.size(); ++i) {
        if (replay[i] != accounts[i].balance) {
            return fail(std::nullopt, "account '" + accounts[i].id + "' live balance " + accounts[i].balance.to_string() +
                                          " differs from replay " + replay[i].to_string());
        }
        live_total += accounts[i].balance;
    }
    if (live_total != initial_total) return fail(std::nullopt, "conservation violated");
    report.message = "ok";
    return report;
}

AuditReport audit(const Ledger& ledger) { return audit(ledger.accounts(), ledger.entries()); }

AuditReport audit_csv(std::istream& ledger_csv, std::istream* balances_csv) {
    AuditReport report;
    auto fail = [&](std::optional<std::uint64_t> seq, std::string msg) {
        report.ok = false;
        report.first_bad_seq = seq;
        report.message = std::move(msg);
        return report;
    };

    std::map<std::string, Money> balance;
    std::map<std::string, Money> expected_final;
    const bool closed = balances_csv != nullptr;
    Money initial_total;
    if (closed) {
        csv::Reader reader(*balances_csv);
        if (!reader.expect_header({"id", "owner", "initial_micro", "final_micro"})) {
            return fail(std::nullopt, "balances file: unexpected header");
        }
        std::vector<std::string> row;
        while (reader.next(row)) {
            if (row.size() != 4) return fail(std::nullopt, "balances file: malformed row");
            try {
                const Money initial = Money::from_micro(std::stoll(row[2]));
                balance[row[0]] = initial;
                expected_final[row[0]] = Money::from_micro(std::stoll(row[3]));
                initial_total += initial;
            } catch (const std::exception&) {
                return fail(std::nullopt, "balances file: malformed number");
            }
        }
    }

    csv::Reader reader(ledger_csv);
    if (!reader.expect_header({"seq", "time", "debit", "credit", "amount_micro", "reason"})) {
        return fail(std::nullopt, "ledger file: unexpected header");
    }
    std::vector<std::string> row;
    std::uint64_t last_seq = 0;
    while (reader.next(row)) {
        ++report.entries_checked;
        if (row.size() != 6) return fail(std::nullopt, "ledger file: malformed row " + std::to_string(report.entries_checked));
        std::uint64_t seq = 0;
        std::int64_t amount = 0;
        try {
            seq = std::stoull(row[0]);
            (void)std::stol(row[1]);
            amount = std::stoll(row[4]);
        } catch (const std::exception&) {
            return fail(std::nullopt, "ledger file: malformed number in row " + std::to_string(report.entries_checked));
        }
        const std::string at = "seq " + std::to_string(seq) + ": ";
        if (seq <= last_seq) return fail(seq, at + "sequence number not strictly increasing");
        last_seq = seq;
        if (row[2] == row[3]) return fail(seq, at + "debit equals credit");
        if (amount <= 0) return fail(seq, at + "non-positive amount");
        if (!parse_reason(row[5])) return fail(seq, at + "unknown reason '" + row[5] + "'");
        if (closed && (!balance.count(row[2]) || !balance.count(row[3]))) return fail(seq, at + "unknown account");
        balance[row[2]] -= Money::from_micro(amount);
        balance[row[3]] += Money::from_micro(amount);
    }
    Money total;
    for (const auto& [id, b] : balance) {
        total += b;
        if (closed && expected_final.at(id) != b) {
            return fail(std::nullopt, "account '" + id + "' final balance " + expected_final.at(id).to_string() +
                                          " differs from replay " + b.to_string());
        }
    }
    if (total != initial_total) return fail(std::nullopt, "conservation violated");
    report.message = "ok";
    return report;
}

}  // namespace retrocarbon
