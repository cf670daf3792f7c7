#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "retrocarbon/money.hpp"

namespace retrocarbon {

enum class Reason : std::uint8_t {
    initial_tax,
    adjustment,
    premium,
    swap_leg,
    refund,
    reserve,
    trade,
    shortfall,
    bailout_loss,
};

const char* to_string(Reason r);
std::optional<Reason> parse_reason(std::string_view text);

struct AccountId {
    std::uint32_t value = 0;
    friend bool operator==(AccountId, AccountId) = default;
};

struct Account {
    std::string id;
    std::string owner;  // agent id or system role
    Money initial;
    Money balance;
};

// `debit` is the paying account, `credit` the receiving one. The *_after
// fields snapshot both balances so an audit can point at the exact entry where
// a stream diverges.
struct LedgerEntry {
    std::uint64_t seq = 0;
    Year time = 0;
    AccountId debit;
    AccountId credit;
    Money amount;
    Reason reason = Reason::trade;
    Money debit_after;
    Money credit_after;
};

class Ledger {
public:
    AccountId open(std::string id, std::string owner, Money initial = {});
    std::optional<AccountId> find(std::string_view id) const;
    AccountId at(std::string_view id) const;

    // Moves `amount` (> 0) from `debit` to `credit`.
    const LedgerEntry& post(Year time, AccountId debit, AccountId credit, Money amount, Reason reason);

    // Signed helper: positive moves payer -> payee, negative payee -> payer,
    // zero posts nothing. Returns the number of entries posted.
    int transfer(Year time, AccountId payer, AccountId payee, Money signed_amount, Reason reason);

    Money balance(AccountId id) const;
    Money total() const;
    Money initial_total() const { return initial_total_; }

    const Account& account(AccountId id) const;
    std::span<const Account> accounts() const { return accounts_; }
    std::span<const LedgerEntry> entries() const { return entries_; }

    // seq, time, debit, credit, amount_micro, reason
    void write_csv(std::ostream& out) const;
    // id, owner, initial_micro, final_micro
    void write_balances_csv(std::ostream& out) const;

private:
    std::vector<Account> accounts_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::vector<LedgerEntry> entries_;
    Money initial_total_;
    Money total_;
};

struct AuditReport {
    bool ok = true;
    std::optional<std::uint64_t> first_bad_seq;
    std::string message;
    std::size_t entries_checked = 0;
};

// Replays `entries` from the initial balances and checks sequencing, entry
// validity, per-entry balance snapshots, final balances and conservation.
AuditReport audit(std::span<const Account> accounts, std::span<const LedgerEntry> entries);
AuditReport audit(const Ledger& ledger);

// Audit of an exported entry stream. Without balances the stream is replayed
// from zero; with a balances file the replay starts from its initial column
// and must end at its final column.
AuditReport audit_csv(std::istream& ledger_csv, std::istream* balances_csv);

}  // namespace retrocarbon
