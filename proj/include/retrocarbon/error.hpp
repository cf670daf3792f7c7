#pragma once

#include <stdexcept>
#include <string>

namespace retrocarbon {

enum class ErrorCode {
    domain,            // argument outside the operation's domain (e.g. period < vintage)
    horizon,           // period beyond the world horizon
    data_gap,          // a required measurement is missing
    sequencing,        // adjustment inputs are not consecutive estimates of one vintage
    window,            // not enough history for the requested window
    agency_coverage,   // release does not cover an active vintage
    lifecycle,         // settlement on a matured or defaulted contract
    purchasability,    // buyer bid targets an uninsured credit
    singularity,       // rank-deficient design matrix
    ledger,            // unknown account, non-positive amount, self transfer
    overflow,          // fixed-point arithmetic overflow
    config,            // scenario configuration invalid
    audit,             // ledger audit failure
    io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace retrocarbon
