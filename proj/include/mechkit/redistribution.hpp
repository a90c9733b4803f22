#pragma once

#include "mechkit/audit.hpp"

#include <cstddef>
#include <vector>

namespace mechkit {

/// Complete payment table over all profiles: payments[profile_rank][agent].
struct PaymentTable {
    std::vector<std::vector<Value>> payments;

    Value budget_at(std::size_t rank) const;

    friend bool operator==(const PaymentTable&, const PaymentTable&) = default;
};

inline constexpr std::size_t kTabulateProfileCap = 1000000;

/// Materializes a payment engine over every profile.
PaymentTable tabulate_mechanism(const Environment& env, const OptionRule& rule,
                                const PaymentSpec& spec,
                                std::size_t profile_cap = kTabulateProfileCap);
PaymentTable tabulate_mechanism(const Environment& env, const OptionRule& rule,
                                const PaymentFn& payments,
                                std::size_t profile_cap = kTabulateProfileCap);

/// Returns surplus to agents one agent at a time, in ascending index order:
/// agent t's payments grow by max{0, min over t's reports of the negative
/// budget}, a rebate independent of t's own report. Truthfulness and
/// participation of the input table are preserved, payments only grow, every
/// budget shrinks toward max{0, B}, and the result is a fixed point.
PaymentTable redistribute(const Environment& env, const PaymentTable& table);

}  // namespace mechkit
