#pragma once

#include "mechkit/spm.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace mechkit {

enum class ViolationKind { SE, DSIC, IR, Dominance };

/// Witness of one violated inequality; lhs and rhs reproduce it exactly.
struct Violation {
    ViolationKind kind;
    std::optional<std::size_t> agent;
    TypeProfile profile;
    std::optional<std::size_t> deviation;  // type index, DSIC only
    Value lhs;
    Value rhs;
};

/// Payment rule under audit, already bound to its environment and option rule.
using PaymentFn = std::function<std::vector<Value>(const TypeProfile&)>;

PaymentFn bind_payments(const Environment& env, const OptionRule& rule, const PaymentSpec& spec);

/// Checks are exhaustive over all profiles (and deviations); they are guarded by
/// a profile cap and report violations in profile-rank order.
inline constexpr std::size_t kAuditProfileCap = 1000000;

/// Empty iff the rule picks a welfare-maximizing option at every profile.
std::vector<Violation> check_se(const Environment& env, const OptionRule& rule,
                                std::size_t profile_cap = kAuditProfileCap);

/// Empty iff no agent can gain by a unilateral misreport at any profile:
/// u_i(v) >= v_i(phi(v_i', v_{-i})) + tau_i(v_i', v_{-i}).
std::vector<Violation> check_dsic(const Environment& env, const OptionRule& rule,
                                  const PaymentFn& payments,
                                  std::size_t profile_cap = kAuditProfileCap);
std::vector<Violation> check_dsic(const Environment& env, const OptionRule& rule,
                                  const PaymentSpec& spec,
                                  std::size_t profile_cap = kAuditProfileCap);

/// Empty iff every agent's utility is non-negative at every profile.
std::vector<Violation> check_ir(const Environment& env, const OptionRule& rule,
                                const PaymentFn& payments,
                                std::size_t profile_cap = kAuditProfileCap);
std::vector<Violation> check_ir(const Environment& env, const OptionRule& rule,
                                const PaymentSpec& spec,
                                std::size_t profile_cap = kAuditProfileCap);

/// Largest amount the broker can charge agent `agent` (i.e. the maximum of
/// -tau_i) subject to the full truthfulness + participation constraint system,
/// found by enumerating every simple source-to-type path in the deviation
/// structure and taking the minimum length. Shares no solver code with
/// shortest_distance; domains are capped at 8 types.
Value oracle_min_payment(const Environment& env, const OptionRule& rule, std::size_t agent,
                         const TypeProfile& profile);

/// Per-profile comparison of the shortest-path payments against the VCG budget
/// pivot (and the Clarke pivot when every valuation is non-negative).
struct DominanceReport {
    std::vector<Value> budget_diffs;  // per profile rank: B_proposed - B_vcg_budget
    std::size_t strict_improvements = 0;
    bool clarke_compared = false;
    std::vector<Violation> violations;  // empty when the dominance inequalities hold
};

DominanceReport check_dominance(const Environment& env, const OptionRule& rule,
                                std::size_t profile_cap = kAuditProfileCap);

/// True when every valuation of every type is >= 0 (tabular environments).
bool all_types_non_negative(const Environment& env);

}  // namespace mechkit
