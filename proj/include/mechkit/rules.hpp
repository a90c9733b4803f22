#pragma once

#include "mechkit/environment.hpp"

#include <cstddef>
#include <memory>
#include <vector>

namespace mechkit {

/// Resolves a set-valued welfare argmax to a single option.
/// An Explicit table must pick an option inside the argmax set at every profile;
/// that contract is not enforced at selection time and surfaces in check_se.
class TieBreak {
public:
    enum class Policy { LowestIndex, HighestIndex, Explicit };

    TieBreak() = default;

    static TieBreak lowest() { return TieBreak(); }
    static TieBreak highest();
    /// `by_rank` maps profile rank (see profile_rank) to the option to pick.
    static TieBreak explicit_table(std::vector<OptionId> by_rank);

    Policy policy() const { return policy_; }
    const std::vector<OptionId>& table() const;

    /// Picks one option out of a non-empty candidate set (ascending option order).
    OptionId pick(const std::vector<OptionId>& candidates, std::size_t profile_rank) const;

private:
    Policy policy_ = Policy::LowestIndex;
    std::shared_ptr<const std::vector<OptionId>> table_;
};

/// Weights of an affine-maximizing rule: per-agent multipliers (all > 0) plus a
/// per-option bias.
struct AffineWeights {
    std::vector<Value> agent_weights;
    std::vector<Value> option_weights;
};

/// All options maximizing social welfare at `profile`, in ascending index order.
std::vector<OptionId> se_argmax_set(const Environment& env, const TypeProfile& profile);

/// Welfare-maximizing option (tabular spaces; line spaces route through
/// quadratic_select, where the maximizer is unique).
OptionId se_select(const Environment& env, const TypeProfile& profile,
                   const TieBreak& tie_break = TieBreak::lowest());

/// Option maximizing sum_i w_i v_i(X) + lambda(X). Tabular spaces only.
OptionId affine_select(const Environment& env, const AffineWeights& weights,
                       const TypeProfile& profile, const TieBreak& tie_break = TieBreak::lowest());

/// Unique welfare maximizer of a line environment:
/// clamp of the a-weighted mean of the b parameters onto [lo, hi].
Value quadratic_select(const Environment& env, const TypeProfile& profile);

/// Deterministic, memoized option rule. A rule instance is bound to the single
/// environment it is evaluated against: the memo is keyed by profile only.
/// The memo tolerates concurrent lookups and idempotent concurrent inserts.
class OptionRule {
public:
    enum class Family { SocialEfficiency, Affine, Table };

    static OptionRule se(TieBreak tie_break = TieBreak::lowest());
    static OptionRule affine(AffineWeights weights, TieBreak tie_break = TieBreak::lowest());
    /// Explicit profile-rank table; the only family that may violate social efficiency.
    static OptionRule table(const Environment& env, std::vector<OptionId> by_rank);

    OptionId select(const Environment& env, const TypeProfile& profile) const;

    Family family() const { return family_; }
    const TieBreak& tie_break() const { return tie_break_; }
    /// Non-null for the Affine family.
    const AffineWeights* affine_weights() const { return weights_.get(); }
    /// Non-null for the Table family.
    const std::vector<OptionId>* table_entries() const;

private:
    OptionRule() = default;

    Family family_ = Family::SocialEfficiency;
    TieBreak tie_break_;
    std::shared_ptr<const AffineWeights> weights_;
    std::shared_ptr<const std::vector<OptionId>> table_;
    std::vector<std::size_t> table_radices_;  // domain sizes the table was built for

    struct Memo;
    std::shared_ptr<Memo> memo_;
};

/// Every social-efficiency-satisfying option rule of a tabular environment, as
/// explicit tables in mixed-radix order over the per-profile argmax sets (last
/// profile varies fastest). Throws CapacityError when the product of argmax-set
/// sizes exceeds `cap`.
std::vector<OptionRule> enumerate_se_rules(const Environment& env, std::size_t cap);

enum class BudgetAggregator {
    ExpectedBudgetUniform,  // mean budget over all profiles, uniform weights
    MaxBudget,              // worst-case budget over all profiles
};

struct OptimizedRule {
    OptionRule rule;
    Value aggregate;       // minimized aggregate over the enumerated rules
    std::size_t rule_index;  // position in the enumerate_se_rules order
};

/// Exhaustive search over enumerate_se_rules for the rule whose shortest-path
/// payments minimize the aggregate. Ties in the aggregate are broken by the
/// lexicographically smallest per-profile budget vector, then enumeration order.
OptimizedRule optimize_option_rule(const Environment& env, BudgetAggregator aggregator,
                                   std::size_t cap);

}  // namespace mechkit
