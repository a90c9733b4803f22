#pragma once

#include "mechkit/rules.hpp"

#include <vector>

namespace mechkit {

/// Clarke pivot payments: tau_i = sum_{j != i} v_j(phi(v)) - max_X sum_{j != i} v_j(X).
/// Every payment is <= 0. Tabular environments only (the pivot maximum enumerates
/// the option list); the rule must satisfy social efficiency.
std::vector<Value> clarke_payments(const Environment& env, const OptionRule& rule,
                                   const TypeProfile& profile);

/// Budget-optimal VCG pivot: tau_i = sum_{j != i} v_j(phi(v))
/// - min_{v_i'} max_X S(X; v_i', v_{-i}). Individually rational on every
/// environment, and pointwise below any individually rational VCG payment.
/// The inner max is evaluated as the welfare at the rule's selection, which
/// requires the rule to satisfy social efficiency.
std::vector<Value> vcg_budget_payments(const Environment& env, const OptionRule& rule,
                                       const TypeProfile& profile);

enum class WeightedPivot {
    /// Clarke-style pivot of the affine-maximizer auction:
    /// h_i = (1/w_i) max_X (sum_{j != i} w_j v_j(X) + lambda(X)).
    Ama,
    /// Deviation-minimum analog of the budget pivot over the full weighted
    /// objective. Not part of the classical AMA family; provided as the
    /// same-family comparator for weighted dominance checks.
    BudgetAnalog,
};

/// Weighted-VCG payments for a rule in the Affine family; the weights are taken
/// from the rule itself.
std::vector<Value> weighted_vcg_payments(const Environment& env, const OptionRule& rule,
                                         const TypeProfile& profile, WeightedPivot pivot);

}  // namespace mechkit
