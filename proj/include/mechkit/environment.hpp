#pragma once

#include "mechkit/value.hpp"

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace mechkit {

/// Finite option space identified by dense indices 0..count-1.
struct TabularOptions {
    std::size_t count = 0;
};

/// Continuous option space: points of the closed interval [lo, hi].
struct LineOptions {
    Value lo;
    Value hi;
};

using OptionSpace = std::variant<TabularOptions, LineOptions>;

/// Option identifier: dense index for tabular spaces, exact coordinate on a line.
/// std::variant ordering (index first, then value) gives a total deterministic order.
using OptionId = std::variant<std::size_t, Value>;

std::string option_label(const OptionId& option);

/// Concave parabola valuation v(x) = -a*(x - b)^2 - c with a > 0.
struct QuadraticValuation {
    Value a;
    Value b;
    Value c;
};

/// A type: the valuation function an agent may report. Tabular environments use a
/// length-m vector (entry per option); line environments use a quadratic profile.
using Valuation = std::variant<std::vector<Value>, QuadraticValuation>;

/// Agents, option space and per-agent finite type domains. Immutable after
/// construction by convention; every operation takes it by const reference.
struct Environment {
    OptionSpace options;
    std::vector<std::vector<Valuation>> domains;  // domains[agent][type]

    std::size_t agent_count() const { return domains.size(); }
    std::size_t domain_size(std::size_t agent) const { return domains[agent].size(); }
    bool tabular() const { return std::holds_alternative<TabularOptions>(options); }
    /// Tabular option count; throws InputError on line environments.
    std::size_t option_count() const;
};

/// One reported type index per agent.
struct TypeProfile {
    std::vector<std::size_t> types;

    friend bool operator==(const TypeProfile&, const TypeProfile&) = default;
};

/// Selected option, per-agent payments from the broker (negative = agent pays),
/// the induced utilities and the broker's total budget.
struct MechanismOutcome {
    OptionId option;
    std::vector<Value> payments;
    std::vector<Value> utilities;
    Value budget;
};

/// Evaluates one type at one option: v(X).
Value valuation_at(const Environment& env, const Valuation& type, const OptionId& option);
Value valuation_at(const Environment& env, std::size_t agent, std::size_t type_index,
                   const OptionId& option);

/// Total welfare of `option` under `profile`: the sum of all agents' valuations.
Value social_welfare(const Environment& env, const TypeProfile& profile, const OptionId& option);

/// Packages payments into an outcome; budget and utilities follow from the inputs.
MechanismOutcome assemble_outcome(const Environment& env, const TypeProfile& profile,
                                  const OptionId& option, std::vector<Value> payments);

/// Structural checks. Returns one message per violated invariant (empty = well formed).
/// Violations are data, not errors.
std::vector<std::string> validate_environment(const Environment& env);

/// Throws InputError if the environment has structural violations.
void require_valid_environment(const Environment& env);

/// Throws InputError on any out-of-range type index.
void require_valid_profile(const Environment& env, const TypeProfile& profile);

/// Throws InputError if `option` does not belong to the environment's option space.
void require_valid_option(const Environment& env, const OptionId& option);

// -- Profile enumeration ------------------------------------------------------
//
// Profiles are ranked in mixed-radix order with agent 0 as the most significant
// digit, so rank 0 is the all-first-types profile and neighbouring ranks differ
// in the last agent's type.

/// Number of profiles (product of domain sizes). Throws CapacityError when the
/// product exceeds `cap`.
std::size_t profile_count(const Environment& env, std::size_t cap);

std::size_t profile_rank(const Environment& env, const TypeProfile& profile);
TypeProfile profile_at(const Environment& env, std::size_t rank);

}  // namespace mechkit
