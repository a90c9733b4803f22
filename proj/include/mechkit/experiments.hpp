#pragma once

#include "mechkit/spm.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mechkit {

/// An environment size: either pinned, or drawn per instance from {1, ..., max}.
struct SizeSpec {
    enum class Kind { Fixed, Uniform };

    Kind kind = Kind::Fixed;
    std::size_t value = 1;  // the fixed size, or the inclusive upper bound

    static SizeSpec fixed(std::size_t v) { return {Kind::Fixed, v}; }
    static SizeSpec uniform_up_to(std::size_t v) { return {Kind::Uniform, v}; }
};

/// Random-instance study comparing the shortest-path payments against the VCG
/// budget pivot. Each size is specified or drawn per instance; one axis may
/// additionally sweep over 1..to, pinning that size per point. Defaults mirror
/// the headline setting (16 agents, options drawn up to 256, domains drawn up
/// to 16, integer values on [-100, 100]).
struct ExperimentConfig {
    enum class Param { Agents, Options, DomainSize };
    struct Sweep {
        Param param = Param::Agents;
        std::size_t from = 1;
        std::size_t to = 1;
    };

    std::uint64_t seed = 0;
    std::size_t instances = 1000;
    SizeSpec agents = SizeSpec::fixed(16);
    SizeSpec options = SizeSpec::uniform_up_to(256);
    SizeSpec domain_size = SizeSpec::uniform_up_to(16);
    long long value_lo = -100;
    long long value_hi = 100;
    std::optional<Sweep> sweep;
    /// Exhaustively audit truthfulness/participation of every audit_every-th
    /// instance whose profile space is at most 10^4 (0 disables).
    std::size_t audit_every = 50;
    unsigned jobs = 0;  // 0 = hardware concurrency
};

void validate_config(const ExperimentConfig& config);

/// Environment plus reported profile, fully determined by (config.seed, index).
/// Draw order: sizes (agents, then options, then domain size, where not fixed);
/// valuations agent-major, type-major, option-minor; then the profile, one type
/// index per agent. All domains share one size.
std::pair<Environment, TypeProfile> generate_instance(const ExperimentConfig& config,
                                                      std::uint64_t instance_index);

struct BudgetComparison {
    Value budget_proposed;
    Value budget_vcg_budget;
    Value diff;  // proposed - vcg_budget, never positive
};

/// Runs both mechanisms over a common rule and compares budgets. The dominance
/// inequalities (payments pointwise, budgets, and the Clarke chain on
/// non-negative environments) are asserted on every call; a violation throws
/// std::logic_error since it would mean the engine itself is wrong.
BudgetComparison compare_budgets(const Environment& env, const TypeProfile& profile,
                                 const OptionRule& rule);

struct InstanceRecord {
    std::uint64_t instance;
    std::size_t agents;
    std::size_t options;
    std::size_t domain_size;
    long long value_lo;
    long long value_hi;
    Value budget_proposed;
    Value budget_vcg_budget;
    Value diff;
};

struct ComparisonStats {
    std::vector<Value> diffs;
    std::size_t count = 0;
    std::size_t strict_count = 0;
    Value mean_diff;
    Value variance_biased;  // exact; the square root happens at display time

    Value fraction_strict() const;
    double stddev_diff() const;
};

struct ExperimentResult {
    struct Point {
        std::optional<std::size_t> x;  // swept value; empty for single-point runs
        ComparisonStats stats;
        double max_instance_seconds = 0.0;
    };

    std::vector<InstanceRecord> rows;
    std::vector<Point> points;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// CSV with header instance,n,m,d,lo,hi,budget_proposed,budget_vcgb,diff;
/// rationals rendered canonically, so equal configs give byte-equal output.
std::string to_csv(const ExperimentResult& result);

/// One JSON object per point: {x, mean_diff, stddev_diff, fraction_strict, count}.
std::string summary_json(const ExperimentResult& result);

/// Single-item auction over a descending price ladder: n agents, n allocation
/// options, type k of agent i worth p_k to i and 0 to everyone else. `bids`
/// gives each agent's reported price index.
std::pair<Environment, TypeProfile> vickrey_instance(const std::vector<Value>& prices,
                                                     const std::vector<std::size_t>& bids);

/// Venue-location environment on a line segment: each type is a quadratic
/// travel-cost profile (a, b, c).
Environment venue_instance(const std::vector<std::vector<QuadraticValuation>>& params,
                           const Value& lo, const Value& hi);

}  // namespace mechkit
