#include "mechkit/rules.hpp"

#include "mechkit/errors.hpp"
#include "mechkit/spm.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <mutex>
#include <unordered_map>
#include <utility>

namespace mechkit {

namespace {

struct ProfileKeyHash {
    std::size_t operator()(const std::vector<std::size_t>& key) const {
        std::size_t h = 1469598103934665603ull;  // FNV-1a
        for (std::size_t x : key) {
            h ^= x + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

void require_positive_weights(const Environment& env, const AffineWeights& weights) {
    if (weights.agent_weights.size() != env.agent_count())
        throw InputError("expected " + std::to_string(env.agent_count()) + " agent weights, got " +
                         std::to_string(weights.agent_weights.size()));
    for (std::size_t i = 0; i < weights.agent_weights.size(); ++i) {
        if (weights.agent_weights[i].sign() <= 0)
            throw InputError("agent weight " + std::to_string(i) + " must be strictly positive");
    }
    if (weights.option_weights.size() != env.option_count())
        throw InputError("expected " + std::to_string(env.option_count()) +
                         " option weights, got " + std::to_string(weights.option_weights.size()));
}

}  // namespace

TieBreak TieBreak::highest() {
    TieBreak tb;
    tb.policy_ = Policy::HighestIndex;
    return tb;
}

TieBreak TieBreak::explicit_table(std::vector<OptionId> by_rank) {
    TieBreak tb;
    tb.policy_ = Policy::Explicit;
    tb.table_ = std::make_shared<const std::vector<OptionId>>(std::move(by_rank));
    return tb;
}

const std::vector<OptionId>& TieBreak::table() const {
    if (!table_) throw InputError("tie-break has no explicit table");
    return *table_;
}

OptionId TieBreak::pick(const std::vector<OptionId>& candidates, std::size_t profile_rank) const {
    if (candidates.empty()) throw InputError("tie-break over an empty candidate set");
    switch (policy_) {
        case Policy::LowestIndex:
            return candidates.front();
        case Policy::HighestIndex:
            return candidates.back();
        case Policy::Explicit: {
            const auto& entries = table();
            if (profile_rank >= entries.size())
                throw InputError("tie-break table has no entry for profile rank " +
                                 std::to_string(profile_rank));
            return entries[profile_rank];
        }
    }
    throw InputError("unknown tie-break policy");
}

std::vector<OptionId> se_argmax_set(const Environment& env, const TypeProfile& profile) {
    require_valid_profile(env, profile);
    const std::size_t m = env.option_count();
    std::vector<OptionId> best;
    Value best_welfare;
    for (std::size_t x = 0; x < m; ++x) {
        Value welfare;
        for (std::size_t i = 0; i < env.agent_count(); ++i)
            welfare += std::get<std::vector<Value>>(env.domains[i][profile.types[i]])[x];
        if (best.empty() || best_welfare < welfare) {
            best_welfare = welfare;
            best.clear();
            best.push_back(OptionId{x});
        } else if (welfare == best_welfare) {
            best.push_back(OptionId{x});
        }
    }
    return best;
}

OptionId se_select(const Environment& env, const TypeProfile& profile, const TieBreak& tie_break) {
    if (!env.tabular()) return OptionId{quadratic_select(env, profile)};
    const auto candidates = se_argmax_set(env, profile);
    if (candidates.size() == 1) return candidates.front();
    const std::size_t rank =
        tie_break.policy() == TieBreak::Policy::Explicit ? profile_rank(env, profile) : 0;
    return tie_break.pick(candidates, rank);
}

OptionId affine_select(const Environment& env, const AffineWeights& weights,
                       const TypeProfile& profile, const TieBreak& tie_break) {
    if (!env.tabular()) throw InputError("affine rules require a tabular option space");
    require_valid_profile(env, profile);
    require_positive_weights(env, weights);

    const std::size_t m = env.option_count();
    std::vector<OptionId> best;
    Value best_score;
    for (std::size_t x = 0; x < m; ++x) {
        Value score = weights.option_weights[x];
        for (std::size_t i = 0; i < env.agent_count(); ++i)
            score += weights.agent_weights[i] *
                     std::get<std::vector<Value>>(env.domains[i][profile.types[i]])[x];
        if (best.empty() || best_score < score) {
            best_score = score;
            best.clear();
            best.push_back(OptionId{x});
        } else if (score == best_score) {
            best.push_back(OptionId{x});
        }
    }
    if (best.size() == 1) return best.front();
    const std::size_t rank =
        tie_break.policy() == TieBreak::Policy::Explicit ? profile_rank(env, profile) : 0;
    return tie_break.pick(best, rank);
}

Value quadratic_select(const Environment& env, const TypeProfile& profile) {
    const auto* line = std::get_if<LineOptions>(&env.options);
    if (!line) throw InputError("quadratic_select requires a line option space");
    require_valid_profile(env, profile);

    Value weighted_sum;
    Value weight_total;
    for (std::size_t i = 0; i < env.agent_count(); ++i) {
        const auto& quad = std::get<QuadraticValuation>(env.domains[i][profile.types[i]]);
        weighted_sum += quad.a * quad.b;
        weight_total += quad.a;
    }
    const Value unclamped = weighted_sum / weight_total;  // a > 0 keeps the total nonzero
    return max(line->lo, min(line->hi, unclamped));
}

// -- OptionRule ---------------------------------------------------------------

struct OptionRule::Memo {
    mutable std::mutex mutex;
    mutable std::unordered_map<std::vector<std::size_t>, OptionId, ProfileKeyHash> cache;
};

OptionRule OptionRule::se(TieBreak tie_break) {
    OptionRule rule;
    rule.family_ = Family::SocialEfficiency;
    rule.tie_break_ = std::move(tie_break);
    rule.memo_ = std::make_shared<Memo>();
    return rule;
}

OptionRule OptionRule::affine(AffineWeights weights, TieBreak tie_break) {
    OptionRule rule;
    rule.family_ = Family::Affine;
    rule.tie_break_ = std::move(tie_break);
    rule.weights_ = std::make_shared<const AffineWeights>(std::move(weights));
    rule.memo_ = std::make_shared<Memo>();
    return rule;
}

OptionRule OptionRule::table(const Environment& env, std::vector<OptionId> by_rank) {
    const std::size_t profiles = profile_count(env, by_rank.size());
    if (profiles != by_rank.size())
        throw InputError("table rule has " + std::to_string(by_rank.size()) + " entries for " +
                         std::to_string(profiles) + " profiles");
    for (const auto& option : by_rank) require_valid_option(env, option);
    OptionRule rule;
    rule.family_ = Family::Table;
    rule.table_ = std::make_shared<const std::vector<OptionId>>(std::move(by_rank));
    for (std::size_t i = 0; i < env.agent_count(); ++i)
        rule.table_radices_.push_back(env.domain_size(i));
    rule.memo_ = std::make_shared<Memo>();
    return rule;
}

const std::vector<OptionId>* OptionRule::table_entries() const { return table_.get(); }

OptionId OptionRule::select(const Environment& env, const TypeProfile& profile) const {
    {
        std::lock_guard<std::mutex> lock(memo_->mutex);
        const auto it = memo_->cache.find(profile.types);
        if (it != memo_->cache.end()) return it->second;
    }

    OptionId option;
    switch (family_) {
        case Family::SocialEfficiency:
            option = se_select(env, profile, tie_break_);
            break;
        case Family::Affine:
            option = affine_select(env, *weights_, profile, tie_break_);
            break;
        case Family::Table: {
            std::vector<std::size_t> radices;
            for (std::size_t i = 0; i < env.agent_count(); ++i) radices.push_back(env.domain_size(i));
            if (radices != table_radices_)
                throw InputError("table rule was built for a different environment");
            option = (*table_)[profile_rank(env, profile)];
            break;
        }
    }

    std::lock_guard<std::mutex> lock(memo_->mutex);
    memo_->cache.emplace(profile.types, option);
    return option;
}

// -- SE-rule enumeration ------------------------------------------------------

std::vector<OptionRule> enumerate_se_rules(const Environment& env, std::size_t cap) {
    if (!env.tabular()) throw InputError("SE-rule enumeration requires a tabular option space");
    require_valid_environment(env);
    // 10^6 profiles bounds the table size regardless of how small the tie product is.
    const std::size_t profiles = profile_count(env, 1000000);

    std::vector<std::vector<OptionId>> argmax_sets;
    argmax_sets.reserve(profiles);
    boost::multiprecision::cpp_int product = 1;
    for (std::size_t r = 0; r < profiles; ++r) {
        argmax_sets.push_back(se_argmax_set(env, profile_at(env, r)));
        product *= argmax_sets.back().size();
    }
    if (product > cap)
        throw CapacityError("SE rule count " + product.str() + " exceeds cap " + std::to_string(cap),
                            product.str());

    const std::size_t total = static_cast<std::size_t>(product);
    std::vector<OptionRule> rules;
    rules.reserve(total);
    std::vector<std::size_t> digits(profiles, 0);
    for (std::size_t k = 0; k < total; ++k) {
        std::vector<OptionId> by_rank(profiles);
        for (std::size_t r = 0; r < profiles; ++r) by_rank[r] = argmax_sets[r][digits[r]];
        rules.push_back(OptionRule::table(env, std::move(by_rank)));
        for (std::size_t r = profiles; r-- > 0;) {  // last profile varies fastest
            if (++digits[r] < argmax_sets[r].size()) break;
            digits[r] = 0;
        }
    }
    return rules;
}

OptimizedRule optimize_option_rule(const Environment& env, BudgetAggregator aggregator,
                                   std::size_t cap) {
    const auto rules = enumerate_se_rules(env, cap);
    const std::size_t profiles = profile_count(env, 1000000);

    std::optional<std::size_t> best_index;
    Value best_aggregate;
    std::vector<Value> best_budgets;
    for (std::size_t k = 0; k < rules.size(); ++k) {
        std::vector<Value> budgets;
        budgets.reserve(profiles);
        for (std::size_t r = 0; r < profiles; ++r) {
            const auto profile = profile_at(env, r);
            Value budget;
            for (const auto& payment : compute_payments(env, rules[k], profile)) budget += payment;
            budgets.push_back(budget);
        }
        Value aggregate;
        if (aggregator == BudgetAggregator::MaxBudget) {
            aggregate = budgets.front();
            for (const auto& b : budgets) aggregate = max(aggregate, b);
        } else {
            for (const auto& b : budgets) aggregate += b;
            aggregate /= Value(static_cast<long long>(profiles));
        }
        const bool better = !best_index || aggregate < best_aggregate ||
                            (aggregate == best_aggregate && budgets < best_budgets);
        if (better) {
            best_index = k;
            best_aggregate = aggregate;
            best_budgets = std::move(budgets);
        }
    }
    return OptimizedRule{rules[*best_index], best_aggregate, *best_index};
}

}  // namespace mechkit
