#include "mechkit/vcg.hpp"

#include "mechkit/errors.hpp"

namespace mechkit {

namespace {

void require_tabular_welfare_rule(const Environment& env, const OptionRule& rule,
                                  const TypeProfile& profile) {
    if (!env.tabular())
        throw InputError("VCG pivots are unsupported on line option spaces");
    if (rule.family() == OptionRule::Family::Affine)
        throw InputError("rule is an affine maximizer; use weighted_vcg_payments");
    require_valid_profile(env, profile);
}

// max_X sum_{j != i} v_j(X) over the tabular option list.
Value peers_best_welfare(const Environment& env, const TypeProfile& profile, std::size_t agent) {
    const std::size_t m = env.option_count();
    Value best;
    bool first = true;
    for (std::size_t x = 0; x < m; ++x) {
        Value welfare;
        for (std::size_t j = 0; j < env.agent_count(); ++j) {
            if (j == agent) continue;
            welfare += std::get<std::vector<Value>>(env.domains[j][profile.types[j]])[x];
        }
        if (first || best < welfare) {
            best = welfare;
            first = false;
        }
    }
    return best;
}

}  // namespace

std::vector<Value> clarke_payments(const Environment& env, const OptionRule& rule,
                                   const TypeProfile& profile) {
    require_tabular_welfare_rule(env, rule, profile);
    const OptionId chosen = rule.select(env, profile);

    std::vector<Value> payments;
    payments.reserve(env.agent_count());
    for (std::size_t i = 0; i < env.agent_count(); ++i) {
        Value peers_at_chosen;
        for (std::size_t j = 0; j < env.agent_count(); ++j) {
            if (j == i) continue;
            peers_at_chosen += valuation_at(env, j, profile.types[j], chosen);
        }
        payments.push_back(peers_at_chosen - peers_best_welfare(env, profile, i));
    }
    return payments;
}

std::vector<Value> vcg_budget_payments(const Environment& env, const OptionRule& rule,
                                       const TypeProfile& profile) {
    require_tabular_welfare_rule(env, rule, profile);
    const OptionId chosen = rule.select(env, profile);

    std::vector<Value> payments;
    payments.reserve(env.agent_count());
    TypeProfile deviated = profile;
    for (std::size_t i = 0; i < env.agent_count(); ++i) {
        Value pivot;
        bool first = true;
        for (std::size_t k = 0; k < env.domain_size(i); ++k) {
            deviated.types[i] = k;
            const Value best = social_welfare(env, deviated, rule.select(env, deviated));
            if (first || best < pivot) {
                pivot = best;
                first = false;
            }
        }
        deviated.types[i] = profile.types[i];

        Value peers_at_chosen;
        for (std::size_t j = 0; j < env.agent_count(); ++j) {
            if (j == i) continue;
            peers_at_chosen += valuation_at(env, j, profile.types[j], chosen);
        }
        payments.push_back(peers_at_chosen - pivot);
    }
    return payments;
}

std::vector<Value> weighted_vcg_payments(const Environment& env, const OptionRule& rule,
                                         const TypeProfile& profile, WeightedPivot pivot) {
    if (!env.tabular())
        throw InputError("weighted VCG pivots are unsupported on line option spaces");
    if (rule.family() != OptionRule::Family::Affine)
        throw InputError("weighted VCG payments require an affine-family rule");
    require_valid_profile(env, profile);

    const AffineWeights& w = *rule.affine_weights();
    const std::size_t n = env.agent_count();
    const std::size_t m = env.option_count();
    const OptionId chosen = rule.select(env, profile);

    // weighted objective at `option` under `types`, optionally excluding one agent
    const auto objective = [&](const TypeProfile& types, std::size_t option,
                               std::size_t excluded) {
        Value total = w.option_weights[option];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == excluded) continue;
            total += w.agent_weights[j] *
                     std::get<std::vector<Value>>(env.domains[j][types.types[j]])[option];
        }
        return total;
    };
    const std::size_t nobody = n;  // sentinel: exclude no agent

    std::vector<Value> payments;
    payments.reserve(n);
    TypeProfile deviated = profile;
    for (std::size_t i = 0; i < n; ++i) {
        Value h;
        if (pivot == WeightedPivot::Ama) {
            bool first = true;
            for (std::size_t x = 0; x < m; ++x) {
                const Value score = objective(profile, x, i);
                if (first || h < score) {
                    h = score;
                    first = false;
                }
            }
        } else {
            bool first = true;
            for (std::size_t k = 0; k < env.domain_size(i); ++k) {
                deviated.types[i] = k;
                const OptionId at = rule.select(env, deviated);
                const Value best = objective(deviated, std::get<std::size_t>(at), nobody);
                if (first || best < h) {
                    h = best;
                    first = false;
                }
            }
            deviated.types[i] = profile.types[i];
        }
        const Value peers = objective(profile, std::get<std::size_t>(chosen), i);
        payments.push_back((peers - h) / w.agent_weights[i]);
    }
    return payments;
}

}  // namespace mechkit
