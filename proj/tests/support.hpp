#pragma once

// Shared fixtures: the two-agent tie environment, small random environments,
// and payment-rule helpers used across the suites.

#include "mechkit/environment.hpp"
#include "mechkit/rng.hpp"
#include "mechkit/rules.hpp"

#include <vector>

namespace mechkit::testing {

inline Environment tabular_env(const std::vector<std::vector<std::vector<long long>>>& domains) {
    Environment env;
    env.options = TabularOptions{domains.front().front().size()};
    for (const auto& domain : domains) {
        std::vector<Valuation> types;
        for (const auto& row : domain) {
            std::vector<Value> table(row.begin(), row.end());
            types.emplace_back(std::move(table));
        }
        env.domains.push_back(std::move(types));
    }
    return env;
}

// Two agents, three options. Agent A has two types, agent B one; the welfare
// argmax ties between X2 and X3 whenever A reports its second type.
inline Environment tie_env(long long alpha = 1) {
    return tabular_env({
        {{alpha, 0, 0}, {-3 * alpha, -2 * alpha, 0}},
        {{0, 0, -2 * alpha}},
    });
}

struct RandomEnvBounds {
    std::size_t max_agents = 4;
    std::size_t max_options = 6;
    std::size_t max_domain = 4;
    long long lo = -6;
    long long hi = 6;
};

inline Environment random_env(SplitMix64& rng, const RandomEnvBounds& bounds = {}) {
    const std::size_t n = 1 + rng.below(bounds.max_agents);
    const std::size_t m = 1 + rng.below(bounds.max_options);
    Environment env;
    env.options = TabularOptions{m};
    env.domains.resize(n);
    for (auto& domain : env.domains) {
        const std::size_t d = 1 + rng.below(bounds.max_domain);
        for (std::size_t k = 0; k < d; ++k) {
            std::vector<Value> table;
            for (std::size_t x = 0; x < m; ++x) table.emplace_back(rng.int_in(bounds.lo, bounds.hi));
            domain.emplace_back(std::move(table));
        }
    }
    return env;
}

inline TypeProfile random_profile(const Environment& env, SplitMix64& rng) {
    TypeProfile profile;
    for (std::size_t i = 0; i < env.agent_count(); ++i)
        profile.types.push_back(rng.below(env.domain_size(i)));
    return profile;
}

// Positive rational weights in {1/2, 1, 3/2, 2, 5/2} and small biases.
inline AffineWeights random_weights(const Environment& env, SplitMix64& rng) {
    AffineWeights weights;
    for (std::size_t i = 0; i < env.agent_count(); ++i)
        weights.agent_weights.push_back(Value(1 + static_cast<long long>(rng.below(5)), 2));
    for (std::size_t x = 0; x < env.option_count(); ++x)
        weights.option_weights.push_back(Value(rng.int_in(-4, 4), 2));
    return weights;
}

}  // namespace mechkit::testing
