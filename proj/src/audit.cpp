#include "mechkit/audit.hpp"

#include "mechkit/errors.hpp"

#include <algorithm>

namespace mechkit {

namespace {

// Materialized mechanism over all profiles: option and payments per rank.
struct Tabulation {
    std::size_t profiles;
    std::vector<OptionId> option;
    std::vector<std::vector<Value>> payments;
};

Tabulation tabulate(const Environment& env, const OptionRule& rule, const PaymentFn& payments,
                    std::size_t profile_cap) {
    Tabulation t;
    t.profiles = profile_count(env, profile_cap);
    t.option.reserve(t.profiles);
    t.payments.reserve(t.profiles);
    for (std::size_t r = 0; r < t.profiles; ++r) {
        const TypeProfile profile = profile_at(env, r);
        t.option.push_back(rule.select(env, profile));
        t.payments.push_back(payments(profile));
        if (t.payments.back().size() != env.agent_count())
            throw InputError("payment rule returned a wrong-sized vector");
    }
    return t;
}

}  // namespace

PaymentFn bind_payments(const Environment& env, const OptionRule& rule, const PaymentSpec& spec) {
    return [&env, rule, spec](const TypeProfile& profile) {
        return payments_for(env, rule, profile, spec);
    };
}

std::vector<Violation> check_se(const Environment& env, const OptionRule& rule,
                                std::size_t profile_cap) {
    if (!env.tabular()) throw InputError("check_se requires a tabular option space");
    const std::size_t profiles = profile_count(env, profile_cap);

    std::vector<Violation> violations;
    for (std::size_t r = 0; r < profiles; ++r) {
        const TypeProfile profile = profile_at(env, r);
        const OptionId chosen = rule.select(env, profile);
        const Value achieved = social_welfare(env, profile, chosen);
        const Value best = social_welfare(env, profile, se_argmax_set(env, profile).front());
        if (achieved < best)
            violations.push_back(
                {ViolationKind::SE, std::nullopt, profile, std::nullopt, achieved, best});
    }
    return violations;
}

std::vector<Violation> check_dsic(const Environment& env, const OptionRule& rule,
                                  const PaymentFn& payments, std::size_t profile_cap) {
    const Tabulation t = tabulate(env, rule, payments, profile_cap);

    std::vector<Violation> violations;
    for (std::size_t r = 0; r < t.profiles; ++r) {
        const TypeProfile profile = profile_at(env, r);
        for (std::size_t i = 0; i < env.agent_count(); ++i) {
            const Value truthful =
                valuation_at(env, i, profile.types[i], t.option[r]) + t.payments[r][i];
            TypeProfile deviated = profile;
            for (std::size_t k = 0; k < env.domain_size(i); ++k) {
                if (k == profile.types[i]) continue;
                deviated.types[i] = k;
                const std::size_t dr = profile_rank(env, deviated);
                const Value defector =
                    valuation_at(env, i, profile.types[i], t.option[dr]) + t.payments[dr][i];
                if (truthful < defector)
                    violations.push_back(
                        {ViolationKind::DSIC, i, profile, k, truthful, defector});
            }
        }
    }
    return violations;
}

std::vector<Violation> check_dsic(const Environment& env, const OptionRule& rule,
                                  const PaymentSpec& spec, std::size_t profile_cap) {
    return check_dsic(env, rule, bind_payments(env, rule, spec), profile_cap);
}

std::vector<Violation> check_ir(const Environment& env, const OptionRule& rule,
                                const PaymentFn& payments, std::size_t profile_cap) {
    const Tabulation t = tabulate(env, rule, payments, profile_cap);

    std::vector<Violation> violations;
    for (std::size_t r = 0; r < t.profiles; ++r) {
        const TypeProfile profile = profile_at(env, r);
        for (std::size_t i = 0; i < env.agent_count(); ++i) {
            const Value utility =
                valuation_at(env, i, profile.types[i], t.option[r]) + t.payments[r][i];
            if (utility < Value(0))
                violations.push_back(
                    {ViolationKind::IR, i, profile, std::nullopt, utility, Value(0)});
        }
    }
    return violations;
}

std::vector<Violation> check_ir(const Environment& env, const OptionRule& rule,
                                const PaymentSpec& spec, std::size_t profile_cap) {
    return check_ir(env, rule, bind_payments(env, rule, spec), profile_cap);
}

Value oracle_min_payment(const Environment& env, const OptionRule& rule, std::size_t agent,
                         const TypeProfile& profile) {
    require_valid_profile(env, profile);
    if (agent >= env.agent_count()) throw InputError("agent index out of range");
    const std::size_t d = env.domain_size(agent);
    if (d > 8)
        throw CapacityError("type domain of size " + std::to_string(d) +
                                " exceeds the oracle's path-enumeration bound of 8",
                            std::to_string(d));

    // Constraint weights, written out directly from the truthfulness and
    // participation inequalities rather than taken from a built graph.
    TypeProfile deviated = profile;
    std::vector<OptionId> selected(d);
    for (std::size_t k = 0; k < d; ++k) {
        deviated.types[agent] = k;
        selected[k] = rule.select(env, deviated);
    }
    std::vector<std::vector<Value>> value_at(d, std::vector<Value>(d));
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t j = 0; j < d; ++j)
            value_at[k][j] = valuation_at(env, agent, k, selected[j]);

    const std::size_t target = profile.types[agent];
    std::optional<Value> best;
    std::vector<bool> visited(d, false);

    // All simple paths source -> ... -> target, minimum total length.
    auto walk = [&](auto&& self, std::size_t at, const Value& cost) -> void {
        if (at == target) {
            if (!best || cost < *best) best = cost;
            return;
        }
        visited[at] = true;
        for (std::size_t next = 0; next < d; ++next) {
            if (visited[next]) continue;
            self(self, next, cost + value_at[next][next] - value_at[next][at]);
        }
        visited[at] = false;
    };
    for (std::size_t first = 0; first < d; ++first) {
        if (first == target) {
            const Value cost = value_at[first][first];
            if (!best || cost < *best) best = cost;
            continue;
        }
        visited[first] = true;
        walk(walk, first, value_at[first][first]);
        std::fill(visited.begin(), visited.end(), false);
    }
    return *best;
}

bool all_types_non_negative(const Environment& env) {
    for (const auto& domain : env.domains) {
        for (const auto& type : domain) {
            const auto* table = std::get_if<std::vector<Value>>(&type);
            if (!table) return false;
            for (const auto& v : *table)
                if (v.sign() < 0) return false;
        }
    }
    return true;
}

DominanceReport check_dominance(const Environment& env, const OptionRule& rule,
                                std::size_t profile_cap) {
    if (!env.tabular()) throw InputError("check_dominance requires a tabular option space");
    const std::size_t profiles = profile_count(env, profile_cap);

    DominanceReport report;
    report.clarke_compared = all_types_non_negative(env);
    report.budget_diffs.reserve(profiles);
    for (std::size_t r = 0; r < profiles; ++r) {
        const TypeProfile profile = profile_at(env, r);
        const auto proposed = compute_payments(env, rule, profile);
        const auto budget_pivot = vcg_budget_payments(env, rule, profile);
        std::vector<Value> clarke;
        if (report.clarke_compared) clarke = clarke_payments(env, rule, profile);

        Value b_proposed, b_pivot;
        for (std::size_t i = 0; i < env.agent_count(); ++i) {
            b_proposed += proposed[i];
            b_pivot += budget_pivot[i];
            if (budget_pivot[i] < proposed[i])
                report.violations.push_back({ViolationKind::Dominance, i, profile, std::nullopt,
                                             proposed[i], budget_pivot[i]});
            if (report.clarke_compared && clarke[i] < budget_pivot[i])
                report.violations.push_back({ViolationKind::Dominance, i, profile, std::nullopt,
                                             budget_pivot[i], clarke[i]});
        }
        report.budget_diffs.push_back(b_proposed - b_pivot);
        if (b_pivot < b_proposed)
            report.violations.push_back({ViolationKind::Dominance, std::nullopt, profile,
                                         std::nullopt, b_proposed, b_pivot});
        if (b_proposed < b_pivot) ++report.strict_improvements;
    }
    return report;
}

}  // namespace mechkit
