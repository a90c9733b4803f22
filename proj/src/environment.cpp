#include "mechkit/environment.hpp"

#include "mechkit/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <utility>

namespace mechkit {

std::string option_label(const OptionId& option) {
    if (const auto* idx = std::get_if<std::size_t>(&option))
        return "X" + std::to_string(*idx + 1);
    return "x=" + std::get<Value>(option).str();
}

std::size_t Environment::option_count() const {
    const auto* tab = std::get_if<TabularOptions>(&options);
    if (!tab) throw InputError("option_count requires a tabular option space");
    return tab->count;
}

Value valuation_at(const Environment& env, const Valuation& type, const OptionId& option) {
    if (const auto* table = std::get_if<std::vector<Value>>(&type)) {
        const auto* idx = std::get_if<std::size_t>(&option);
        if (!idx) throw InputError("tabular valuation evaluated at a non-index option");
        if (*idx >= table->size())
            throw InputError("option index " + std::to_string(*idx) + " out of range");
        return (*table)[*idx];
    }
    const auto& quad = std::get<QuadraticValuation>(type);
    const auto* x = std::get_if<Value>(&option);
    if (!x) throw InputError("quadratic valuation evaluated at a non-coordinate option");
    const Value dx = *x - quad.b;
    return -(quad.a * dx * dx) - quad.c;
}

Value valuation_at(const Environment& env, std::size_t agent, std::size_t type_index,
                   const OptionId& option) {
    if (agent >= env.agent_count())
        throw InputError("agent index " + std::to_string(agent) + " out of range");
    if (type_index >= env.domain_size(agent))
        throw InputError("type index " + std::to_string(type_index) + " out of range for agent " +
                         std::to_string(agent));
    return valuation_at(env, env.domains[agent][type_index], option);
}

Value social_welfare(const Environment& env, const TypeProfile& profile, const OptionId& option) {
    require_valid_profile(env, profile);
    require_valid_option(env, option);
    Value total;
    for (std::size_t i = 0; i < env.agent_count(); ++i)
        total += valuation_at(env, i, profile.types[i], option);
    return total;
}

MechanismOutcome assemble_outcome(const Environment& env, const TypeProfile& profile,
                                  const OptionId& option, std::vector<Value> payments) {
    require_valid_profile(env, profile);
    require_valid_option(env, option);
    if (payments.size() != env.agent_count())
        throw InputError("expected " + std::to_string(env.agent_count()) + " payments, got " +
                         std::to_string(payments.size()));
    MechanismOutcome out;
    out.option = option;
    out.utilities.reserve(payments.size());
    for (std::size_t i = 0; i < payments.size(); ++i) {
        out.budget += payments[i];
        out.utilities.push_back(valuation_at(env, i, profile.types[i], option) + payments[i]);
    }
    out.payments = std::move(payments);
    return out;
}

std::vector<std::string> validate_environment(const Environment& env) {
    std::vector<std::string> violations;
    if (env.domains.empty()) violations.push_back("environment must have at least one agent");

    const auto* tab = std::get_if<TabularOptions>(&env.options);
    const auto* line = std::get_if<LineOptions>(&env.options);
    if (tab && tab->count == 0)
        violations.push_back("tabular option space must contain at least one option");
    if (line && line->hi < line->lo)
        violations.push_back("line option space requires lo <= hi, got [" + line->lo.str() + ", " +
                             line->hi.str() + "]");

    for (std::size_t i = 0; i < env.domains.size(); ++i) {
        const auto& domain = env.domains[i];
        if (domain.empty()) {
            violations.push_back("agent " + std::to_string(i) + ": type domain must be non-empty");
            continue;
        }
        for (std::size_t k = 0; k < domain.size(); ++k) {
            const std::string where = "agent " + std::to_string(i) + " type " + std::to_string(k);
            if (const auto* table = std::get_if<std::vector<Value>>(&domain[k])) {
                if (!tab) {
                    violations.push_back(where + ": tabular valuation in a line environment");
                } else if (table->size() != tab->count) {
                    violations.push_back(where + ": expected " + std::to_string(tab->count) +
                                         " option values, got " + std::to_string(table->size()));
                }
            } else {
                const auto& quad = std::get<QuadraticValuation>(domain[k]);
                if (!line) {
                    violations.push_back(where + ": quadratic valuation in a tabular environment");
                }
                if (quad.a.sign() <= 0) {
                    violations.push_back(where + ": quadratic coefficient a must be strictly positive, got " +
                                         quad.a.str());
                }
            }
        }
    }
    return violations;
}

void require_valid_environment(const Environment& env) {
    const auto violations = validate_environment(env);
    if (!violations.empty()) throw InputError("invalid environment: " + violations.front());
}

void require_valid_profile(const Environment& env, const TypeProfile& profile) {
    if (profile.types.size() != env.agent_count())
        throw InputError("profile lists " + std::to_string(profile.types.size()) +
                         " types for " + std::to_string(env.agent_count()) + " agents");
    for (std::size_t i = 0; i < profile.types.size(); ++i) {
        if (profile.types[i] >= env.domain_size(i))
            throw InputError("profile type index " + std::to_string(profile.types[i]) +
                             " out of range for agent " + std::to_string(i));
    }
}

void require_valid_option(const Environment& env, const OptionId& option) {
    if (const auto* idx = std::get_if<std::size_t>(&option)) {
        if (!env.tabular() || *idx >= env.option_count())
            throw InputError("option index " + std::to_string(*idx) + " not in the option space");
        return;
    }
    const auto* line = std::get_if<LineOptions>(&env.options);
    const auto& x = std::get<Value>(option);
    if (!line || x < line->lo || line->hi < x)
        throw InputError("option coordinate " + x.str() + " not in the option space");
}

std::size_t profile_count(const Environment& env, std::size_t cap) {
    boost::multiprecision::cpp_int product = 1;
    for (std::size_t i = 0; i < env.agent_count(); ++i) product *= env.domain_size(i);
    if (product > cap)
        throw CapacityError("profile count " + product.str() + " exceeds cap " + std::to_string(cap),
                            product.str());
    return static_cast<std::size_t>(product);
}

std::size_t profile_rank(const Environment& env, const TypeProfile& profile) {
    require_valid_profile(env, profile);
    std::size_t rank = 0;
    for (std::size_t i = 0; i < profile.types.size(); ++i)
        rank = rank * env.domain_size(i) + profile.types[i];
    return rank;
}

TypeProfile profile_at(const Environment& env, std::size_t rank) {
    TypeProfile profile;
    profile.types.resize(env.agent_count());
    for (std::size_t i = env.agent_count(); i-- > 0;) {
        const std::size_t d = env.domain_size(i);
        profile.types[i] = rank % d;
        rank /= d;
    }
    if (rank != 0) throw InputError("profile rank out of range");
    return profile;
}

}  // namespace mechkit
