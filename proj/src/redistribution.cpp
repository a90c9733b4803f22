#include "mechkit/redistribution.hpp"

#include "mechkit/errors.hpp"

#include <unordered_map>

namespace mechkit {

Value PaymentTable::budget_at(std::size_t rank) const {
    Value budget;
    for (const auto& payment : payments[rank]) budget += payment;
    return budget;
}

PaymentTable tabulate_mechanism(const Environment& env, const OptionRule& rule,
                                const PaymentSpec& spec, std::size_t profile_cap) {
    return tabulate_mechanism(env, rule, bind_payments(env, rule, spec), profile_cap);
}

PaymentTable tabulate_mechanism(const Environment& env, const OptionRule& rule,
                                const PaymentFn& payments, std::size_t profile_cap) {
    const std::size_t profiles = profile_count(env, profile_cap);
    PaymentTable table;
    table.payments.reserve(profiles);
    for (std::size_t r = 0; r < profiles; ++r) {
        table.payments.push_back(payments(profile_at(env, r)));
        if (table.payments.back().size() != env.agent_count())
            throw InputError("payment rule returned a wrong-sized vector");
    }
    return table;
}

PaymentTable redistribute(const Environment& env, const PaymentTable& table) {
    const std::size_t profiles = profile_count(env, kTabulateProfileCap);
    if (table.payments.size() != profiles)
        throw InputError("payment table covers " + std::to_string(table.payments.size()) +
                         " profiles, environment has " + std::to_string(profiles));

    PaymentTable out = table;
    std::vector<Value> budget(profiles);
    for (std::size_t r = 0; r < profiles; ++r) budget[r] = out.budget_at(r);

    // Profiles differing only in agent t's report share rank - types[t] * stride,
    // which keys the v_{-t} slices.
    for (std::size_t t = 0; t < env.agent_count(); ++t) {
        std::size_t stride = 1;
        for (std::size_t j = t + 1; j < env.agent_count(); ++j) stride *= env.domain_size(j);

        std::unordered_map<std::size_t, Value> slice_min;  // min over v_t' of -B
        slice_min.reserve(profiles / env.domain_size(t) + 1);
        for (std::size_t r = 0; r < profiles; ++r) {
            const std::size_t digit = (r / stride) % env.domain_size(t);
            const std::size_t key = r - digit * stride;
            const Value neg_budget = -budget[r];
            auto [it, inserted] = slice_min.emplace(key, neg_budget);
            if (!inserted && neg_budget < it->second) it->second = neg_budget;
        }

        for (std::size_t r = 0; r < profiles; ++r) {
            const std::size_t digit = (r / stride) % env.domain_size(t);
            const std::size_t key = r - digit * stride;
            const Value& rebate = slice_min.at(key);
            if (rebate.sign() > 0) {
                out.payments[r][t] += rebate;
                budget[r] += rebate;
            }
        }
    }
    return out;
}

}  // namespace mechkit
