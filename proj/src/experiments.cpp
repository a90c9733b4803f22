#include "mechkit/experiments.hpp"

#include "mechkit/audit.hpp"
#include "mechkit/errors.hpp"
#include "mechkit/rng.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mechkit {

namespace {

ExperimentConfig point_config(const ExperimentConfig& base, std::size_t x) {
    ExperimentConfig pt = base;
    pt.sweep.reset();
    pt.seed = substream_seed(base.seed, x);
    switch (base.sweep->param) {
        case ExperimentConfig::Param::Agents: pt.agents = SizeSpec::fixed(x); break;
        case ExperimentConfig::Param::Options: pt.options = SizeSpec::fixed(x); break;
        case ExperimentConfig::Param::DomainSize: pt.domain_size = SizeSpec::fixed(x); break;
    }
    return pt;
}

std::size_t resolve_size(const SizeSpec& spec, SplitMix64& rng) {
    if (spec.kind == SizeSpec::Kind::Fixed) return spec.value;
    return 1 + static_cast<std::size_t>(rng.below(spec.value));
}

ComparisonStats make_stats(const std::vector<Value>& diffs) {
    ComparisonStats stats;
    stats.diffs = diffs;
    stats.count = diffs.size();
    for (const auto& d : diffs) {
        stats.mean_diff += d;
        if (d.sign() < 0) ++stats.strict_count;
    }
    if (stats.count > 0) stats.mean_diff /= Value(static_cast<long long>(stats.count));
    for (const auto& d : diffs) {
        const Value centered = d - stats.mean_diff;
        stats.variance_biased += centered * centered;
    }
    if (stats.count > 0) stats.variance_biased /= Value(static_cast<long long>(stats.count));
    return stats;
}

}  // namespace

Value ComparisonStats::fraction_strict() const {
    if (count == 0) return Value(0);
    return Value(static_cast<long long>(strict_count), static_cast<long long>(count));
}

double ComparisonStats::stddev_diff() const { return std::sqrt(variance_biased.to_double()); }

void validate_config(const ExperimentConfig& config) {
    if (config.instances == 0) throw InputError("instance count must be at least 1");
    if (config.agents.value == 0 || config.options.value == 0 || config.domain_size.value == 0)
        throw InputError("agents, options and domain size must all be at least 1");
    if (config.value_hi < config.value_lo)
        throw InputError("value range requires lo <= hi");
    if (config.sweep && (config.sweep->from == 0 || config.sweep->to < config.sweep->from))
        throw InputError("sweep range requires 1 <= from <= to");
}

std::pair<Environment, TypeProfile> generate_instance(const ExperimentConfig& config,
                                                      std::uint64_t instance_index) {
    validate_config(config);
    SplitMix64 rng(substream_seed(config.seed, instance_index));

    const std::size_t agents = resolve_size(config.agents, rng);
    const std::size_t options = resolve_size(config.options, rng);
    const std::size_t domain_size = resolve_size(config.domain_size, rng);

    Environment env;
    env.options = TabularOptions{options};
    env.domains.resize(agents);
    for (std::size_t i = 0; i < agents; ++i) {
        env.domains[i].reserve(domain_size);
        for (std::size_t k = 0; k < domain_size; ++k) {
            std::vector<Value> table;
            table.reserve(options);
            for (std::size_t x = 0; x < options; ++x)
                table.emplace_back(rng.int_in(config.value_lo, config.value_hi));
            env.domains[i].emplace_back(std::move(table));
        }
    }

    TypeProfile profile;
    profile.types.reserve(agents);
    for (std::size_t i = 0; i < agents; ++i) profile.types.push_back(rng.below(domain_size));
    return {std::move(env), std::move(profile)};
}

BudgetComparison compare_budgets(const Environment& env, const TypeProfile& profile,
                                 const OptionRule& rule) {
    const auto proposed = compute_payments(env, rule, profile);
    const auto pivot = vcg_budget_payments(env, rule, profile);

    BudgetComparison cmp;
    for (std::size_t i = 0; i < env.agent_count(); ++i) {
        if (pivot[i] < proposed[i])
            throw std::logic_error("dominance violated: proposed payment exceeds VCG-budget "
                                   "payment for agent " + std::to_string(i));
        cmp.budget_proposed += proposed[i];
        cmp.budget_vcg_budget += pivot[i];
    }
    if (all_types_non_negative(env)) {
        const auto clarke = clarke_payments(env, rule, profile);
        for (std::size_t i = 0; i < env.agent_count(); ++i) {
            if (clarke[i] < pivot[i])
                throw std::logic_error("dominance violated: VCG-budget payment exceeds Clarke "
                                       "payment for agent " + std::to_string(i));
        }
    }
    cmp.diff = cmp.budget_proposed - cmp.budget_vcg_budget;
    if (cmp.diff.sign() > 0)
        throw std::logic_error("dominance violated: proposed budget exceeds VCG-budget budget");
    return cmp;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    validate_config(config);

    std::vector<std::size_t> xs;
    if (config.sweep) {
        for (std::size_t x = config.sweep->from; x <= config.sweep->to; ++x) xs.push_back(x);
    } else {
        xs.push_back(0);
    }

    unsigned jobs = config.jobs != 0 ? config.jobs : std::thread::hardware_concurrency();
    if (jobs == 0) jobs = 1;

    ExperimentResult result;
    for (const std::size_t x : xs) {
        const ExperimentConfig pt = config.sweep ? point_config(config, x) : config;

        struct Slot {
            Value budget_proposed, budget_vcg_budget, diff;
            std::size_t agents = 0, options = 0, domain_size = 0;
            double seconds = 0.0;
        };
        std::vector<Slot> slots(pt.instances);
        std::atomic<std::uint64_t> cursor{0};
        std::atomic<bool> failed{false};
        std::string failure;
        std::mutex failure_mutex;

        auto worker = [&]() {
            for (;;) {
                const std::uint64_t idx = cursor.fetch_add(1);
                if (idx >= pt.instances || failed.load()) return;
                try {
                    const auto started = std::chrono::steady_clock::now();
                    const auto [env, profile] = generate_instance(pt, idx);
                    const OptionRule rule = OptionRule::se();
                    const BudgetComparison cmp = compare_budgets(env, profile, rule);

                    if (pt.audit_every != 0 && idx % pt.audit_every == 0) {
                        bool small = true;
                        try {
                            profile_count(env, 10000);
                        } catch (const CapacityError&) {
                            small = false;
                        }
                        if (small) {
                            for (const auto spec :
                                 {PaymentSpec::proposed(), PaymentSpec::vcg_budget()}) {
                                if (!check_dsic(env, rule, spec).empty() ||
                                    !check_ir(env, rule, spec).empty())
                                    throw std::logic_error(
                                        "spot audit failed on instance " + std::to_string(idx));
                            }
                        }
                    }

                    auto& slot = slots[idx];
                    slot.budget_proposed = cmp.budget_proposed;
                    slot.budget_vcg_budget = cmp.budget_vcg_budget;
                    slot.diff = cmp.diff;
                    slot.agents = env.agent_count();
                    slot.options = env.option_count();
                    slot.domain_size = env.domain_size(0);
                    slot.seconds =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                            .count();
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    failed.store(true);
                    failure = e.what();
                }
            }
        };

        std::vector<std::thread> pool;
        const unsigned spawn = static_cast<unsigned>(std::min<std::uint64_t>(jobs, pt.instances));
        for (unsigned t = 0; t + 1 < spawn; ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
        if (failed.load()) throw std::runtime_error("experiment failed: " + failure);

        std::vector<Value> diffs;
        diffs.reserve(pt.instances);
        double max_seconds = 0.0;
        for (std::uint64_t idx = 0; idx < pt.instances; ++idx) {
            const auto& slot = slots[idx];
            result.rows.push_back({idx, slot.agents, slot.options, slot.domain_size, pt.value_lo,
                                   pt.value_hi, slot.budget_proposed, slot.budget_vcg_budget,
                                   slot.diff});
            diffs.push_back(slot.diff);
            max_seconds = std::max(max_seconds, slot.seconds);
        }

        ExperimentResult::Point point;
        point.x = config.sweep ? std::optional<std::size_t>(x) : std::nullopt;
        point.stats = make_stats(diffs);
        point.max_instance_seconds = max_seconds;
        result.points.push_back(std::move(point));
    }
    return result;
}

std::string to_csv(const ExperimentResult& result) {
    std::ostringstream os;
    os << "instance,n,m,d,lo,hi,budget_proposed,budget_vcgb,diff\n";
    for (const auto& row : result.rows) {
        os << row.instance << ',' << row.agents << ',' << row.options << ',' << row.domain_size
           << ',' << row.value_lo << ',' << row.value_hi << ',' << row.budget_proposed.str()
           << ',' << row.budget_vcg_budget.str() << ',' << row.diff.str() << '\n';
    }
    return os.str();
}

std::string summary_json(const ExperimentResult& result) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& point : result.points) {
        nlohmann::json row;
        if (point.x)
            row["x"] = *point.x;
        else
            row["x"] = nullptr;
        row["mean_diff"] = point.stats.mean_diff.str();
        row["stddev_diff"] = point.stats.stddev_diff();
        row["fraction_strict"] = point.stats.fraction_strict().to_double();
        row["count"] = point.stats.count;
        points.push_back(std::move(row));
    }
    return points.dump(2) + "\n";
}

std::pair<Environment, TypeProfile> vickrey_instance(const std::vector<Value>& prices,
                                                     const std::vector<std::size_t>& bids) {
    if (prices.empty()) throw InputError("price ladder must be non-empty");
    for (std::size_t k = 0; k < prices.size(); ++k) {
        if (prices[k].sign() <= 0)
            throw InputError("price " + std::to_string(k) + " must be strictly positive");
        if (k > 0 && !(prices[k] < prices[k - 1]))
            throw InputError("prices must be strictly decreasing");
    }
    if (bids.empty()) throw InputError("at least one bidder required");
    for (const std::size_t b : bids)
        if (b >= prices.size()) throw InputError("bid index " + std::to_string(b) + " out of range");

    const std::size_t n = bids.size();
    Environment env;
    env.options = TabularOptions{n};
    env.domains.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        env.domains[i].reserve(prices.size());
        for (std::size_t k = 0; k < prices.size(); ++k) {
            std::vector<Value> table(n, Value(0));
            table[i] = prices[k];
            env.domains[i].emplace_back(std::move(table));
        }
    }
    TypeProfile profile;
    profile.types = bids;
    return {std::move(env), std::move(profile)};
}

Environment venue_instance(const std::vector<std::vector<QuadraticValuation>>& params,
                           const Value& lo, const Value& hi) {
    Environment env;
    env.options = LineOptions{lo, hi};
    env.domains.reserve(params.size());
    for (const auto& agent_types : params) {
        std::vector<Valuation> domain;
        domain.reserve(agent_types.size());
        for (const auto& quad : agent_types) domain.emplace_back(quad);
        env.domains.push_back(std::move(domain));
    }
    require_valid_environment(env);
    return env;
}

}  // namespace mechkit
