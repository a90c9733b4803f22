// Python bindings for the mechanism toolkit. Exact rationals cross the boundary
// as fractions.Fraction; environments and reports as plain Python containers.

#include "mechkit/audit.hpp"
#include "mechkit/errors.hpp"
#include "mechkit/experiments.hpp"
#include "mechkit/json_io.hpp"
#include "mechkit/redistribution.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

namespace py = pybind11;
using namespace mechkit;

namespace pybind11 {
namespace detail {

// Value <-> fractions.Fraction, via the canonical decimal string on both legs.
template <>
struct type_caster<Value> {
public:
    PYBIND11_TYPE_CASTER(Value, const_name("fractions.Fraction"));

    bool load(handle src, bool) {
        if (src.is_none()) return false;
        object fraction = module_::import("fractions").attr("Fraction");
        object as_fraction;
        try {
            as_fraction = fraction(src);
        } catch (const error_already_set&) {
            return false;
        }
        const std::string num = str(as_fraction.attr("numerator"));
        const std::string den = str(as_fraction.attr("denominator"));
        try {
            value = Value::parse(num + "/" + den);
        } catch (const InputError&) {
            return false;
        }
        return true;
    }

    static handle cast(const Value& src, return_value_policy, handle) {
        object fraction = module_::import("fractions").attr("Fraction");
        return fraction(src.str()).release();
    }
};

}  // namespace detail
}  // namespace pybind11

namespace {

OptionId option_from_py(const py::object& obj) {
    if (py::isinstance<py::int_>(obj)) return OptionId{obj.cast<std::size_t>()};
    return OptionId{obj.cast<Value>()};
}

py::object option_to_py(const OptionId& option) {
    if (const auto* idx = std::get_if<std::size_t>(&option)) return py::cast(*idx);
    return py::cast(std::get<Value>(option));
}

py::dict outcome_to_py(const MechanismOutcome& outcome) {
    py::dict d;
    d["option"] = option_to_py(outcome.option);
    d["option_label"] = option_label(outcome.option);
    d["payments"] = py::cast(outcome.payments);
    d["utilities"] = py::cast(outcome.utilities);
    d["budget"] = py::cast(outcome.budget);
    return d;
}

py::list violations_to_py(const std::vector<Violation>& violations) {
    py::list rows;
    for (const auto& v : violations) {
        py::dict row;
        switch (v.kind) {
            case ViolationKind::SE: row["kind"] = "se"; break;
            case ViolationKind::DSIC: row["kind"] = "dsic"; break;
            case ViolationKind::IR: row["kind"] = "ir"; break;
            case ViolationKind::Dominance: row["kind"] = "dominance"; break;
        }
        if (v.agent) row["agent"] = *v.agent;
        row["profile"] = py::cast(v.profile.types);
        if (v.deviation) row["deviation"] = *v.deviation;
        row["lhs"] = py::cast(v.lhs);
        row["rhs"] = py::cast(v.rhs);
        rows.append(std::move(row));
    }
    return rows;
}

PaymentSpec spec_from_name(const std::string& name) {
    if (name == "proposed") return PaymentSpec::proposed();
    if (name == "proposed-full") return PaymentSpec::proposed(PaymentMode::Full);
    if (name == "proposed-contracted") return PaymentSpec::proposed(PaymentMode::Contracted);
    if (name == "clarke") return PaymentSpec::clarke();
    if (name == "vcg-budget") return PaymentSpec::vcg_budget();
    if (name == "weighted-vcg" || name == "weighted-vcg:ama")
        return PaymentSpec::weighted_vcg(WeightedPivot::Ama);
    if (name == "weighted-vcg:budget") return PaymentSpec::weighted_vcg(WeightedPivot::BudgetAnalog);
    throw InputError("unknown payment engine '" + name + "'");
}

ExperimentConfig config_from_kwargs(std::uint64_t seed, std::size_t instances, std::size_t agents,
                                    std::size_t options, std::size_t domain_size, long long lo,
                                    long long hi, std::size_t audit_every, unsigned jobs,
                                    bool draw_agents, bool draw_options, bool draw_domain) {
    ExperimentConfig config;
    config.seed = seed;
    config.instances = instances;
    config.agents = draw_agents ? SizeSpec::uniform_up_to(agents) : SizeSpec::fixed(agents);
    config.options = draw_options ? SizeSpec::uniform_up_to(options) : SizeSpec::fixed(options);
    config.domain_size =
        draw_domain ? SizeSpec::uniform_up_to(domain_size) : SizeSpec::fixed(domain_size);
    config.value_lo = lo;
    config.value_hi = hi;
    config.audit_every = audit_every;
    config.jobs = jobs;
    return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Budget-optimal mechanisms over finite type domains: shortest-path "
              "payments, VCG baselines, exhaustive audits, experiments";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
    py::register_exception<NegativeCycleError>(m, "NegativeCycleError", PyExc_RuntimeError);

    py::class_<Environment>(m, "Environment")
        .def_static(
            "from_json",
            [](const std::string& text) { return environment_from_json(nlohmann::json::parse(text)); },
            py::arg("text"), "Parse an environment document from a JSON string.")
        .def("to_json", [](const Environment& env) { return environment_to_json(env).dump(); })
        .def_property_readonly("agents", &Environment::agent_count)
        .def_property_readonly("tabular", &Environment::tabular)
        .def("domain_size", &Environment::domain_size, py::arg("agent"))
        .def("validate", [](const Environment& env) { return validate_environment(env); })
        .def("profiles", [](const Environment& env) { return profile_count(env, 1000000); });

    py::class_<OptionRule>(m, "OptionRule")
        .def_static(
            "se",
            [](const std::string& tie) {
                return OptionRule::se(tie == "highest" ? TieBreak::highest() : TieBreak::lowest());
            },
            py::arg("tie_break") = "lowest")
        .def_static(
            "affine",
            [](std::vector<Value> agent_weights, std::vector<Value> option_weights,
               const std::string& tie) {
                return OptionRule::affine(
                    AffineWeights{std::move(agent_weights), std::move(option_weights)},
                    tie == "highest" ? TieBreak::highest() : TieBreak::lowest());
            },
            py::arg("agent_weights"), py::arg("option_weights"), py::arg("tie_break") = "lowest")
        .def_static(
            "table",
            [](const Environment& env, const std::vector<py::object>& entries) {
                std::vector<OptionId> by_rank;
                by_rank.reserve(entries.size());
                for (const auto& e : entries) by_rank.push_back(option_from_py(e));
                return OptionRule::table(env, std::move(by_rank));
            },
            py::arg("env"), py::arg("options"))
        .def(
            "select",
            [](const OptionRule& rule, const Environment& env, std::vector<std::size_t> types) {
                return option_to_py(rule.select(env, TypeProfile{std::move(types)}));
            },
            py::arg("env"), py::arg("profile"));

    m.def(
        "social_welfare",
        [](const Environment& env, std::vector<std::size_t> types, const py::object& option) {
            return social_welfare(env, TypeProfile{std::move(types)}, option_from_py(option));
        },
        py::arg("env"), py::arg("profile"), py::arg("option"));

    m.def(
        "quadratic_select",
        [](const Environment& env, std::vector<std::size_t> types) {
            return quadratic_select(env, TypeProfile{std::move(types)});
        },
        py::arg("env"), py::arg("profile"));

    m.def(
        "compute_payments",
        [](const Environment& env, const OptionRule& rule, std::vector<std::size_t> types,
           const std::string& mode) {
            PaymentMode pm = PaymentMode::Auto;
            if (mode == "full")
                pm = PaymentMode::Full;
            else if (mode == "contracted")
                pm = PaymentMode::Contracted;
            else if (mode != "auto")
                throw InputError("unknown payment mode '" + mode + "'");
            return compute_payments(env, rule, TypeProfile{std::move(types)}, pm);
        },
        py::arg("env"), py::arg("rule"), py::arg("profile"), py::arg("mode") = "auto",
        "Shortest-path payments; the tightest truthful, participation-safe payments.");

    m.def(
        "clarke_payments",
        [](const Environment& env, const OptionRule& rule, std::vector<std::size_t> types) {
            return clarke_payments(env, rule, TypeProfile{std::move(types)});
        },
        py::arg("env"), py::arg("rule"), py::arg("profile"));

    m.def(
        "vcg_budget_payments",
        [](const Environment& env, const OptionRule& rule, std::vector<std::size_t> types) {
            return vcg_budget_payments(env, rule, TypeProfile{std::move(types)});
        },
        py::arg("env"), py::arg("rule"), py::arg("profile"));

    m.def(
        "run_mechanism",
        [](const Environment& env, const OptionRule& rule, std::vector<std::size_t> types,
           const std::string& payment) {
            return outcome_to_py(
                run_mechanism(env, rule, TypeProfile{std::move(types)}, spec_from_name(payment)));
        },
        py::arg("env"), py::arg("rule"), py::arg("profile"), py::arg("payment") = "proposed");

    m.def(
        "check_se",
        [](const Environment& env, const OptionRule& rule) {
            return violations_to_py(check_se(env, rule));
        },
        py::arg("env"), py::arg("rule"));

    m.def(
        "check_dsic",
        [](const Environment& env, const OptionRule& rule, const std::string& payment) {
            return violations_to_py(check_dsic(env, rule, spec_from_name(payment)));
        },
        py::arg("env"), py::arg("rule"), py::arg("payment") = "proposed");

    m.def(
        "check_ir",
        [](const Environment& env, const OptionRule& rule, const std::string& payment) {
            return violations_to_py(check_ir(env, rule, spec_from_name(payment)));
        },
        py::arg("env"), py::arg("rule"), py::arg("payment") = "proposed");

    m.def(
        "oracle_min_payment",
        [](const Environment& env, const OptionRule& rule, std::size_t agent,
           std::vector<std::size_t> types) {
            return oracle_min_payment(env, rule, agent, TypeProfile{std::move(types)});
        },
        py::arg("env"), py::arg("rule"), py::arg("agent"), py::arg("profile"),
        "Independent path-enumeration bound on the agent's charge (domains <= 8).");

    m.def(
        "check_dominance",
        [](const Environment& env, const OptionRule& rule) {
            const DominanceReport report = check_dominance(env, rule);
            py::dict d;
            d["budget_diffs"] = py::cast(report.budget_diffs);
            d["strict_improvements"] = report.strict_improvements;
            d["clarke_compared"] = report.clarke_compared;
            d["violations"] = violations_to_py(report.violations);
            return d;
        },
        py::arg("env"), py::arg("rule"));

    m.def(
        "tabulate_mechanism",
        [](const Environment& env, const OptionRule& rule, const std::string& payment) {
            return tabulate_mechanism(env, rule, spec_from_name(payment)).payments;
        },
        py::arg("env"), py::arg("rule"), py::arg("payment") = "proposed",
        "Payments for every profile, in profile-rank order.");

    m.def(
        "redistribute",
        [](const Environment& env, std::vector<std::vector<Value>> payments) {
            PaymentTable table{std::move(payments)};
            return redistribute(env, table).payments;
        },
        py::arg("env"), py::arg("payments"));

    m.def(
        "enumerate_se_rules",
        [](const Environment& env, std::size_t cap) { return enumerate_se_rules(env, cap); },
        py::arg("env"), py::arg("cap") = 4096);

    m.def(
        "optimize_option_rule",
        [](const Environment& env, const std::string& aggregator, std::size_t cap) {
            const auto best = optimize_option_rule(
                env,
                aggregator == "max" ? BudgetAggregator::MaxBudget
                                    : BudgetAggregator::ExpectedBudgetUniform,
                cap);
            py::dict d;
            d["rule"] = py::cast(best.rule);
            d["aggregate"] = py::cast(best.aggregate);
            d["rule_index"] = best.rule_index;
            return d;
        },
        py::arg("env"), py::arg("aggregator") = "expected", py::arg("cap") = 4096);

    m.def(
        "generate_instance",
        [](std::uint64_t seed, std::uint64_t index, std::size_t agents, std::size_t options,
           std::size_t domain_size, long long lo, long long hi, bool draw_agents,
           bool draw_options, bool draw_domain) {
            auto config = config_from_kwargs(seed, 1, agents, options, domain_size, lo, hi, 0, 1,
                                             draw_agents, draw_options, draw_domain);
            auto [env, profile] = generate_instance(config, index);
            return py::make_tuple(std::move(env), profile.types);
        },
        py::arg("seed"), py::arg("index"), py::arg("agents") = 16, py::arg("options") = 256,
        py::arg("domain_size") = 16, py::arg("lo") = -100, py::arg("hi") = 100,
        py::arg("draw_agents") = false, py::arg("draw_options") = false,
        py::arg("draw_domain") = false);

    m.def(
        "compare_budgets",
        [](const Environment& env, std::vector<std::size_t> types, const OptionRule& rule) {
            const auto cmp = compare_budgets(env, TypeProfile{std::move(types)}, rule);
            py::dict d;
            d["budget_proposed"] = py::cast(cmp.budget_proposed);
            d["budget_vcg_budget"] = py::cast(cmp.budget_vcg_budget);
            d["diff"] = py::cast(cmp.diff);
            return d;
        },
        py::arg("env"), py::arg("profile"), py::arg("rule"));

    m.def(
        "run_experiment",
        [](std::uint64_t seed, std::size_t instances, std::size_t agents, std::size_t options,
           std::size_t domain_size, long long lo, long long hi, std::size_t audit_every,
           unsigned jobs, bool draw_agents, bool draw_options, bool draw_domain) {
            const auto result = run_experiment(
                config_from_kwargs(seed, instances, agents, options, domain_size, lo, hi,
                                   audit_every, jobs, draw_agents, draw_options, draw_domain));
            py::dict d;
            d["csv"] = to_csv(result);
            d["summary"] = summary_json(result);
            const auto& stats = result.points.front().stats;
            d["fraction_strict"] = py::cast(stats.fraction_strict());
            d["mean_diff"] = py::cast(stats.mean_diff);
            d["count"] = stats.count;
            return d;
        },
        py::arg("seed") = 0, py::arg("instances") = 100, py::arg("agents") = 16,
        py::arg("options") = 256, py::arg("domain_size") = 16, py::arg("lo") = -100,
        py::arg("hi") = 100, py::arg("audit_every") = 50, py::arg("jobs") = 0,
        py::arg("draw_agents") = false, py::arg("draw_options") = true,
        py::arg("draw_domain") = true);

    m.def(
        "vickrey_instance",
        [](const std::vector<Value>& prices, const std::vector<std::size_t>& bids) {
            auto [env, profile] = vickrey_instance(prices, bids);
            return py::make_tuple(std::move(env), profile.types);
        },
        py::arg("prices"), py::arg("bids"));

    m.def(
        "venue_instance",
        [](const std::vector<std::vector<std::tuple<Value, Value, Value>>>& params,
           const Value& lo, const Value& hi) {
            std::vector<std::vector<QuadraticValuation>> quads;
            quads.reserve(params.size());
            for (const auto& agent : params) {
                std::vector<QuadraticValuation> domain;
                domain.reserve(agent.size());
                for (const auto& [a, b, c] : agent) domain.push_back({a, b, c});
                quads.push_back(std::move(domain));
            }
            return venue_instance(quads, lo, hi);
        },
        py::arg("params"), py::arg("lo"), py::arg("hi"));
}
