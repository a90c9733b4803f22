// mechkit command line: run a mechanism on an environment file, audit it, or
// reproduce the random-instance budget experiments.

#include "mechkit/audit.hpp"
#include "mechkit/errors.hpp"
#include "mechkit/experiments.hpp"
#include "mechkit/json_io.hpp"
#include "mechkit/redistribution.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace mechkit;

constexpr int kExitInput = 1;
constexpr int kExitNegativeCycle = 2;
constexpr int kExitCapacity = 3;

TypeProfile parse_profile(const std::string& text) {
    TypeProfile profile;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string digit =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            profile.types.push_back(std::stoull(digit));
        } catch (const std::exception&) {
            throw InputError("cannot parse profile entry '" + digit + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return profile;
}

OptionRule parse_rule(const std::string& spec, const Environment& env,
                      const std::optional<nlohmann::json>& doc_rule) {
    if (spec.empty()) {
        if (doc_rule) return rule_from_json(*doc_rule, env);
        return OptionRule::se();
    }
    if (spec == "se" || spec == "se:lowest") return OptionRule::se(TieBreak::lowest());
    if (spec == "se:highest") return OptionRule::se(TieBreak::highest());
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    if (head == "affine" || head == "table") {
        if (colon == std::string::npos)
            throw InputError("rule spec '" + spec + "' needs a file: " + head + ":FILE");
        const std::string path = spec.substr(colon + 1);
        std::ifstream in(path);
        if (!in) throw InputError("cannot open rule file '" + path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw InputError("cannot parse rule file '" + path + "': " + e.what());
        }
        if (!j.contains("family")) j["family"] = head;
        return rule_from_json(j, env);
    }
    throw InputError("unknown rule spec '" + spec +
                     "' (use se:lowest, se:highest, affine:FILE or table:FILE)");
}

PaymentSpec parse_payment(const std::string& spec, const std::string& mode) {
    PaymentMode pm = PaymentMode::Auto;
    if (mode == "full")
        pm = PaymentMode::Full;
    else if (mode == "contracted")
        pm = PaymentMode::Contracted;
    else if (mode != "auto")
        throw InputError("unknown payment mode '" + mode + "'");

    if (spec == "proposed") return PaymentSpec::proposed(pm);
    if (spec == "clarke") return PaymentSpec::clarke();
    if (spec == "vcg-budget") return PaymentSpec::vcg_budget();
    if (spec == "weighted-vcg" || spec == "weighted-vcg:ama")
        return PaymentSpec::weighted_vcg(WeightedPivot::Ama);
    if (spec == "weighted-vcg:budget")
        return PaymentSpec::weighted_vcg(WeightedPivot::BudgetAnalog);
    throw InputError("unknown payment spec '" + spec +
                     "' (use proposed, clarke, vcg-budget, weighted-vcg[:ama|:budget])");
}

std::uint64_t seed_or_env(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("MECHKIT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InputError("MECHKIT_SEED must be a 64-bit unsigned integer");
        }
    }
    return 0;
}

int cmd_run(const std::string& env_path, const std::string& profile_text,
            const std::string& rule_spec, const std::string& payment_spec,
            const std::string& mode, bool audit, const std::string& dump_graph_path,
            bool redistribute_flag) {
    const EnvironmentDocument doc = read_environment_document(env_path);
    const TypeProfile profile = parse_profile(profile_text);
    require_valid_profile(doc.env, profile);
    const OptionRule rule = parse_rule(rule_spec, doc.env, doc.rule);
    const PaymentSpec spec = parse_payment(payment_spec, mode);

    if (!dump_graph_path.empty()) {
        std::string dot;
        for (std::size_t i = 0; i < doc.env.agent_count(); ++i)
            dot += to_dot(build_type_graph(doc.env, rule, i, profile), doc.env);
        write_file_atomic(dump_graph_path, dot);
    }

    MechanismOutcome outcome = run_mechanism(doc.env, rule, profile, spec);
    nlohmann::json out = outcome_to_json(outcome);

    if (redistribute_flag) {
        const PaymentTable table = tabulate_mechanism(doc.env, rule, spec);
        const PaymentTable rebated = redistribute(doc.env, table);
        const std::size_t rank = profile_rank(doc.env, profile);
        MechanismOutcome after =
            assemble_outcome(doc.env, profile, outcome.option, rebated.payments[rank]);
        out["redistributed"] = outcome_to_json(after);
    }

    if (audit) {
        nlohmann::json report;
        if (doc.env.tabular()) report["se"] = violations_to_json(check_se(doc.env, rule));
        const auto dsic = check_dsic(doc.env, rule, spec);
        const auto ir = check_ir(doc.env, rule, spec);
        report["dsic"] = violations_to_json(dsic);
        report["ir"] = violations_to_json(ir);
        out["audit"] = std::move(report);
        if (!ir.empty())
            std::cerr << "warning: " << ir.size() << " individual-rationality violation(s)\n";
        if (!dsic.empty())
            std::cerr << "warning: " << dsic.size() << " truthfulness violation(s)\n";
    }

    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_audit(const std::string& env_path, const std::string& rule_spec,
              const std::string& payment_spec, bool oracle, bool dominance) {
    const EnvironmentDocument doc = read_environment_document(env_path);
    const OptionRule rule = parse_rule(rule_spec, doc.env, doc.rule);
    const PaymentSpec spec = parse_payment(payment_spec, "auto");

    nlohmann::json report;
    if (doc.env.tabular()) report["se"] = violations_to_json(check_se(doc.env, rule));
    report["dsic"] = violations_to_json(check_dsic(doc.env, rule, spec));
    report["ir"] = violations_to_json(check_ir(doc.env, rule, spec));

    if (oracle) {
        nlohmann::json mismatches = nlohmann::json::array();
        std::size_t checked = 0, skipped = 0;
        const std::size_t profiles = profile_count(doc.env, kAuditProfileCap);
        for (std::size_t r = 0; r < profiles; ++r) {
            const TypeProfile profile = profile_at(doc.env, r);
            const auto payments = compute_payments(doc.env, rule, profile);
            for (std::size_t i = 0; i < doc.env.agent_count(); ++i) {
                if (doc.env.domain_size(i) > 8) {
                    ++skipped;
                    continue;
                }
                const Value bound = oracle_min_payment(doc.env, rule, i, profile);
                ++checked;
                if (payments[i] != -bound) {
                    nlohmann::json row;
                    row["agent"] = i;
                    row["profile"] = profile.types;
                    row["payment"] = value_to_json(payments[i]);
                    row["oracle"] = value_to_json(-bound);
                    mismatches.push_back(std::move(row));
                }
            }
        }
        report["oracle"] = {{"checked", checked}, {"skipped", skipped},
                            {"mismatches", std::move(mismatches)}};
    }

    if (dominance) report["dominance"] = dominance_to_json(check_dominance(doc.env, rule));

    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_experiment(const ExperimentConfig& config, const std::string& out_csv,
                   const std::string& out_summary) {
    const ExperimentResult result = run_experiment(config);
    write_file_atomic(out_csv, to_csv(result));
    const std::string summary = summary_json(result);
    write_file_atomic(out_summary, summary);
    std::cout << summary;
    return 0;
}

int cmd_demo(const std::string& which) {
    if (which == "vickrey") {
        const std::vector<Value> prices{5, 4, 3, 2, 1};
        const std::vector<std::size_t> bids{0, 2, 4};  // p1, p3, p5
        const auto [env, profile] = vickrey_instance(prices, bids);
        const OptionRule rule = OptionRule::se();
        nlohmann::json out;
        out["demo"] = "vickrey";
        out["prices"] = {"5", "4", "3", "2", "1"};
        out["bids"] = profile.types;
        out["proposed"] = outcome_to_json(run_mechanism(env, rule, profile, PaymentSpec::proposed()));
        out["vcg_budget"] =
            outcome_to_json(run_mechanism(env, rule, profile, PaymentSpec::vcg_budget()));
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    if (which == "venue") {
        const std::vector<std::vector<QuadraticValuation>> guests{
            {{Value(1), Value(3), Value(0)}, {Value(2), Value(6), Value(0)}},
            {{Value(1), Value(8), Value(0)}},
        };
        const Environment env = venue_instance(guests, Value(0), Value(10));
        const TypeProfile profile{{0, 0}};
        const OptionRule rule = OptionRule::se();
        nlohmann::json out;
        out["demo"] = "venue";
        out["interval"] = {"0", "10"};
        out["proposed"] = outcome_to_json(run_mechanism(env, rule, profile, PaymentSpec::proposed()));
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    throw InputError("unknown demo '" + which + "' (use vickrey or venue)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Budget-optimal mechanism toolkit: shortest-path payments, VCG "
                 "baselines, exhaustive audits and experiment reproduction"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run one mechanism on an environment file");
    std::string env_path, profile_text, rule_spec, payment_spec = "proposed", mode = "auto";
    std::string dump_graph;
    bool audit_flag = false, redistribute_flag = false;
    run->add_option("--env", env_path, "Environment JSON file")->required();
    run->add_option("--profile", profile_text, "Comma-separated type indices")->required();
    run->add_option("--rule", rule_spec,
                    "Option rule: se:lowest, se:highest, affine:FILE, table:FILE");
    run->add_option("--payment", payment_spec,
                    "Payment engine: proposed, clarke, vcg-budget, weighted-vcg[:ama|:budget]");
    run->add_option("--mode", mode, "Proposed-engine graph mode: auto, full, contracted");
    run->add_flag("--audit", audit_flag, "Attach exhaustive SE/DSIC/IR audit to the output");
    run->add_flag("--redistribute", redistribute_flag,
                  "Also report the outcome after surplus redistribution");
    run->add_option("--dump-graph", dump_graph, "Write the per-agent graphs as Graphviz dot");

    // audit
    auto* audit = app.add_subcommand("audit", "Exhaustively audit a mechanism");
    std::string a_env, a_rule, a_payment = "proposed";
    bool a_oracle = false, a_dominance = false;
    audit->add_option("--env", a_env, "Environment JSON file")->required();
    audit->add_option("--rule", a_rule, "Option rule spec");
    audit->add_option("--payment", a_payment, "Payment engine spec");
    audit->add_flag("--oracle", a_oracle,
                    "Cross-check payments against the path-enumeration bound (domains <= 8)");
    audit->add_flag("--dominance", a_dominance, "Attach the VCG dominance report");

    // experiment
    auto* experiment = app.add_subcommand("experiment",
                                          "Random-instance budget comparison (CSV + summary)");
    ExperimentConfig config;
    std::optional<std::uint64_t> seed_flag;
    std::optional<std::size_t> n_fixed, m_fixed, d_fixed, n_max, m_max, d_max;
    std::string range_text = "-100:100", sweep_param, out_csv = "experiment.csv";
    std::string out_summary = "experiment_summary.json", demo;
    std::size_t sweep_from = 1, sweep_to = 0;
    experiment->add_option("--n", n_fixed, "Number of agents, fixed (default 16)");
    experiment->add_option("--m", m_fixed, "Number of options, fixed");
    experiment->add_option("--d", d_fixed, "Types per agent, fixed");
    experiment->add_option("--n-max", n_max, "Draw the agent count per instance from 1..N");
    experiment->add_option("--m-max", m_max,
                           "Draw the option count per instance from 1..M (default 256)");
    experiment->add_option("--d-max", d_max,
                           "Draw the domain size per instance from 1..D (default 16)");
    experiment->add_option("--range", range_text, "Integer value range lo:hi (default -100:100)");
    experiment->add_option("--instances", config.instances, "Instances per point (default 1000)");
    experiment->add_option("--seed", seed_flag, "Base seed (falls back to MECHKIT_SEED, then 0)");
    experiment->add_option("--sweep", sweep_param, "Sweep one size: n, m or d");
    experiment->add_option("--from", sweep_from, "Sweep start (default 1)");
    experiment->add_option("--to", sweep_to, "Sweep end (inclusive)");
    experiment->add_option("--jobs", config.jobs, "Worker threads (default: all cores)");
    experiment->add_option("--audit-every", config.audit_every,
                           "Spot-audit cadence, 0 disables (default 50)");
    experiment->add_option("--out-csv", out_csv, "Per-instance CSV path");
    experiment->add_option("--out-summary", out_summary, "Summary JSON path");
    experiment->add_option("--demo", demo, "Run a bundled demo instead: vickrey or venue");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed())
            return cmd_run(env_path, profile_text, rule_spec, payment_spec, mode, audit_flag,
                           dump_graph, redistribute_flag);
        if (audit->parsed()) return cmd_audit(a_env, a_rule, a_payment, a_oracle, a_dominance);
        if (experiment->parsed()) {
            if (!demo.empty()) return cmd_demo(demo);
            config.seed = seed_or_env(seed_flag);
            const auto size_spec = [](std::optional<std::size_t> fixed,
                                      std::optional<std::size_t> max, SizeSpec fallback,
                                      const char* what) {
                if (fixed && max)
                    throw InputError(std::string("give either a fixed ") + what +
                                     " or a draw bound, not both");
                if (fixed) return SizeSpec::fixed(*fixed);
                if (max) return SizeSpec::uniform_up_to(*max);
                return fallback;
            };
            config.agents = size_spec(n_fixed, n_max, config.agents, "agent count");
            config.options = size_spec(m_fixed, m_max, config.options, "option count");
            config.domain_size = size_spec(d_fixed, d_max, config.domain_size, "domain size");
            const auto colon = range_text.rfind(':');
            if (colon == std::string::npos)
                throw InputError("range must be lo:hi, got '" + range_text + "'");
            try {
                config.value_lo = std::stoll(range_text.substr(0, colon));
                config.value_hi = std::stoll(range_text.substr(colon + 1));
            } catch (const std::exception&) {
                throw InputError("range must be lo:hi, got '" + range_text + "'");
            }
            if (!sweep_param.empty()) {
                ExperimentConfig::Sweep sweep;
                if (sweep_param == "n")
                    sweep.param = ExperimentConfig::Param::Agents;
                else if (sweep_param == "m")
                    sweep.param = ExperimentConfig::Param::Options;
                else if (sweep_param == "d")
                    sweep.param = ExperimentConfig::Param::DomainSize;
                else
                    throw InputError("unknown sweep parameter '" + sweep_param + "'");
                sweep.from = sweep_from;
                sweep.to = sweep_to;
                config.sweep = sweep;
            }
            return cmd_experiment(config, out_csv, out_summary);
        }
    } catch (const NegativeCycleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNegativeCycle;
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
