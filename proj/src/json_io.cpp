#include "mechkit/json_io.hpp"

#include "mechkit/errors.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace mechkit {

namespace {

const char* kind_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::SE: return "se";
        case ViolationKind::DSIC: return "dsic";
        case ViolationKind::IR: return "ir";
        case ViolationKind::Dominance: return "dominance";
    }
    return "?";
}

}  // namespace

nlohmann::json value_to_json(const Value& value) {
    if (value.is_integer()) {
        const auto num = value.numerator();
        if (num >= std::numeric_limits<std::int64_t>::min() &&
            num <= std::numeric_limits<std::int64_t>::max())
            return static_cast<std::int64_t>(num);
    }
    return value.str();
}

Value value_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Value(static_cast<long long>(j.get<std::int64_t>()));
    if (j.is_number_unsigned()) {
        const auto u = j.get<std::uint64_t>();
        return Value::parse(std::to_string(u));
    }
    if (j.is_string()) return Value::parse(j.get<std::string>());
    if (j.is_number_float())
        throw InputError("floating-point values are not accepted; use integers or \"p/q\"");
    throw InputError("expected a rational value, got " + j.dump());
}

nlohmann::json option_to_json(const OptionId& option) {
    if (const auto* idx = std::get_if<std::size_t>(&option))
        return static_cast<std::uint64_t>(*idx);
    return std::get<Value>(option).str();
}

Environment environment_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("environment document must be a JSON object");
    if (!j.contains("agents") || !j.contains("options") || !j.contains("domains"))
        throw InputError("environment document needs agents, options and domains");

    Environment env;
    const auto agents = j.at("agents");
    if (!agents.is_number_integer() && !agents.is_number_unsigned())
        throw InputError("agents must be an integer");
    const auto n = agents.get<std::int64_t>();
    if (n < 1) throw InputError("agents must be at least 1");

    const auto& options = j.at("options");
    if (options.is_number_integer() || options.is_number_unsigned()) {
        const auto m = options.get<std::int64_t>();
        if (m < 1) throw InputError("options must be at least 1");
        env.options = TabularOptions{static_cast<std::size_t>(m)};
    } else if (options.is_object() && options.contains("interval")) {
        const auto& interval = options.at("interval");
        if (!interval.is_array() || interval.size() != 2)
            throw InputError("interval must be [lo, hi]");
        env.options = LineOptions{value_from_json(interval[0]), value_from_json(interval[1])};
    } else {
        throw InputError("options must be a count or {\"interval\": [lo, hi]}");
    }

    const auto& domains = j.at("domains");
    if (!domains.is_array() || domains.size() != static_cast<std::size_t>(n))
        throw InputError("domains must list one type domain per agent");
    env.domains.reserve(domains.size());
    for (const auto& domain : domains) {
        if (!domain.is_array()) throw InputError("each type domain must be an array of types");
        std::vector<Valuation> types;
        types.reserve(domain.size());
        for (const auto& type : domain) {
            if (!type.is_array()) throw InputError("each type must be an array of values");
            if (env.tabular()) {
                std::vector<Value> table;
                table.reserve(type.size());
                for (const auto& cell : type) table.push_back(value_from_json(cell));
                types.emplace_back(std::move(table));
            } else {
                if (type.size() != 3)
                    throw InputError("line-environment types are [a, b, c] triples");
                types.emplace_back(QuadraticValuation{value_from_json(type[0]),
                                                      value_from_json(type[1]),
                                                      value_from_json(type[2])});
            }
        }
        env.domains.push_back(std::move(types));
    }

    const auto violations = validate_environment(env);
    if (!violations.empty()) throw InputError("invalid environment: " + violations.front());
    return env;
}

nlohmann::json environment_to_json(const Environment& env) {
    nlohmann::json j;
    j["agents"] = env.agent_count();
    if (env.tabular()) {
        j["options"] = env.option_count();
    } else {
        const auto& line = std::get<LineOptions>(env.options);
        j["options"] = {{"interval", {value_to_json(line.lo), value_to_json(line.hi)}}};
    }
    nlohmann::json domains = nlohmann::json::array();
    for (const auto& domain : env.domains) {
        nlohmann::json types = nlohmann::json::array();
        for (const auto& type : domain) {
            nlohmann::json row = nlohmann::json::array();
            if (const auto* table = std::get_if<std::vector<Value>>(&type)) {
                for (const auto& v : *table) row.push_back(value_to_json(v));
            } else {
                const auto& quad = std::get<QuadraticValuation>(type);
                row = {value_to_json(quad.a), value_to_json(quad.b), value_to_json(quad.c)};
            }
            types.push_back(std::move(row));
        }
        domains.push_back(std::move(types));
    }
    j["domains"] = std::move(domains);
    return j;
}

OptionRule rule_from_json(const nlohmann::json& j, const Environment& env) {
    if (!j.is_object() || !j.contains("family"))
        throw InputError("rule element needs a \"family\"");
    const auto family = j.at("family").get<std::string>();

    TieBreak tie_break = TieBreak::lowest();
    if (j.contains("tie_break")) {
        const auto name = j.at("tie_break").get<std::string>();
        if (name == "lowest")
            tie_break = TieBreak::lowest();
        else if (name == "highest")
            tie_break = TieBreak::highest();
        else
            throw InputError("unknown tie_break '" + name + "' (use lowest or highest)");
    }

    if (family == "se") return OptionRule::se(tie_break);
    if (family == "affine") {
        AffineWeights weights;
        for (const auto& w : j.at("agent_weights")) weights.agent_weights.push_back(value_from_json(w));
        for (const auto& w : j.at("option_weights"))
            weights.option_weights.push_back(value_from_json(w));
        return OptionRule::affine(std::move(weights), tie_break);
    }
    if (family == "table") {
        if (!env.tabular()) throw InputError("table rules require a tabular option space");
        std::vector<OptionId> entries;
        for (const auto& cell : j.at("options")) {
            if (!cell.is_number_integer() && !cell.is_number_unsigned())
                throw InputError("table entries are option indices");
            entries.push_back(OptionId{static_cast<std::size_t>(cell.get<std::uint64_t>())});
        }
        return OptionRule::table(env, std::move(entries));
    }
    throw InputError("unknown rule family '" + family + "'");
}

nlohmann::json rule_to_json(const OptionRule& rule) {
    nlohmann::json j;
    const char* tie = rule.tie_break().policy() == TieBreak::Policy::HighestIndex ? "highest"
                                                                                  : "lowest";
    switch (rule.family()) {
        case OptionRule::Family::SocialEfficiency:
            j["family"] = "se";
            j["tie_break"] = tie;
            break;
        case OptionRule::Family::Affine: {
            j["family"] = "affine";
            j["tie_break"] = tie;
            nlohmann::json aw = nlohmann::json::array();
            for (const auto& w : rule.affine_weights()->agent_weights) aw.push_back(value_to_json(w));
            nlohmann::json ow = nlohmann::json::array();
            for (const auto& w : rule.affine_weights()->option_weights)
                ow.push_back(value_to_json(w));
            j["agent_weights"] = std::move(aw);
            j["option_weights"] = std::move(ow);
            break;
        }
        case OptionRule::Family::Table: {
            j["family"] = "table";
            nlohmann::json entries = nlohmann::json::array();
            for (const auto& option : *rule.table_entries()) entries.push_back(option_to_json(option));
            j["options"] = std::move(entries);
            break;
        }
    }
    return j;
}

nlohmann::json outcome_to_json(const MechanismOutcome& outcome) {
    nlohmann::json j;
    j["option"] = option_to_json(outcome.option);
    j["option_label"] = option_label(outcome.option);
    nlohmann::json payments = nlohmann::json::array();
    for (const auto& p : outcome.payments) payments.push_back(value_to_json(p));
    nlohmann::json utilities = nlohmann::json::array();
    for (const auto& u : outcome.utilities) utilities.push_back(value_to_json(u));
    j["payments"] = std::move(payments);
    j["utilities"] = std::move(utilities);
    j["budget"] = value_to_json(outcome.budget);
    return j;
}

nlohmann::json violations_to_json(const std::vector<Violation>& violations) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& v : violations) {
        nlohmann::json row;
        row["kind"] = kind_name(v.kind);
        if (v.agent) row["agent"] = *v.agent;
        row["profile"] = v.profile.types;
        if (v.deviation) row["deviation"] = *v.deviation;
        row["lhs"] = value_to_json(v.lhs);
        row["rhs"] = value_to_json(v.rhs);
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json dominance_to_json(const DominanceReport& report) {
    nlohmann::json j;
    nlohmann::json diffs = nlohmann::json::array();
    for (const auto& d : report.budget_diffs) diffs.push_back(value_to_json(d));
    j["budget_diffs"] = std::move(diffs);
    j["strict_improvements"] = report.strict_improvements;
    j["clarke_compared"] = report.clarke_compared;
    j["violations"] = violations_to_json(report.violations);
    return j;
}

std::string payment_table_to_csv(const Environment& env, const PaymentTable& table) {
    std::ostringstream os;
    os << "profile,agent,payment\n";
    for (std::size_t r = 0; r < table.payments.size(); ++r) {
        const TypeProfile profile = profile_at(env, r);
        std::string key;
        for (std::size_t i = 0; i < profile.types.size(); ++i) {
            if (i > 0) key += ';';
            key += std::to_string(profile.types[i]);
        }
        for (std::size_t i = 0; i < table.payments[r].size(); ++i)
            os << key << ',' << i << ',' << table.payments[r][i].str() << '\n';
    }
    return os.str();
}

EnvironmentDocument read_environment_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open environment file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("cannot parse '" + path + "': " + e.what());
    }
    EnvironmentDocument doc{environment_from_json(j), std::nullopt};
    if (j.contains("rule")) doc.rule = j.at("rule");
    return doc;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw InputError("short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InputError("cannot rename '" + tmp.string() + "' to '" + target.string() + "': " +
                         ec.message());
    }
}

}  // namespace mechkit
