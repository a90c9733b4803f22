#pragma once

#include "mechkit/audit.hpp"
#include "mechkit/redistribution.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace mechkit {

/// Integers that fit a JSON number are emitted as numbers; everything else as a
/// canonical "p/q" string. Floating-point JSON numbers are rejected on input so
/// every value round-trips exactly.
nlohmann::json value_to_json(const Value& value);
Value value_from_json(const nlohmann::json& j);

nlohmann::json option_to_json(const OptionId& option);

/// Environment document:
///   {"agents": n, "options": m | {"interval": [lo, hi]},
///    "domains": [[[q, ...], ...], ...], "rule": {...}?}
/// Tabular types are length-m value arrays; line types are [a, b, c] triples.
Environment environment_from_json(const nlohmann::json& j);
nlohmann::json environment_to_json(const Environment& env);

/// Rule element: {"family": "se" | "affine" | "table", "tie_break": "lowest" |
/// "highest"?, "agent_weights": [...]?, "option_weights": [...]?,
/// "options": [...]?} (table entries in profile-rank order).
OptionRule rule_from_json(const nlohmann::json& j, const Environment& env);
nlohmann::json rule_to_json(const OptionRule& rule);

nlohmann::json outcome_to_json(const MechanismOutcome& outcome);
nlohmann::json violations_to_json(const std::vector<Violation>& violations);
nlohmann::json dominance_to_json(const DominanceReport& report);

/// Payment table as CSV: profile,agent,payment (profile as comma-free rank).
std::string payment_table_to_csv(const Environment& env, const PaymentTable& table);

struct EnvironmentDocument {
    Environment env;
    std::optional<nlohmann::json> rule;
};

EnvironmentDocument read_environment_document(const std::string& path);

/// Writes via a temporary file in the same directory plus rename, so readers
/// never observe a truncated file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace mechkit
