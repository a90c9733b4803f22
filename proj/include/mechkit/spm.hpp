#pragma once

#include "mechkit/rules.hpp"
#include "mechkit/vcg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace mechkit {

/// Edge-list weighted digraph with exact rational weights.
struct Digraph {
    struct Edge {
        std::size_t from;
        std::size_t to;
        Value weight;
    };

    std::size_t vertex_count = 0;
    std::vector<Edge> edges;
};

/// One agent's deviation graph at a profile. Vertices 0..d-1 are the agent's type
/// indices; the last vertex is the source. Edge weights:
///   source -> k       : v^k(o(k))
///   k1 -> k2          : v^k2(o(k2)) - v^k2(o(k1))
/// where o(k) is the rule's selection after replacing the agent's report with
/// type k. The graph is independent of the agent's own report, and it has no
/// negative cycle whenever the rule is welfare- or affine-maximizing.
struct TypeGraph {
    std::size_t agent = 0;
    Digraph graph;
    std::vector<OptionId> selected;  // o(k) per type index

    std::size_t star() const { return graph.vertex_count - 1; }
};

/// Quotient of a TypeGraph by the "same selected option" relation; parallel edges
/// collapse to the minimum weight. Shortest distances from the source are
/// preserved: types mapping to one option are mutually joined by zero-weight
/// edges in the full graph, so they share a distance.
struct ContractedGraph {
    std::size_t agent = 0;
    Digraph graph;
    std::vector<OptionId> option_of_vertex;   // labels of vertices 0..n_i-1
    std::vector<std::size_t> vertex_of_type;  // type index -> contracted vertex

    std::size_t star() const { return graph.vertex_count - 1; }
};

TypeGraph build_type_graph(const Environment& env, const OptionRule& rule, std::size_t agent,
                           const TypeProfile& profile);

ContractedGraph contract_graph(const TypeGraph& graph, const OptionRule& rule,
                               const Environment& env, std::size_t agent,
                               const TypeProfile& profile);

/// Exact shortest-walk distance by label-correcting relaxation. Throws
/// NegativeCycleError when a negative directed cycle lies on a source-to-target
/// walk, and InputError when the target is unreachable.
Value shortest_distance(const Digraph& graph, std::size_t source, std::size_t target);

/// Graphviz dot rendering (vertex labels, rational edge weights).
std::string to_dot(const TypeGraph& graph, const Environment& env);
std::string to_dot(const ContractedGraph& graph);

enum class PaymentMode {
    Full,        // solve on the full type graph
    Contracted,  // solve on the option-contracted graph
    Auto,        // contract when it has strictly fewer vertices
};

/// Payments of the shortest-path mechanism: tau_i = -(distance source -> v_i in
/// agent i's graph). The tightest payments compatible with truthfulness and
/// individual rationality for the given rule; modes agree exactly.
std::vector<Value> compute_payments(const Environment& env, const OptionRule& rule,
                                    const TypeProfile& profile,
                                    PaymentMode mode = PaymentMode::Auto);

/// Payment engine selector for assembled runs and audits.
struct PaymentSpec {
    enum class Kind { Proposed, Clarke, VcgBudget, WeightedVcg };

    Kind kind = Kind::Proposed;
    PaymentMode mode = PaymentMode::Auto;      // Proposed only
    WeightedPivot pivot = WeightedPivot::Ama;  // WeightedVcg only

    static PaymentSpec proposed(PaymentMode mode = PaymentMode::Auto) {
        return {Kind::Proposed, mode, WeightedPivot::Ama};
    }
    static PaymentSpec clarke() { return {Kind::Clarke}; }
    static PaymentSpec vcg_budget() { return {Kind::VcgBudget}; }
    static PaymentSpec weighted_vcg(WeightedPivot pivot) {
        return {Kind::WeightedVcg, PaymentMode::Auto, pivot};
    }
};

std::vector<Value> payments_for(const Environment& env, const OptionRule& rule,
                                const TypeProfile& profile, const PaymentSpec& spec);

/// Selects the option, computes payments per `spec`, and assembles the outcome.
MechanismOutcome run_mechanism(const Environment& env, const OptionRule& rule,
                               const TypeProfile& profile, const PaymentSpec& spec);

}  // namespace mechkit
